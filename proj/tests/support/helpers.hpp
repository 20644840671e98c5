#pragma once

// Shared plumbing for the test binaries: locating the source tree, temp
// directories, and a deterministic RNG that is independent of the library's
// own splitmix generator.

#include <cstdlib>
#include <filesystem>
#include <atomic>
#include <random>
#include <string>

#include <unistd.h>

namespace irb_test {

namespace fs = std::filesystem;

inline fs::path source_dir() {
    if (const char* env = std::getenv("IRB_SOURCE_DIR")) return fs::path(env);
    return fs::current_path();
}

inline fs::path prompts_dir() { return source_dir() / "prompts"; }
inline fs::path data_dir() { return source_dir() / "data"; }
inline fs::path fixtures_dir() { return source_dir() / "fixtures"; }

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = fs::temp_directory_path() /
                ("irb-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

// mt19937_64-backed helpers so test-side randomness shares nothing with the
// library's splitmix64 streams.
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    std::size_t below(std::size_t n) {
        return n == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }
    int range(int lo, int hi) {  // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(engine_);
    }
    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    bool chance(double p) { return unit() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& pool) {
        return pool[below(pool.size())];
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace irb_test
