#include "irb/util/fs.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace irb::util {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::optional<std::string> read_file_if_exists(const fs::path& path) {
    std::error_code ec;
    if (!fs::exists(path, ec)) return std::nullopt;
    return read_file(path);
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) ensure_dir(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("short write: " + tmp.string());
    }
    fs::rename(tmp, path);
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

std::vector<nlohmann::json> read_jsonl(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path.string());
    std::vector<nlohmann::json> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw Error("malformed JSON at " + path.string() + ":" + std::to_string(lineno));
        }
        out.push_back(std::move(j));
    }
    return out;
}

void write_jsonl(const fs::path& path, const std::vector<nlohmann::json>& records) {
    std::string buf;
    for (const auto& r : records) {
        buf += r.dump();
        buf += '\n';
    }
    write_file_atomic(path, buf);
}

void append_jsonl(const fs::path& path, const nlohmann::json& record) {
    if (path.has_parent_path()) ensure_dir(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot append to file: " + path.string());
    out << record.dump() << '\n';
}

}  // namespace irb::util
