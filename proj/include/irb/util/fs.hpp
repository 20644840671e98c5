#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace irb::util {

namespace fs = std::filesystem;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path);
std::optional<std::string> read_file_if_exists(const fs::path& path);

/// Writes via a temp file + rename so readers never see partial content.
void write_file_atomic(const fs::path& path, std::string_view content);

void ensure_dir(const fs::path& dir);

/// One JSON value per line.
std::vector<nlohmann::json> read_jsonl(const fs::path& path);
void write_jsonl(const fs::path& path, const std::vector<nlohmann::json>& records);
void append_jsonl(const fs::path& path, const nlohmann::json& record);

}  // namespace irb::util
