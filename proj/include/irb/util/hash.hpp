#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace irb::util {

/// Hex-encoded SHA-256 of the bytes.
std::string sha256_hex(std::string_view data);

/// Stable document id for a URL: "d" + first 16 hex chars of sha256(url).
std::string doc_id_for_url(std::string_view url);

/// FNV-1a, used to derive per-item RNG streams from string keys.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace irb::util
