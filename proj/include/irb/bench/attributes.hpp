#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace irb::bench {

enum class Language { english, cross };

std::string to_string(Language language);
Language language_from_string(const std::string& s);

// The four topic buckets, in canonical order.
const std::vector<std::string>& topic_buckets();

struct SampleAttributes {
    Language language = Language::english;
    int freshness_year = 0;
    std::vector<std::string> topics;  // non-empty subset of topic_buckets()
    int hops = 1;                     // 1 or 2
    bool false_premise = false;

    bool operator==(const SampleAttributes&) const = default;

    nlohmann::json to_json() const;
    static SampleAttributes from_json(const nlohmann::json& j);
};

}  // namespace irb::bench
