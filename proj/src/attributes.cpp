#include "irb/bench/attributes.hpp"

#include <nlohmann/json.hpp>

#include "irb/util/fs.hpp"

namespace irb::bench {

std::string to_string(Language language) {
    return language == Language::english ? "english" : "cross";
}

Language language_from_string(const std::string& s) {
    if (s == "english") return Language::english;
    if (s == "cross") return Language::cross;
    throw util::Error("unknown language attribute: " + s);
}

const std::vector<std::string>& topic_buckets() {
    static const std::vector<std::string> buckets = {"Culture", "Geo", "History&Society", "STEM"};
    return buckets;
}

nlohmann::json SampleAttributes::to_json() const {
    return {{"language", bench::to_string(language)},
            {"freshness_year", freshness_year},
            {"topics", topics},
            {"hops", hops},
            {"false_premise", false_premise}};
}

SampleAttributes SampleAttributes::from_json(const nlohmann::json& j) {
    SampleAttributes a;
    a.language = language_from_string(j.at("language").get<std::string>());
    a.freshness_year = j.at("freshness_year").get<int>();
    a.topics = j.at("topics").get<std::vector<std::string>>();
    a.hops = j.at("hops").get<int>();
    a.false_premise = j.at("false_premise").get<bool>();
    return a;
}

}  // namespace irb::bench
