#include "irb/ingest/serialize.hpp"

#include <nlohmann/json.hpp>

#include "irb/util/fs.hpp"

namespace irb::ingest {

nlohmann::json to_json(const CitationGroup& group) {
    return {{"urls", group.urls}, {"position", group.position}};
}

CitationGroup citation_group_from_json(const nlohmann::json& j) {
    CitationGroup g;
    g.urls = j.at("urls").get<std::vector<std::string>>();
    g.position = j.at("position").get<std::size_t>();
    return g;
}

nlohmann::json to_json(const CitingSentence& sentence) {
    nlohmann::json segments = nlohmann::json::array();
    for (const auto& [text, group] : sentence.segments) {
        segments.push_back({{"text", text}, {"citation", to_json(group)}});
    }
    return {{"sentence_text", sentence.sentence_text},
            {"segments", segments},
            {"context",
             {{"title", sentence.context.title},
              {"abstract", sentence.context.abstract},
              {"before", sentence.context.before},
              {"after", sentence.context.after},
              {"header_path", sentence.context.header_path}}},
            {"page_id", sentence.page_id},
            {"last_updated", sentence.last_updated.iso()},
            {"cohort_year", sentence.cohort_year}};
}

CitingSentence citing_sentence_from_json(const nlohmann::json& j) {
    CitingSentence s;
    s.sentence_text = j.at("sentence_text").get<std::string>();
    for (const auto& segment : j.at("segments")) {
        s.segments.emplace_back(segment.at("text").get<std::string>(),
                                citation_group_from_json(segment.at("citation")));
    }
    const auto& context = j.at("context");
    s.context.title = context.at("title").get<std::string>();
    s.context.abstract = context.at("abstract").get<std::string>();
    s.context.before = context.at("before").get<std::vector<std::string>>();
    s.context.after = context.at("after").get<std::vector<std::string>>();
    s.context.header_path = context.at("header_path").get<std::vector<std::string>>();
    s.page_id = j.at("page_id").get<std::string>();
    auto date = util::parse_iso_date(j.at("last_updated").get<std::string>());
    if (!date) throw util::Error("bad last_updated in citing-sentence record");
    s.last_updated = *date;
    s.cohort_year = j.at("cohort_year").get<int>();
    return s;
}

}  // namespace irb::ingest
