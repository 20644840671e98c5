#include "irb/qgen/kg.hpp"

#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "irb/util/strings.hpp"

namespace irb::qgen {

namespace {

std::optional<nlohmann::json> first_json_array(const std::string& text) {
    for (std::size_t start = text.find('['); start != std::string::npos;
         start = text.find('[', start + 1)) {
        int depth = 0;
        bool in_string = false, escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            char c = text[i];
            if (in_string) {
                if (escaped) escaped = false;
                else if (c == '\\') escaped = true;
                else if (c == '"') in_string = false;
                continue;
            }
            if (c == '"') in_string = true;
            else if (c == '[') ++depth;
            else if (c == ']') {
                --depth;
                if (depth == 0) {
                    auto j = nlohmann::json::parse(text.substr(start, i - start + 1), nullptr,
                                                   false);
                    if (!j.is_discarded() && j.is_array()) return j;
                    break;
                }
            }
        }
    }
    return std::nullopt;
}

std::string joined_keypoints(const facts::Fact& fact) {
    std::vector<std::string> texts;
    texts.reserve(fact.keypoints.size());
    for (const auto& kp : fact.keypoints) texts.push_back(kp.text);
    return util::join(texts, " ");
}

}  // namespace

nlohmann::json Triplet::to_json() const {
    return {{"head", head},
            {"head_type", head_type},
            {"relation", relation},
            {"tail", tail},
            {"tail_type", tail_type}};
}

Triplet Triplet::from_json(const nlohmann::json& j) {
    Triplet t;
    t.head = j.at("head").get<std::string>();
    t.head_type = j.at("head_type").get<std::string>();
    t.relation = j.at("relation").get<std::string>();
    t.tail = j.at("tail").get<std::string>();
    t.tail_type = j.at("tail_type").get<std::string>();
    return t;
}

std::optional<KnowledgeGraph> extract_kg(const facts::Fact& fact, llm::Gateway& gateway,
                                         const llm::PromptTemplate& kg_template) {
    std::map<std::string, std::string> bindings{{"ADD_KEYPOINTS_HERE", joined_keypoints(fact)}};

    for (int attempt = 0; attempt < 2; ++attempt) {  // one re-prompt on bad JSON
        std::string response;
        try {
            response = gateway.complete(kg_template, bindings).response_text;
        } catch (const llm::ProviderError&) {
            return std::nullopt;
        }
        auto arr = first_json_array(response);
        if (!arr) continue;

        KnowledgeGraph graph;
        graph.fact_id = fact.fact_id;
        std::map<std::string, std::string> head_types;  // entity consistency
        bool malformed = false;
        for (const auto& item : *arr) {
            if (!item.is_object()) {
                malformed = true;
                break;
            }
            Triplet t;
            t.head = util::trim(item.value("head", ""));
            t.head_type = util::trim(item.value("head_type", ""));
            t.relation = util::trim(item.value("relation", ""));
            t.tail = util::trim(item.value("tail", ""));
            t.tail_type = util::trim(item.value("tail_type", ""));
            if (t.head.empty() || t.relation.empty() || t.tail.empty()) continue;
            if (t.head_type.empty()) t.head_type = "Entity";
            if (t.tail_type.empty()) t.tail_type = "Entity";
            // A head reappearing with a different type keeps its first type.
            auto [it, inserted] = head_types.emplace(t.head, t.head_type);
            if (!inserted) t.head_type = it->second;
            graph.triplets.push_back(std::move(t));
        }
        if (malformed || graph.triplets.empty()) continue;
        return graph;
    }
    return std::nullopt;
}

double kg_coverage(const KnowledgeGraph& graph, const facts::Fact& fact) {
    std::set<std::string> keypoint_words;
    for (const auto& kp : fact.keypoints) {
        for (auto& w : util::content_words(kp.text)) keypoint_words.insert(std::move(w));
    }
    if (keypoint_words.empty()) {
        throw std::invalid_argument("kg_coverage: fact has no keypoint words");
    }
    std::set<std::string> graph_words;
    for (const auto& t : graph.triplets) {
        for (auto& w : util::content_words(t.head)) graph_words.insert(std::move(w));
        for (auto& w : util::content_words(t.relation)) graph_words.insert(std::move(w));
        for (auto& w : util::content_words(t.tail)) graph_words.insert(std::move(w));
    }
    std::size_t covered = 0;
    for (const auto& w : keypoint_words) covered += graph_words.count(w);
    return static_cast<double>(covered) / keypoint_words.size();
}

}  // namespace irb::qgen
