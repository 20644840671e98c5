#include "irb/facts/facts.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "irb/util/hash.hpp"
#include "irb/util/strings.hpp"

namespace irb::facts {

namespace {

// Groundedness context cap, in bytes. Longer documents are tail-truncated
// (the lede usually carries the dates and claims) and the truncation is
// recorded in the gateway ledger.
constexpr std::size_t kGroundednessContextLimit = 24000;

// First well-formed JSON array embedded anywhere in the model response.
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

std::vector<std::string> doc_ids_for(const ingest::CitationGroup& group) {
    std::vector<std::string> ids;
    for (const auto& url : group.urls) {
        std::string id = util::doc_id_for_url(url);
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(std::move(id));
    }
    return ids;
}

}  // namespace

nlohmann::json Keypoint::to_json() const {
    return {{"text", text},
            {"segment_index", segment_index},
            {"source_segment", source_segment},
            {"candidate_doc_ids", candidate_doc_ids},
            {"supporting_doc_ids", supporting_doc_ids}};
}

Keypoint Keypoint::from_json(const nlohmann::json& j) {
    Keypoint k;
    k.text = j.at("text").get<std::string>();
    k.segment_index = j.at("segment_index").get<int>();
    k.source_segment = j.value("source_segment", "");
    k.candidate_doc_ids = j.value("candidate_doc_ids", std::vector<std::string>{});
    k.supporting_doc_ids = j.value("supporting_doc_ids", std::vector<std::string>{});
    return k;
}

std::vector<std::string> Fact::gold_doc_ids() const {
    std::vector<std::string> ids;
    for (const auto& kp : keypoints) {
        for (const auto& id : kp.supporting_doc_ids) {
            if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
        }
    }
    return ids;
}

nlohmann::json Fact::to_json() const {
    nlohmann::json kps = nlohmann::json::array();
    for (const auto& kp : keypoints) kps.push_back(kp.to_json());
    return {{"fact_id", fact_id},
            {"keypoints", kps},
            {"page_id", page_id},
            {"sentence_text", sentence_text},
            {"topic_headers", topic_headers},
            {"last_updated", last_updated.iso()},
            {"cohort_year", cohort_year}};
}

Fact Fact::from_json(const nlohmann::json& j) {
    Fact f;
    f.fact_id = j.at("fact_id").get<std::string>();
    for (const auto& kp : j.at("keypoints")) f.keypoints.push_back(Keypoint::from_json(kp));
    f.page_id = j.value("page_id", "");
    f.sentence_text = j.value("sentence_text", "");
    f.topic_headers = j.value("topic_headers", std::vector<std::string>{});
    if (auto d = util::parse_iso_date(j.value("last_updated", ""))) f.last_updated = *d;
    f.cohort_year = j.value("cohort_year", 0);
    return f;
}

nlohmann::json Reject::to_json() const {
    return {{"stage", stage},
            {"reason", reason},
            {"page_id", page_id},
            {"sentence_text", sentence_text},
            {"detail", detail}};
}

std::string claim_with_markers(const ingest::CitingSentence& sentence) {
    std::vector<std::string> parts;
    parts.reserve(sentence.segments.size());
    for (const auto& [text, group] : sentence.segments) parts.push_back(text + " [KP]");
    return util::join(parts, " ");
}

std::string sentence_context(const ingest::CitingSentence& sentence) {
    std::vector<std::string> parts;
    if (!sentence.context.abstract.empty()) parts.push_back(sentence.context.abstract);
    std::vector<std::string> neighbours = sentence.context.before;
    neighbours.insert(neighbours.end(), sentence.context.after.begin(),
                      sentence.context.after.end());
    if (!neighbours.empty()) parts.push_back(util::join(neighbours, " "));
    return util::join(parts, "\n");
}

std::string fact_id_for(const ingest::CitingSentence& sentence) {
    return "f" + util::sha256_hex(sentence.page_id + "\x1f" + sentence.sentence_text)
                     .substr(0, 16);
}

DecontextualizeResult decontextualize(const ingest::CitingSentence& sentence,
                                      llm::Gateway& gateway,
                                      const llm::PromptTemplate& keypoints_template) {
    DecontextualizeResult result;
    const std::size_t expected = sentence.segments.size();
    std::map<std::string, std::string> bindings{
        {"ADD_CLAIM_HERE", claim_with_markers(sentence)},
        {"ADD_CONTEXT_HERE", sentence_context(sentence)},
        {"ADD_KEYPOINTS_COUNT_HERE", std::to_string(expected)},
        {"ADD_LAST_UPDATED_DATE", sentence.last_updated.iso()}};

    std::string failure = "unparseable_keypoints";
    for (int attempt = 0; attempt < 2; ++attempt) {  // one re-prompt on bad output
        std::string response;
        try {
            response = gateway.complete(keypoints_template, bindings).response_text;
        } catch (const llm::ProviderError& e) {
            result.reject = Reject{"decontextualize", "provider_error", sentence.page_id,
                                   sentence.sentence_text, e.what()};
            return result;
        }
        auto arr = first_json_array(response);
        if (!arr) continue;
        std::vector<std::string> texts;
        bool all_strings = true;
        for (const auto& item : *arr) {
            if (!item.is_string() || item.get<std::string>().empty()) {
                all_strings = false;
                break;
            }
            texts.push_back(item.get<std::string>());
        }
        if (!all_strings) continue;
        if (texts.size() != expected) {
            failure = "keypoint_count_mismatch";
            continue;
        }
        for (std::size_t i = 0; i < texts.size(); ++i) {
            Keypoint kp;
            kp.text = texts[i];
            kp.segment_index = static_cast<int>(i);
            kp.source_segment = sentence.segments[i].first;
            kp.candidate_doc_ids = doc_ids_for(sentence.segments[i].second);
            result.keypoints.push_back(std::move(kp));
        }
        return result;
    }
    result.reject =
        Reject{"decontextualize", failure, sentence.page_id, sentence.sentence_text, ""};
    return result;
}

Verdict check_groundedness(const Keypoint& keypoint, const evidence::EvidenceDocument& doc,
                           llm::Gateway& gateway,
                           const llm::PromptTemplate& groundedness_template) {
    std::string context = doc.content;
    bool truncated = false;
    if (context.size() > kGroundednessContextLimit) {
        context.resize(kGroundednessContextLimit);
        truncated = true;
    }
    std::map<std::string, std::string> bindings{
        {"ADD_KEYPOINT_HERE", keypoint.text},
        {"ADD_CONTEXT_LANGUAGE_HERE", doc.language},
        {"ADD_CONTEXT_PUBLISHED_DATE_HERE", doc.published ? doc.published->iso() : "Unknown"},
        {"ADD_CONTEXT_HERE", context}};

    for (int attempt = 0; attempt < 2; ++attempt) {  // one re-prompt on a bad label
        std::string response;
        try {
            response = gateway.complete(groundedness_template, bindings, truncated).response_text;
        } catch (const llm::ProviderError&) {
            return Verdict::not_grounded;
        }
        std::string label = util::to_lower(util::trim(response));
        // "not grounded" first: "grounded" is a substring of it.
        if (label.find("not grounded") != std::string::npos) return Verdict::not_grounded;
        if (label.find("grounded") != std::string::npos) return Verdict::grounded;
    }
    return Verdict::not_grounded;
}

AssembleResult assemble_fact(const ingest::CitingSentence& sentence,
                             std::vector<Keypoint> keypoints,
                             const evidence::CorpusStore& store, llm::Gateway& gateway,
                             const llm::PromptTemplate& groundedness_template) {
    AssembleResult result;
    for (auto& kp : keypoints) {
        kp.supporting_doc_ids.clear();
        for (const auto& doc_id : kp.candidate_doc_ids) {
            const evidence::EvidenceDocument* doc = store.find(doc_id);
            // Pairs without a healthy document are skipped: not grounded by
            // construction.
            if (!doc || doc->fetch_status != evidence::FetchStatus::ok) continue;
            if (check_groundedness(kp, *doc, gateway, groundedness_template) ==
                Verdict::grounded) {
                kp.supporting_doc_ids.push_back(doc_id);
            }
        }
        if (kp.supporting_doc_ids.empty()) {
            // One dead keypoint sinks the whole fact: partial facts are
            // never emitted.
            result.reject = Reject{"assemble", "unsupported_keypoint", sentence.page_id,
                                   sentence.sentence_text, kp.text};
            return result;
        }
    }

    Fact fact;
    fact.fact_id = fact_id_for(sentence);
    fact.keypoints = std::move(keypoints);
    fact.page_id = sentence.page_id;
    fact.sentence_text = sentence.sentence_text;
    fact.topic_headers.push_back(sentence.context.title);
    for (const auto& h : sentence.context.header_path) fact.topic_headers.push_back(h);
    fact.last_updated = sentence.last_updated;
    fact.cohort_year = sentence.cohort_year;
    result.fact = std::move(fact);
    return result;
}

}  // namespace irb::facts
