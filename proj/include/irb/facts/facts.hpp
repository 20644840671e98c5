#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "irb/evidence/store.hpp"
#include "irb/ingest/article.hpp"
#include "irb/llm/gateway.hpp"

namespace irb::facts {

enum class Verdict { grounded, not_grounded };

// One decontextualized, self-contained declarative sentence tied to the
// citing-sentence segment it came from.
struct Keypoint {
    std::string text;
    int segment_index = 0;                      // position within the sentence
    std::string source_segment;                 // the segment's literal text
    std::vector<std::string> candidate_doc_ids; // cited docs, pre-check
    std::vector<std::string> supporting_doc_ids;// subset that passed groundedness

    nlohmann::json to_json() const;
    static Keypoint from_json(const nlohmann::json& j);
};

// A validated fact: every keypoint of one citing sentence, each with at
// least one supporting document.
struct Fact {
    std::string fact_id;
    std::vector<Keypoint> keypoints;            // segment order
    std::string page_id;
    std::string sentence_text;
    std::vector<std::string> topic_headers;     // title + section header path
    util::Date last_updated{};
    int cohort_year = 0;

    std::vector<std::string> gold_doc_ids() const;  // union of supporting docs

    nlohmann::json to_json() const;
    static Fact from_json(const nlohmann::json& j);
};

// A discarded sentence or keypoint with a machine-readable reason.
struct Reject {
    std::string stage;      // "decontextualize" | "groundedness" | "assemble"
    std::string reason;     // e.g. "keypoint_count_mismatch"
    std::string page_id;
    std::string sentence_text;
    std::string detail;

    nlohmann::json to_json() const;
};

// Builds the claim string with [KP] markers appended to each segment, as the
// keypoints prompt expects.
std::string claim_with_markers(const ingest::CitingSentence& sentence);

// Builds the decontextualization context block: abstract plus surrounding
// sentences (title travels in topic headers, not here).
std::string sentence_context(const ingest::CitingSentence& sentence);

// Prompts for one keypoint per segment. Wrong count or unparseable output is
// re-prompted once, then the sentence is discarded (reject returned).
struct DecontextualizeResult {
    std::vector<Keypoint> keypoints;
    std::optional<Reject> reject;
};
DecontextualizeResult decontextualize(const ingest::CitingSentence& sentence,
                                      llm::Gateway& gateway,
                                      const llm::PromptTemplate& keypoints_template);

// Single (keypoint, document) check. The document must have fetch_status ok.
// Unparseable labels are re-prompted once, then treated as not_grounded.
Verdict check_groundedness(const Keypoint& keypoint, const evidence::EvidenceDocument& doc,
                           llm::Gateway& gateway,
                           const llm::PromptTemplate& groundedness_template);

// Runs groundedness for every keypoint against its candidate docs and emits
// the Fact iff every keypoint keeps at least one supporting document.
struct AssembleResult {
    std::optional<Fact> fact;
    std::optional<Reject> reject;
};
AssembleResult assemble_fact(const ingest::CitingSentence& sentence,
                             std::vector<Keypoint> keypoints,
                             const evidence::CorpusStore& store, llm::Gateway& gateway,
                             const llm::PromptTemplate& groundedness_template);

// Stable identifier for the fact derived from page and sentence content.
std::string fact_id_for(const ingest::CitingSentence& sentence);

}  // namespace irb::facts
