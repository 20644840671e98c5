#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "irb/bench/attributes.hpp"
#include "irb/llm/gateway.hpp"
#include "irb/qgen/mask.hpp"
#include "irb/qgen/transform.hpp"

namespace irb::qgen {

// One step of the stepwise generation: the (masked) triplet shown to the
// model and the intermediate question it produced.
struct TraceStep {
    Triplet triplet;
    std::string question;

    bool operator==(const TraceStep&) const = default;

    nlohmann::json to_json() const;
    static TraceStep from_json(const nlohmann::json& j);
};

struct QuestionDraft {
    std::string text;              // last intermediate question
    std::vector<TraceStep> trace;  // one entry per triplet
};

struct QASample {
    std::string sample_id;
    std::string question;
    std::string answer;  // "False premise question" for the false_premise variant
    Variant variant = Variant::single_hop;
    std::string fact_id;                // generating fact (kg1 for multi-hop)
    std::vector<std::string> fact_ids;  // all source facts (1 or 2)
    std::vector<std::string> gold_doc_ids;
    bench::SampleAttributes attributes;  // filled by bench
    std::vector<TraceStep> generation_trace;

    bool operator==(const QASample&) const = default;

    nlohmann::json to_json() const;
    static QASample from_json(const nlohmann::json& j);
};

enum class Answerability { single, multiple };

// "head [type] | relation | tail [type]"
std::string relation_line(const Triplet& t);

// The "Question generation steps" block: every prior step as a
// Relation/Generated question pair, then the current relation with an
// open "Generated question:" cue.
std::string render_steps(const std::vector<TraceStep>& history, const Triplet& current);

// One model call per triplet, carrying the full step history. Empty output
// at any step earns one re-prompt; a second empty reply abandons the
// variant (nullopt).
std::optional<QuestionDraft> generate_question_stepwise(const MaskedGraph& masked,
                                                        llm::Gateway& gateway,
                                                        const llm::TemplateLibrary& templates);

// Parses a leading "A." (multiple answers) or "B." (single answer),
// tolerant of trailing prose. One re-prompt when neither token leads,
// then nullopt (sample discarded).
std::optional<Answerability> check_answerability(const std::string& question,
                                                 llm::Gateway& gateway,
                                                 const llm::TemplateLibrary& templates);

// Refinement pass. The keypoints context renders each masked node as
// "<Unknown #N (Type)>". Falls back to the draft whenever the model
// fails, echoes an <Unknown tag, or drops a paraphrase surface.
std::string refine_question(const std::string& draft, const MaskedGraph& masked,
                            const std::vector<const facts::Fact*>& source_facts,
                            const util::Date& question_date, llm::Gateway& gateway,
                            const llm::TemplateLibrary& templates);

struct QgenReject {
    std::string fact_id;
    std::string variant;  // empty for fact-level rejects
    std::string reason;   // coverage_fail | no_maskable_node | multiple_answers | generation_fail
    std::string detail;

    nlohmann::json to_json() const;
};

struct GenerationConfig {
    double coverage_threshold = 0.8;
    util::Date reference_date{};
    std::uint64_t seed = 0;
};

struct GenerationResult {
    std::vector<QASample> samples;
    std::vector<QgenReject> rejects;
    std::vector<std::string> warnings;  // e.g. unparaphrased date nodes
};

// Full per-fact pipeline: KG extraction, coverage gate, masking, variant
// construction (single-hop, multi-hop within the same cohort year,
// false-premise from the unparaphrased single-hop), stepwise generation,
// answerability, refinement, and the answer-secrecy check.
GenerationResult generate_samples(const std::vector<facts::Fact>& facts, llm::Gateway& gateway,
                                  const llm::TemplateLibrary& templates,
                                  const TransformTables& tables,
                                  const NamedEntityRecognizer& ner,
                                  const GenerationConfig& config);

}  // namespace irb::qgen
