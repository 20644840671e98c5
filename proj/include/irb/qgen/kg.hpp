#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "irb/facts/facts.hpp"

namespace irb::qgen {

// One (head, relation, tail) edge with node types.
struct Triplet {
    std::string head;
    std::string head_type;
    std::string relation;
    std::string tail;
    std::string tail_type;

    bool operator==(const Triplet&) const = default;

    nlohmann::json to_json() const;
    static Triplet from_json(const nlohmann::json& j);
};

struct KnowledgeGraph {
    std::string fact_id;
    std::vector<Triplet> triplets;  // model order preserved
    double coverage = 0.0;
};

// Prompts the extraction model and parses the first JSON array in the
// response. Local re-validation: empty fields dropped, duplicate-head type
// unified to the first-seen type. One re-prompt on unparseable output,
// then nullopt (fact skipped).
std::optional<KnowledgeGraph> extract_kg(const facts::Fact& fact, llm::Gateway& gateway,
                                         const llm::PromptTemplate& kg_template);

// Fraction of distinct keypoint words (case-folded, punctuation stripped)
// that appear in any head, relation, or tail. Throws when the fact has no
// keypoint words.
double kg_coverage(const KnowledgeGraph& graph, const facts::Fact& fact);

}  // namespace irb::qgen
