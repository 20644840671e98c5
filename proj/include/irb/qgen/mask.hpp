#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>

#include "irb/qgen/kg.hpp"

namespace irb::qgen {

enum class Variant { single_hop, multi_hop, false_premise };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct MaskedNode {
    std::string text;  // original node text (the truth)
    std::string type;
    int mask_index = 1;  // 1 is the answer node
};

// A knowledge graph after masking (and, later, paraphrase/perturbation).
// Masked occurrences appear in the triplets as "<Unknown> #N"; the node
// type stays in the triplet's type slot.
struct MaskedGraph {
    Variant variant = Variant::single_hop;
    std::string fact_id;                  // generating fact (kg1 for multi-hop)
    std::vector<std::string> fact_ids;    // all source facts (1 or 2)
    std::vector<Triplet> triplets;
    std::vector<MaskedNode> masked_nodes; // ordered by mask_index
    std::map<std::string, std::string> paraphrase_map;    // original -> surface
    std::map<std::string, std::string> perturbation_map;  // original -> lie
    std::string answer;                   // mask #1 original text
    int hop_count = 1;
    std::vector<std::string> gold_doc_ids;
};

inline std::string mask_token(int index) { return "<Unknown> #" + std::to_string(index); }

// Pluggable named-entity predicate over a node string and its graph type.
class NamedEntityRecognizer {
public:
    virtual ~NamedEntityRecognizer() = default;
    virtual bool is_named_entity(const std::string& node, const std::string& node_type) const = 0;
};

// Capitalization- and type-based recognizer: proper-noun-like strings count;
// abstract types (quotes, ideas) and article-led descriptions do not.
class HeuristicNer final : public NamedEntityRecognizer {
public:
    bool is_named_entity(const std::string& node, const std::string& node_type) const override;
};

// Only "heuristic" is built in; other names raise an error naming the tool.
std::unique_ptr<NamedEntityRecognizer> make_ner(const std::string& name);

// The five maskability criteria for `node` (a head in the graph), in order:
// named-entity, keypoint coverage, atomicity, non-overlapping, non-exclusive.
std::array<bool, 5> mask_criteria(const KnowledgeGraph& graph, const facts::Fact& fact,
                                  const std::string& node, const std::string& node_type,
                                  const NamedEntityRecognizer& ner);

struct MaskCandidate {
    std::string text;
    std::string type;
    std::size_t triplet_index = 0;
};

// First head, in triplet order, satisfying all five criteria.
std::optional<MaskCandidate> select_maskable_node(const KnowledgeGraph& graph,
                                                  const facts::Fact& fact,
                                                  const NamedEntityRecognizer& ner);

// Replaces every occurrence of the node (as head or tail) with mask #1.
MaskedGraph mask_single_hop(const KnowledgeGraph& graph, const facts::Fact& fact,
                            const MaskCandidate& node);

// Merges two single-hop graphs when kg2's answer matches (case-insensitive,
// exact) an unmasked node of kg1. kg1's mask stays #1 (the final answer);
// kg2's answer becomes mask #2 everywhere; gold docs are unioned.
std::optional<MaskedGraph> merge_multi_hop(const MaskedGraph& kg1, const MaskedGraph& kg2);

}  // namespace irb::qgen
