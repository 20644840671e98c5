#include "irb/qgen/mask.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "irb/util/strings.hpp"

namespace irb::qgen {

namespace {

bool is_masked(const std::string& node) { return node.find("<Unknown>") != std::string::npos; }

// Case-insensitive whole-string equality.
bool iequals(const std::string& a, const std::string& b) {
    return util::to_lower(a) == util::to_lower(b);
}

// Atomicity: the node must not reference multiple entities.
bool atomic(const std::string& node) {
    if (node.find('&') != std::string::npos) return false;
    if (util::contains_ci(node, "et al")) return false;
    for (const auto& w : util::content_words(node))
        if (w == "and") return false;
    return true;
}

// Fuzzy containment of `inner` within `outer`: some token window of `outer`
// of the same token length matches `inner` with similarity >= 0.9.
bool fuzzily_contained(const std::string& inner, const std::string& outer) {
    auto inner_words = util::content_words(inner);
    auto outer_words = util::content_words(outer);
    if (inner_words.empty() || outer_words.size() < inner_words.size()) return false;
    std::string needle = util::join(inner_words, " ");
    for (std::size_t start = 0; start + inner_words.size() <= outer_words.size(); ++start) {
        std::vector<std::string> window(outer_words.begin() + start,
                                        outer_words.begin() + start + inner_words.size());
        if (util::similarity(needle, util::join(window, " ")) >= 0.9) return true;
    }
    return false;
}

}  // namespace

std::string to_string(Variant v) {
    switch (v) {
        case Variant::single_hop: return "single_hop";
        case Variant::multi_hop: return "multi_hop";
        case Variant::false_premise: return "false_premise";
    }
    return "single_hop";
}

Variant variant_from_string(const std::string& s) {
    if (s == "single_hop") return Variant::single_hop;
    if (s == "multi_hop") return Variant::multi_hop;
    if (s == "false_premise") return Variant::false_premise;
    throw std::runtime_error("unknown variant: " + s);
}

bool HeuristicNer::is_named_entity(const std::string& node, const std::string& node_type) const {
    std::string trimmed = util::trim(node);
    if (trimmed.empty()) return false;
    std::string type = util::to_lower(node_type);
    // Abstract node types never name an entity.
    static const std::set<std::string> abstract_types = {
        "quote", "scientific idea", "idea", "concept", "statement", "claim",
        "description", "action", "activity"};
    if (abstract_types.count(type)) return false;
    // Article-led noun phrases describe rather than name.
    std::string lower = util::to_lower(trimmed);
    if (util::starts_with(lower, "a ") || util::starts_with(lower, "an ") ||
        util::starts_with(lower, "the ")) {
        return false;
    }
    unsigned char first = static_cast<unsigned char>(trimmed[0]);
    return std::isupper(first) || std::isdigit(first) || first >= 0x80;
}

std::unique_ptr<NamedEntityRecognizer> make_ner(const std::string& name) {
    if (name == "heuristic" || name.empty()) return std::make_unique<HeuristicNer>();
    throw std::runtime_error("named-entity recognizer '" + name +
                             "' is not available; node masking cannot run without one");
}

std::array<bool, 5> mask_criteria(const KnowledgeGraph& graph, const facts::Fact& fact,
                                  const std::string& node, const std::string& node_type,
                                  const NamedEntityRecognizer& ner) {
    std::array<bool, 5> ok{};

    // (1) Named entity.
    ok[0] = ner.is_named_entity(node, node_type);

    // (2) Coverage: appears in all keypoints (case-folded substring).
    ok[1] = !fact.keypoints.empty();
    std::string node_lower = util::to_lower(node);
    for (const auto& kp : fact.keypoints) {
        if (util::to_lower(kp.text).find(node_lower) == std::string::npos) {
            ok[1] = false;
            break;
        }
    }

    // (3) Atomicity.
    ok[2] = atomic(node);

    // (4) Non-overlapping: not fuzzily contained within any other node.
    ok[3] = true;
    for (const auto& t : graph.triplets) {
        for (const std::string* other : {&t.head, &t.tail}) {
            if (iequals(*other, node)) continue;
            if (fuzzily_contained(node, *other)) {
                ok[3] = false;
                break;
            }
        }
        if (!ok[3]) break;
    }

    // (5) Non-exclusive: unique head and tail for any associated relation.
    ok[4] = true;
    for (const auto& t : graph.triplets) {
        if (iequals(t.head, node)) {
            // No other head may share this relation.
            for (const auto& u : graph.triplets) {
                if (u.relation == t.relation && !iequals(u.head, node)) {
                    ok[4] = false;
                    break;
                }
            }
        }
        if (ok[4] && iequals(t.tail, node)) {
            for (const auto& u : graph.triplets) {
                if (u.relation == t.relation && !iequals(u.tail, node)) {
                    ok[4] = false;
                    break;
                }
            }
        }
        if (!ok[4]) break;
    }

    return ok;
}

std::optional<MaskCandidate> select_maskable_node(const KnowledgeGraph& graph,
                                                  const facts::Fact& fact,
                                                  const NamedEntityRecognizer& ner) {
    for (std::size_t i = 0; i < graph.triplets.size(); ++i) {
        const auto& t = graph.triplets[i];
        auto criteria = mask_criteria(graph, fact, t.head, t.head_type, ner);
        if (std::all_of(criteria.begin(), criteria.end(), [](bool b) { return b; })) {
            return MaskCandidate{t.head, t.head_type, i};
        }
    }
    return std::nullopt;
}

MaskedGraph mask_single_hop(const KnowledgeGraph& graph, const facts::Fact& fact,
                            const MaskCandidate& node) {
    MaskedGraph masked;
    masked.variant = Variant::single_hop;
    masked.fact_id = fact.fact_id;
    masked.fact_ids = {fact.fact_id};
    masked.answer = node.text;
    masked.hop_count = 1;
    masked.masked_nodes.push_back({node.text, node.type, 1});
    masked.gold_doc_ids = fact.gold_doc_ids();

    const std::string token = mask_token(1);
    for (Triplet t : graph.triplets) {
        if (iequals(t.head, node.text)) t.head = token;
        if (iequals(t.tail, node.text)) t.tail = token;
        masked.triplets.push_back(std::move(t));
    }
    return masked;
}

std::optional<MaskedGraph> merge_multi_hop(const MaskedGraph& kg1, const MaskedGraph& kg2) {
    if (kg1.variant != Variant::single_hop || kg2.variant != Variant::single_hop) {
        return std::nullopt;
    }
    if (kg1.fact_id == kg2.fact_id) return std::nullopt;  // distinct facts required

    // kg2's answer must appear as an unmasked node of kg1.
    bool linked = false;
    for (const auto& t : kg1.triplets) {
        if ((!is_masked(t.head) && iequals(t.head, kg2.answer)) ||
            (!is_masked(t.tail) && iequals(t.tail, kg2.answer))) {
            linked = true;
            break;
        }
    }
    if (!linked) return std::nullopt;

    MaskedGraph merged;
    merged.variant = Variant::multi_hop;
    merged.fact_id = kg1.fact_id;
    merged.fact_ids = {kg1.fact_id, kg2.fact_id};
    merged.answer = kg1.answer;  // the final answer aligns with kg1's target
    merged.hop_count = 2;
    merged.masked_nodes.push_back(kg1.masked_nodes.at(0));
    merged.masked_nodes.push_back({kg2.answer, kg2.masked_nodes.at(0).type, 2});

    const std::string token2 = mask_token(2);
    for (Triplet t : kg1.triplets) {
        if (!is_masked(t.head) && iequals(t.head, kg2.answer)) t.head = token2;
        if (!is_masked(t.tail) && iequals(t.tail, kg2.answer)) t.tail = token2;
        merged.triplets.push_back(std::move(t));
    }
    for (Triplet t : kg2.triplets) {
        // kg2's own mask #1 is this same entity: renumber to #2.
        if (t.head == mask_token(1)) t.head = token2;
        if (t.tail == mask_token(1)) t.tail = token2;
        if (!is_masked(t.head) && iequals(t.head, kg2.answer)) t.head = token2;
        if (!is_masked(t.tail) && iequals(t.tail, kg2.answer)) t.tail = token2;
        merged.triplets.push_back(std::move(t));
    }

    merged.gold_doc_ids = kg1.gold_doc_ids;
    for (const auto& id : kg2.gold_doc_ids) {
        if (std::find(merged.gold_doc_ids.begin(), merged.gold_doc_ids.end(), id) ==
            merged.gold_doc_ids.end()) {
            merged.gold_doc_ids.push_back(id);
        }
    }
    return merged;
}

}  // namespace irb::qgen
