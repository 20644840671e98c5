#pragma once

// Independent checker for the five node-masking criteria, plus generators
// for random knowledge-graph fixtures. The checker re-derives every helper
// (word splitting, case folding, edit distance, window matching) from
// scratch so it shares no code with the library implementation.

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "irb/facts/facts.hpp"
#include "irb/qgen/kg.hpp"
#include "irb/qgen/mask.hpp"

#include "helpers.hpp"

namespace irb_test {

namespace mask_oracle_detail {

inline std::string fold(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c >= 0x80) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline double sim(const std::string& a, const std::string& b) {
    std::size_t longest = std::max(a.size(), b.size());
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

inline std::string joined(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += " ";
        out += p;
    }
    return out;
}

}  // namespace mask_oracle_detail

// The five criteria for masking `node`, checked independently:
//   1. named entity (same pluggable predicate the library uses),
//   2. present in every keypoint (case-folded substring),
//   3. atomic (no '&', no "et al", no standalone word "and"),
//   4. not fuzzily contained in any other node (same-length word window with
//      similarity >= 0.9),
//   5. exclusive: no relation that the node heads (or tails) is shared by a
//      different head (or tail).
inline std::array<bool, 5> mask_criteria_oracle(const irb::qgen::KnowledgeGraph& graph,
                                                const irb::facts::Fact& fact,
                                                const std::string& node,
                                                const std::string& node_type,
                                                const irb::qgen::NamedEntityRecognizer& ner) {
    namespace d = mask_oracle_detail;
    std::array<bool, 5> ok{};

    ok[0] = ner.is_named_entity(node, node_type);

    ok[1] = !fact.keypoints.empty();
    for (const auto& kp : fact.keypoints) {
        if (d::fold(kp.text).find(d::fold(node)) == std::string::npos) ok[1] = false;
    }

    ok[2] = node.find('&') == std::string::npos &&
            d::fold(node).find("et al") == std::string::npos;
    if (ok[2]) {
        for (const auto& w : d::words(node)) {
            if (w == "and") ok[2] = false;
        }
    }

    ok[3] = true;
    auto node_words = d::words(node);
    std::string needle = d::joined(node_words);
    for (const auto& t : graph.triplets) {
        for (const std::string* other : {&t.head, &t.tail}) {
            if (d::fold(*other) == d::fold(node)) continue;
            auto other_words = d::words(*other);
            if (node_words.empty() || other_words.size() < node_words.size()) continue;
            for (std::size_t s = 0; s + node_words.size() <= other_words.size(); ++s) {
                std::vector<std::string> window(other_words.begin() + s,
                                                other_words.begin() + s + node_words.size());
                if (d::sim(needle, d::joined(window)) >= 0.9) ok[3] = false;
            }
        }
    }

    ok[4] = true;
    for (const auto& t : graph.triplets) {
        bool node_heads = d::fold(t.head) == d::fold(node);
        bool node_tails = d::fold(t.tail) == d::fold(node);
        if (!node_heads && !node_tails) continue;
        for (const auto& u : graph.triplets) {
            if (u.relation != t.relation) continue;
            if (node_heads && d::fold(u.head) != d::fold(node)) ok[4] = false;
            if (node_tails && d::fold(u.tail) != d::fold(node)) ok[4] = false;
        }
    }

    return ok;
}

// Exhaustive reference selection: the first head in triplet order whose five
// criteria all hold.
inline std::optional<std::size_t> select_oracle(const irb::qgen::KnowledgeGraph& graph,
                                                const irb::facts::Fact& fact,
                                                const irb::qgen::NamedEntityRecognizer& ner) {
    for (std::size_t i = 0; i < graph.triplets.size(); ++i) {
        auto c = mask_criteria_oracle(graph, fact, graph.triplets[i].head,
                                      graph.triplets[i].head_type, ner);
        if (std::all_of(c.begin(), c.end(), [](bool b) { return b; })) return i;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Random fixture graphs engineered so every criterion fires both ways:
// proper names, article-led phrases, conjunctions, near-duplicate long
// nodes, and deliberately repeated relations.
struct GeneratedCase {
    irb::qgen::KnowledgeGraph graph;
    irb::facts::Fact fact;
};

inline GeneratedCase generate_masking_case(TestRng& rng, int index) {
    using irb::qgen::Triplet;

    static const std::vector<std::string> people = {
        "Alice Morgan", "Boris Khan",   "Carla Jensen", "Derek Osei",
        "Elena Petrov", "Farid Nazari", "Grace Lin",    "Henrik Dahl"};
    static const std::vector<std::string> places = {
        "Gold Coast", "Lake Vista", "Port Ellsworth", "Mount Harrow", "New Carthage"};
    static const std::vector<std::string> orgs = {
        "Kestrel Aero", "Volga Line", "Harbor Trust", "Atlas Foundry", "North Rail"};
    static const std::vector<std::string> abstract_nodes = {
        "the idea of portable power", "a plan to expand", "an agreement in principle"};
    static const std::vector<std::string> conjunction_nodes = {
        "Alice Morgan and Boris Khan", "Carla Jensen & Partners", "Smith et al."};
    static const std::vector<std::string> relations = {
        "founded", "operates", "visited", "acquired", "sponsors", "joined"};
    static const std::vector<std::string> tails = {
        "the 2024 season", "a regional award", "its first route", "the harbor district"};

    GeneratedCase out;
    out.fact.fact_id = "f" + std::to_string(index);
    out.graph.fact_id = out.fact.fact_id;

    int triplet_count = rng.range(2, 6);
    std::vector<std::string> heads;
    for (int i = 0; i < triplet_count; ++i) {
        double roll = rng.unit();
        if (roll < 0.45) {
            heads.push_back(rng.pick(people));
        } else if (roll < 0.6) {
            heads.push_back(rng.pick(orgs));
        } else if (roll < 0.7) {
            heads.push_back(rng.pick(places));
        } else if (roll < 0.85) {
            heads.push_back(rng.pick(abstract_nodes));
        } else {
            heads.push_back(rng.pick(conjunction_nodes));
        }
    }

    for (int i = 0; i < triplet_count; ++i) {
        Triplet t;
        t.head = heads[static_cast<std::size_t>(i)];
        t.head_type = rng.chance(0.15) ? "Concept" : "Entity";
        t.relation = rng.pick(relations);
        t.tail = rng.pick(tails);
        t.tail_type = "Event";
        // Sometimes the tail is another head, to exercise overlap and
        // exclusivity against tails as well.
        if (rng.chance(0.3)) t.tail = heads[rng.below(heads.size())];
        // Sometimes a near-duplicate long node that fuzzily contains a head.
        if (rng.chance(0.2)) t.tail = heads[rng.below(heads.size())] + " of the north";
        out.graph.triplets.push_back(t);
    }
    // Deliberate relation collision: two different heads share a relation.
    if (triplet_count >= 2 && rng.chance(0.5)) {
        out.graph.triplets[1].relation = out.graph.triplets[0].relation;
    }

    // Keypoints: each mentions a random subset of heads, so criterion 2
    // passes for some nodes and fails for others.
    int keypoint_count = rng.range(1, 3);
    for (int k = 0; k < keypoint_count; ++k) {
        irb::facts::Keypoint kp;
        kp.segment_index = k;
        kp.text = "It is recorded that";
        for (const auto& head : heads) {
            if (rng.chance(0.7)) kp.text += " " + head + " was involved;";
        }
        kp.text += " the season concluded.";
        kp.supporting_doc_ids = {"d" + std::to_string(index) + "x" + std::to_string(k)};
        kp.candidate_doc_ids = kp.supporting_doc_ids;
        out.fact.keypoints.push_back(kp);
    }
    return out;
}

// A pair of single-hop masked graphs constructed so kg2's answer appears as
// an unmasked node of kg1 (the multi-hop linkage precondition).
struct GeneratedPair {
    irb::qgen::MaskedGraph kg1;
    irb::qgen::MaskedGraph kg2;
};

inline GeneratedPair generate_merge_pair(TestRng& rng, int index) {
    using irb::qgen::Triplet;
    using irb::qgen::Variant;

    static const std::vector<std::string> answers = {
        "Marta Vance", "Gold Coast", "Kestrel Aero", "Tailwind Prize", "Volga Line"};
    static const std::vector<std::string> fillers = {
        "the 2024 season", "a maiden flight", "the coastal route", "an annual gala"};
    static const std::vector<std::string> relations = {
        "hosted", "launched", "completed", "renamed", "joined"};

    std::string link = rng.pick(answers);          // kg2's answer
    std::string answer1 = "Answer Node " + std::to_string(index);

    GeneratedPair out;
    out.kg1.variant = Variant::single_hop;
    out.kg1.fact_id = "fa" + std::to_string(index);
    out.kg1.fact_ids = {out.kg1.fact_id};
    out.kg1.answer = answer1;
    out.kg1.masked_nodes = {{answer1, "Person", 1}};
    out.kg1.gold_doc_ids = {"dA" + std::to_string(index), "dShared"};

    int n1 = rng.range(1, 4);
    for (int i = 0; i < n1; ++i) {
        Triplet t;
        t.head = irb::qgen::mask_token(1);
        t.head_type = "Person";
        t.relation = rng.pick(relations);
        t.tail = i == 0 ? link : rng.pick(fillers);  // guarantee the linkage
        t.tail_type = "Entity";
        out.kg1.triplets.push_back(t);
    }

    out.kg2.variant = Variant::single_hop;
    out.kg2.fact_id = "fb" + std::to_string(index);
    out.kg2.fact_ids = {out.kg2.fact_id};
    out.kg2.answer = link;
    out.kg2.masked_nodes = {{link, "Entity", 1}};
    out.kg2.gold_doc_ids = {"dB" + std::to_string(index), "dShared"};

    int n2 = rng.range(1, 4);
    for (int i = 0; i < n2; ++i) {
        Triplet t;
        t.head = irb::qgen::mask_token(1);
        t.head_type = "Entity";
        t.relation = rng.pick(relations);
        t.tail = rng.pick(fillers);
        t.tail_type = "Event";
        // The answer can also appear unmasked inside kg2 (e.g. echoed as a
        // tail); the merge must still mask every occurrence.
        if (rng.chance(0.25)) t.tail = link;
        out.kg2.triplets.push_back(t);
    }
    return out;
}

}  // namespace irb_test
