#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "irb/qgen/mask.hpp"
#include "irb/util/dates.hpp"

namespace irb::qgen {

// Surname and country tables shipped as data files.
struct TransformTables {
    std::vector<std::string> surnames;
    // (canonical name, ISO 3166-1 alpha-2 code, aliases)
    struct Country {
        std::string name;
        std::string iso2;
        std::vector<std::string> aliases;
    };
    std::vector<Country> countries;

    static TransformTables load(const std::filesystem::path& data_dir);
    // Canonical country entry for a node text, matched case-insensitively
    // against names and aliases.
    const Country* find_country(const std::string& text) const;
};

// Deterministic per-item random stream: splitmix64 over a seed mixed with
// the fact id, so output is reproducible across platforms and runs.
class Rng {
public:
    Rng(std::uint64_t seed, const std::string& key);
    std::uint64_t next();
    std::size_t below(std::size_t n);       // uniform in [0, n)
    double unit();                          // uniform in [0, 1)

private:
    std::uint64_t state_;
};

// Unicode flag emoji for an ISO 3166-1 alpha-2 code ("JP" -> 🇯🇵).
std::string flag_emoji(const std::string& iso2);

// English verbalization: integer part in words, "point", spelled digits
// ("1.5" -> "one point five", "42" -> "forty-two").
std::string verbalize_number(const std::string& number_text);

// Floor calendar-month distance rendered as relative time. The zero cases:
// the reference date itself is "today"; same month but an earlier day is
// "less than a month ago". Throws std::invalid_argument for future dates.
std::string relative_date(const util::Date& d, const util::Date& reference);
// Rendering for a known month count (used by the perturbation rule).
std::string relative_months_text(int months);

// Person-name abbreviation: first and middle names to initials.
std::string abbreviate_person(const std::string& name);

// Classification of a node into a transformable category.
enum class NodeCategory { person, date, country, quantity, other };
NodeCategory classify_node(const std::string& text, const std::string& type,
                           const TransformTables& tables);

// Rewrites every unmasked node of a paraphrasable type; paraphrase_map
// records original -> surface. Unparseable dates are left alone and noted
// in `warnings`.
MaskedGraph paraphrase_nodes(MaskedGraph masked, const util::Date& reference_date,
                             const TransformTables& tables,
                             std::vector<std::string>* warnings = nullptr);

// Perturbs exactly one eligible node (the first in triplet order) to plant
// a false premise; the perturbed surface always differs from the truthful
// one under the same rule. Returns nullopt when no node is eligible.
std::optional<MaskedGraph> perturb_false_premise(const MaskedGraph& masked,
                                                 const util::Date& reference_date,
                                                 const TransformTables& tables,
                                                 std::uint64_t seed);

}  // namespace irb::qgen
