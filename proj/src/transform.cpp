#include "irb/qgen/transform.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "irb/util/fs.hpp"
#include "irb/util/hash.hpp"
#include "irb/util/strings.hpp"

namespace irb::qgen {

namespace {

std::string encode_utf8(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
}

bool is_masked(const std::string& node) { return node.find("<Unknown>") != std::string::npos; }

// Strict decimal: optional sign, digits, optional fraction. Returns the
// count of fraction digits via `precision`.
std::optional<double> parse_decimal(const std::string& text, int* precision = nullptr) {
    std::string t = util::trim(text);
    if (t.empty()) return std::nullopt;
    std::size_t i = 0;
    if (t[i] == '+' || t[i] == '-') ++i;
    std::size_t digits = 0, fraction = 0;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
        ++i;
        ++digits;
    }
    if (i < t.size() && t[i] == '.') {
        ++i;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
            ++i;
            ++fraction;
        }
    }
    if (digits == 0 || i != t.size()) return std::nullopt;
    if (precision) *precision = static_cast<int>(fraction);
    return std::stod(t);
}

const char* kUnits[] = {"zero", "one", "two",   "three", "four",
                        "five", "six", "seven", "eight", "nine"};
const char* kTeens[] = {"ten",      "eleven",  "twelve",    "thirteen", "fourteen",
                        "fifteen",  "sixteen", "seventeen", "eighteen", "nineteen"};
const char* kTens[] = {"",      "",      "twenty", "thirty", "forty",
                       "fifty", "sixty", "seventy", "eighty", "ninety"};

std::string three_digits_words(int n) {
    std::string out;
    if (n >= 100) {
        out += std::string(kUnits[n / 100]) + " hundred";
        n %= 100;
        if (n) out += " ";
    }
    if (n >= 20) {
        out += kTens[n / 10];
        if (n % 10) out += std::string("-") + kUnits[n % 10];
    } else if (n >= 10) {
        out += kTeens[n - 10];
    } else if (n > 0 || out.empty()) {
        if (!(n == 0 && !out.empty())) out += kUnits[n];
    }
    return out;
}

std::string integer_words(long long n) {
    if (n == 0) return "zero";
    std::string sign = n < 0 ? "minus " : "";
    unsigned long long v = n < 0 ? -static_cast<unsigned long long>(n) : n;
    static const std::pair<unsigned long long, const char*> scales[] = {
        {1000000000000ULL, "trillion"},
        {1000000000ULL, "billion"},
        {1000000ULL, "million"},
        {1000ULL, "thousand"}};
    std::string out;
    for (const auto& [value, name] : scales) {
        if (v >= value) {
            if (!out.empty()) out += " ";
            out += three_digits_words(static_cast<int>(v / value)) + " " + name;
            v %= value;
        }
    }
    if (v > 0 || out.empty()) {
        if (!out.empty()) out += " ";
        out += three_digits_words(static_cast<int>(v));
    }
    return sign + out;
}

std::string format_with_precision(double value, int precision) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
    return buffer;
}

}  // namespace

TransformTables TransformTables::load(const std::filesystem::path& data_dir) {
    TransformTables tables;
    for (const auto& line : util::split(util::read_file(data_dir / "surnames.txt"), '\n')) {
        std::string s = util::trim(line);
        if (!s.empty()) tables.surnames.push_back(std::move(s));
    }
    for (const auto& line : util::split(util::read_file(data_dir / "countries.tsv"), '\n')) {
        if (util::trim(line).empty()) continue;
        auto cells = util::split(line, '\t');
        if (cells.size() < 2) continue;
        Country c;
        c.name = util::trim(cells[0]);
        c.iso2 = util::trim(cells[1]);
        for (std::size_t i = 2; i < cells.size(); ++i) {
            std::string alias = util::trim(cells[i]);
            if (!alias.empty()) c.aliases.push_back(std::move(alias));
        }
        tables.countries.push_back(std::move(c));
    }
    if (tables.surnames.empty() || tables.countries.empty()) {
        throw util::Error("transform tables incomplete under " + data_dir.string());
    }
    return tables;
}

const TransformTables::Country* TransformTables::find_country(const std::string& text) const {
    std::string needle = util::to_lower(util::trim(text));
    for (const auto& c : countries) {
        if (util::to_lower(c.name) == needle) return &c;
        for (const auto& alias : c.aliases) {
            if (util::to_lower(alias) == needle) return &c;
        }
    }
    return nullptr;
}

Rng::Rng(std::uint64_t seed, const std::string& key)
    : state_(seed ^ util::fnv1a64(key)) {}

std::uint64_t Rng::next() {
    // splitmix64: identical sequences on every platform.
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::size_t Rng::below(std::size_t n) { return n == 0 ? 0 : next() % n; }

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::string flag_emoji(const std::string& iso2) {
    std::string out;
    for (char c : iso2) {
        char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (upper < 'A' || upper > 'Z') continue;
        out += encode_utf8(0x1F1E6 + (upper - 'A'));
    }
    return out;
}

std::string verbalize_number(const std::string& number_text) {
    std::string t = util::trim(number_text);
    std::size_t dot = t.find('.');
    std::string int_part = dot == std::string::npos ? t : t.substr(0, dot);
    std::string fraction = dot == std::string::npos ? "" : t.substr(dot + 1);
    bool negative = !int_part.empty() && int_part[0] == '-';
    if (!int_part.empty() && (int_part[0] == '+' || int_part[0] == '-')) int_part.erase(0, 1);
    for (char c : int_part + fraction) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return number_text;
    }
    if (int_part.empty()) int_part = "0";
    std::string out = integer_words(std::stoll(int_part));
    if (negative) out = "minus " + out;
    if (!fraction.empty()) {
        out += " point";
        for (char c : fraction) out += std::string(" ") + kUnits[c - '0'];
    }
    return out;
}

std::string relative_months_text(int months) {
    if (months <= 0) return "less than a month ago";
    if (months < 12) {
        return std::to_string(months) + (months == 1 ? " month ago" : " months ago");
    }
    int years = months / 12;
    int rest = months % 12;
    std::string y = std::to_string(years) + (years == 1 ? " year" : " years");
    if (rest == 0) return y + " ago";
    return y + " " + std::to_string(rest) + (rest == 1 ? " month ago" : " months ago");
}

std::string relative_date(const util::Date& d, const util::Date& reference) {
    if (d > reference) {
        throw std::invalid_argument("relative_date: date " + d.iso() + " is after reference " +
                                    reference.iso());
    }
    if (d == reference) return "today";
    int months = util::months_between(d, reference);
    if (months <= 0) return "less than a month ago";
    return relative_months_text(months);
}

std::string abbreviate_person(const std::string& name) {
    auto parts = util::split(util::normalize_ws(util::trim(name)), ' ');
    if (parts.size() < 2) return name;
    std::string out;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        const std::string& word = parts[i];
        if (word.empty()) continue;
        // First code point of the word, plus ".".
        std::size_t len = 1;
        unsigned char first = static_cast<unsigned char>(word[0]);
        if ((first & 0xE0) == 0xC0) len = 2;
        else if ((first & 0xF0) == 0xE0) len = 3;
        else if ((first & 0xF8) == 0xF0) len = 4;
        out += word.substr(0, std::min(len, word.size())) + ". ";
    }
    out += parts.back();
    return out;
}

NodeCategory classify_node(const std::string& text, const std::string& type,
                           const TransformTables& tables) {
    std::string t = util::to_lower(type);
    if (t.find("person") != std::string::npos) return NodeCategory::person;
    if (t.find("date") != std::string::npos) return NodeCategory::date;
    if (t.find("country") != std::string::npos || t.find("nation") != std::string::npos) {
        if (tables.find_country(text)) return NodeCategory::country;
        return NodeCategory::other;
    }
    if ((t.find("location") != std::string::npos || t.find("place") != std::string::npos) &&
        tables.find_country(text)) {
        return NodeCategory::country;
    }
    if (t.find("quantity") != std::string::npos || t.find("number") != std::string::npos ||
        t.find("cardinal") != std::string::npos || t.find("amount") != std::string::npos ||
        t.find("measure") != std::string::npos) {
        if (parse_decimal(text)) return NodeCategory::quantity;
        return NodeCategory::other;
    }
    return NodeCategory::other;
}

MaskedGraph paraphrase_nodes(MaskedGraph masked, const util::Date& reference_date,
                             const TransformTables& tables,
                             std::vector<std::string>* warnings) {
    auto surface_for = [&](const std::string& node,
                           const std::string& type) -> std::optional<std::string> {
        auto hit = masked.paraphrase_map.find(node);
        if (hit != masked.paraphrase_map.end()) return hit->second;
        switch (classify_node(node, type, tables)) {
            case NodeCategory::person: {
                std::string s = abbreviate_person(node);
                if (s != node) return s;
                return std::nullopt;
            }
            case NodeCategory::date: {
                auto d = util::parse_date(node);
                if (!d || *d > reference_date) {
                    if (warnings) warnings->push_back("unparaphrased date node: " + node);
                    return std::nullopt;
                }
                return relative_date(*d, reference_date);
            }
            case NodeCategory::country: {
                const auto* c = tables.find_country(node);
                return "the country whose flag is " + flag_emoji(c->iso2);
            }
            case NodeCategory::quantity: {
                std::string s = verbalize_number(node);
                if (s != node) return s;
                return std::nullopt;
            }
            case NodeCategory::other: return std::nullopt;
        }
        return std::nullopt;
    };

    for (auto& t : masked.triplets) {
        if (!is_masked(t.head)) {
            if (auto s = surface_for(t.head, t.head_type)) {
                masked.paraphrase_map[t.head] = *s;
                t.head = *s;
            }
        }
        if (!is_masked(t.tail)) {
            if (auto s = surface_for(t.tail, t.tail_type)) {
                masked.paraphrase_map[t.tail] = *s;
                t.tail = *s;
            }
        }
    }
    return masked;
}

std::optional<MaskedGraph> perturb_false_premise(const MaskedGraph& masked,
                                                 const util::Date& reference_date,
                                                 const TransformTables& tables,
                                                 std::uint64_t seed) {
    Rng rng(seed, masked.fact_id);

    // Locate the first perturbable unmasked node in triplet order.
    const std::string* target = nullptr;
    std::string target_type;
    NodeCategory category = NodeCategory::other;
    for (const auto& t : masked.triplets) {
        for (auto [node, type] : {std::pair{&t.head, &t.head_type},
                                  std::pair{&t.tail, &t.tail_type}}) {
            if (is_masked(*node)) continue;
            NodeCategory c = classify_node(*node, *type, tables);
            if (c == NodeCategory::date) {
                auto d = util::parse_date(*node);
                if (!d || *d > reference_date) continue;  // nothing truthful to distort
            }
            if (c != NodeCategory::other) {
                target = node;
                target_type = *type;
                category = c;
                break;
            }
        }
        if (target) break;
    }
    if (!target) return std::nullopt;

    const std::string original = *target;
    std::string perturbed;
    switch (category) {
        case NodeCategory::person: {
            auto parts = util::split(util::normalize_ws(util::trim(original)), ' ');
            std::string last = parts.empty() ? original : parts.back();
            std::vector<std::string> candidates;
            for (const auto& s : tables.surnames) {
                if (util::to_lower(s) != util::to_lower(last)) candidates.push_back(s);
            }
            if (candidates.empty()) return std::nullopt;
            std::string surname = candidates[rng.below(candidates.size())];
            std::string initials;
            for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
                std::size_t len = 1;
                unsigned char first = static_cast<unsigned char>(parts[i][0]);
                if ((first & 0xE0) == 0xC0) len = 2;
                else if ((first & 0xF0) == 0xE0) len = 3;
                else if ((first & 0xF8) == 0xF0) len = 4;
                initials += parts[i].substr(0, std::min(len, parts[i].size())) + ". ";
            }
            perturbed = initials + surname;
            break;
        }
        case NodeCategory::date: {
            auto d = util::parse_date(original);
            int truthful = util::months_between(*d, reference_date);
            // Deliberately off by one to two years.
            int lie = truthful + 12 + static_cast<int>(rng.below(13));
            perturbed = relative_months_text(lie);
            break;
        }
        case NodeCategory::country: {
            const auto* home = tables.find_country(original);
            std::vector<const TransformTables::Country*> candidates;
            for (const auto& c : tables.countries) {
                if (&c != home) candidates.push_back(&c);
            }
            if (candidates.empty()) return std::nullopt;
            perturbed = candidates[rng.below(candidates.size())]->name;
            break;
        }
        case NodeCategory::quantity: {
            int precision = 0;
            double value = *parse_decimal(original, &precision);
            double factor = 1.5 + rng.unit();  // uniform in [1.5, 2.5)
            double lie = value * factor;
            if (value == 0.0) lie = 1.0;
            perturbed = format_with_precision(lie, precision);
            if (perturbed == util::trim(original)) {
                perturbed = format_with_precision(lie + 1.0, precision);
            }
            break;
        }
        case NodeCategory::other: return std::nullopt;
    }

    MaskedGraph out = masked;
    out.variant = Variant::false_premise;
    out.perturbation_map[original] = perturbed;
    for (auto& t : out.triplets) {
        if (!is_masked(t.head) && util::to_lower(t.head) == util::to_lower(original)) {
            t.head = perturbed;
        }
        if (!is_masked(t.tail) && util::to_lower(t.tail) == util::to_lower(original)) {
            t.tail = perturbed;
        }
    }
    return out;
}

}  // namespace irb::qgen
