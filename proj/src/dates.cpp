#include "irb/util/dates.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "irb/util/strings.hpp"

namespace irb::util {

namespace {

const std::array<std::string, 12> kMonths = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};

int days_in_month(int year, int month) {
    static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return d[month - 1];
}

int month_from_name(std::string_view name) {
    std::string low = to_lower(name);
    for (std::size_t i = 0; i < kMonths.size(); ++i) {
        if (low == kMonths[i] || (low.size() == 3 && kMonths[i].substr(0, 3) == low)) {
            return static_cast<int>(i) + 1;
        }
    }
    return 0;
}

}  // namespace

bool Date::valid() const {
    if (year < 1 || month < 1 || month > 12 || day < 1) return false;
    return day <= days_in_month(year, month);
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::optional<Date> parse_iso_date(std::string_view text) {
    std::string s = trim(text);
    // Tolerate a trailing time component (2024-11-30T08:00:00Z).
    if (s.size() > 10 && (s[10] == 'T' || s[10] == ' ')) s = s.substr(0, 10);
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    }
    Date d{std::stoi(s.substr(0, 4)), std::stoi(s.substr(5, 2)), std::stoi(s.substr(8, 2))};
    if (!d.valid()) return std::nullopt;
    return d;
}

std::optional<Date> parse_date(std::string_view text) {
    if (auto iso = parse_iso_date(text)) return iso;

    std::string s = trim(text);
    // Tokenize into alnum runs.
    std::vector<std::string> toks;
    std::string cur;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += c;
        } else if (!cur.empty()) {
            toks.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) toks.push_back(cur);
    if (toks.size() != 3) return std::nullopt;

    auto is_num = [](const std::string& t) {
        if (t.empty() || t.size() > 4) return false;
        for (char c : t)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };

    Date d;
    if (is_num(toks[0]) && !is_num(toks[1]) && is_num(toks[2])) {
        // 30 November 2024
        d = {std::stoi(toks[2]), month_from_name(toks[1]), std::stoi(toks[0])};
    } else if (!is_num(toks[0]) && is_num(toks[1]) && is_num(toks[2])) {
        // November 30, 2024
        d = {std::stoi(toks[2]), month_from_name(toks[0]), std::stoi(toks[1])};
    } else {
        return std::nullopt;
    }
    if (d.month == 0 || toks[2].size() != 4 || !d.valid()) return std::nullopt;
    return d;
}

int months_between(const Date& d, const Date& reference) {
    int months = (reference.year - d.year) * 12 + (reference.month - d.month);
    if (reference.day < d.day) --months;
    return months;
}

}  // namespace irb::util
