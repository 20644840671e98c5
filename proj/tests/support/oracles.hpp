#pragma once

// Independent reference implementations ("oracles") that the tests compare
// the library against. Each is written directly from the definitions, using
// different algorithms and data structures than the production code, so a
// shared bug is unlikely to hide in both.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "irb/util/dates.hpp"

namespace irb_test {

// ---------------------------------------------------------------------------
// nDCG@k, brute force: explicit gain vector, ideal vector built by sorting.
inline double ndcg_oracle(const std::vector<std::string>& ranking,
                          const std::set<std::string>& relevant, int k) {
    std::vector<double> gains;
    for (const auto& doc : ranking) gains.push_back(relevant.count(doc) ? 1.0 : 0.0);
    gains.resize(static_cast<std::size_t>(k), 0.0);  // pad or truncate to k

    std::vector<double> ideal(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < std::min<std::size_t>(relevant.size(), ideal.size()); ++i) {
        ideal[i] = 1.0;
    }

    auto dcg = [](const std::vector<double>& v) {
        double sum = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            sum += v[i] / std::log2(static_cast<double>(i) + 2.0);
        }
        return sum;
    };

    double ideal_dcg = dcg(ideal);
    return ideal_dcg == 0.0 ? 0.0 : dcg(gains) / ideal_dcg;
}

// ---------------------------------------------------------------------------
// Whole calendar months between two dates, with day-level remainders floored
// away: a month is complete when the same day-of-month recurs (lexicographic
// (year, month, day) comparison, days never clamped). Counted by walking
// month by month instead of arithmetic on year*12+month.
inline int months_oracle(irb::util::Date d, const irb::util::Date& reference) {
    auto step = [](irb::util::Date x) {
        ++x.month;
        if (x.month > 12) {
            x.month = 1;
            ++x.year;
        }
        return x;
    };
    auto leq = [](const irb::util::Date& a, const irb::util::Date& b) {
        if (a.year != b.year) return a.year < b.year;
        if (a.month != b.month) return a.month < b.month;
        return a.day <= b.day;
    };
    int months = 0;
    irb::util::Date cursor = d;
    while (true) {
        irb::util::Date next = step(cursor);
        if (!leq(next, reference)) break;
        cursor = next;
        ++months;
    }
    return months;
}

// Relative-time phrase for a month count, written from the wording rules.
inline std::string relative_text_oracle(int months) {
    if (months <= 0) return "less than a month ago";
    int years = months / 12;
    int rest = months % 12;
    std::string out;
    if (years > 0) {
        out = std::to_string(years) + (years == 1 ? " year" : " years");
        if (rest > 0) {
            out += " " + std::to_string(rest) + (rest == 1 ? " month" : " months");
        }
        return out + " ago";
    }
    return std::to_string(months) + (months == 1 ? " month ago" : " months ago");
}

// ---------------------------------------------------------------------------
// Okapi BM25 over token lists, straight from the formula. Used to freeze the
// expected scores for the fixture corpus and to cross-check orderings.
struct Bm25Oracle {
    double k1 = 1.2;
    double b = 0.75;
    std::vector<std::vector<std::string>> docs;  // token lists

    double idf(const std::string& term) const {
        double n = static_cast<double>(docs.size());
        double df = 0;
        for (const auto& doc : docs) {
            if (std::find(doc.begin(), doc.end(), term) != doc.end()) df += 1;
        }
        return std::log((n - df + 0.5) / (df + 0.5));
    }

    double score(std::size_t doc_index, const std::vector<std::string>& query) const {
        double avg = 0.0;
        for (const auto& doc : docs) avg += static_cast<double>(doc.size());
        avg /= static_cast<double>(docs.size());

        const auto& doc = docs[doc_index];
        double total = 0.0;
        for (const auto& term : query) {
            double tf = static_cast<double>(std::count(doc.begin(), doc.end(), term));
            if (tf == 0.0) continue;
            double denom = tf + k1 * (1.0 - b + b * static_cast<double>(doc.size()) / avg);
            total += idf(term) * tf * (k1 + 1.0) / denom;
        }
        return total;
    }
};

}  // namespace irb_test
