#include "irb/ingest/citing.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "irb/util/strings.hpp"

namespace irb::ingest {

namespace {

const std::set<std::string>& abbreviations() {
    static const std::set<std::string> abbr = {
        "mr",  "mrs", "ms",  "dr",   "prof", "st",   "jr",    "sr",  "vs",
        "etc", "eg",  "ie",  "cf",   "ca",   "approx", "inc", "ltd", "co",
        "corp", "no", "fig", "vol",  "pp",   "p",    "ed",    "eds", "al",
        "dept", "univ", "gen", "col", "lt",  "sgt",  "capt",  "rev", "hon",
        "mt",  "ft",  "est", "dept", "min",  "max",  "sec",   "jan", "feb",
        "mar", "apr", "jun", "jul",  "aug",  "sep",  "sept",  "oct", "nov",
        "dec"};
    return abbr;
}

bool is_open_quote(char c) {
    return c == '"' || c == '\'' || c == '(' || c == '[';
}

bool is_close_follower(char c) {
    return c == '"' || c == '\'' || c == ')' || c == ']';
}

// Word immediately before position `i` (exclusive), lower-cased.
std::string word_before(std::string_view text, std::size_t i) {
    std::size_t end = i;
    std::size_t start = end;
    while (start > 0 && (std::isalnum(static_cast<unsigned char>(text[start - 1])) ||
                         static_cast<unsigned char>(text[start - 1]) >= 0x80)) {
        --start;
    }
    return util::to_lower(text.substr(start, end - start));
}

}  // namespace

std::vector<SentenceSpan> RuleSentenceSplitter::split(
    std::string_view text, const std::vector<RefMarker>& markers) const {
    std::vector<std::pair<std::size_t, std::size_t>> ranges;  // [begin, end)

    std::size_t start = 0;
    const std::size_t n = text.size();
    auto emit = [&](std::size_t end) {
        while (start < end && std::isspace(static_cast<unsigned char>(text[start]))) ++start;
        std::size_t e = end;
        while (e > start && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
        if (e > start) ranges.emplace_back(start, e);
        start = end;
    };

    for (std::size_t i = 0; i < n; ++i) {
        char c = text[i];
        if (c == '\n' && i + 1 < n && text[i + 1] == '\n') {
            emit(i);  // paragraph boundary is always a sentence boundary
            continue;
        }
        if (c != '.' && c != '!' && c != '?') continue;

        if (c == '.') {
            // Ellipsis: only the last dot of a run may end the sentence.
            if (i + 1 < n && text[i + 1] == '.') continue;
            // Decimal number.
            if (i > 0 && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
                std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
                continue;
            }
            std::string prev = word_before(text, i);
            if (abbreviations().count(prev)) continue;
            // Single-letter initials ("J. K. Rowling").
            if (prev.size() == 1 && std::isalpha(static_cast<unsigned char>(prev[0]))) continue;
        }

        std::size_t j = i + 1;
        while (j < n && is_close_follower(text[j])) ++j;
        if (j >= n) {
            emit(j);
            break;
        }
        if (!std::isspace(static_cast<unsigned char>(text[j]))) continue;
        std::size_t k = j;
        while (k < n && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
        if (k >= n) {
            emit(j);
            break;
        }
        unsigned char next = static_cast<unsigned char>(text[k]);
        if (std::isupper(next) || std::isdigit(next) || is_open_quote(text[k]) || next >= 0x80) {
            emit(j);
            i = j - 1;
        }
    }
    emit(n);

    std::vector<SentenceSpan> out;
    out.reserve(ranges.size());
    for (const auto& [b, e] : ranges) {
        SentenceSpan span;
        span.begin = b;
        span.end = e;
        span.text = std::string(text.substr(b, e - b));
        out.push_back(std::move(span));
    }

    // Bind each marker to the sentence containing its position; a marker at
    // a sentence's end offset (right after the final token) belongs to it.
    for (const auto& m : markers) {
        SentenceSpan* home = nullptr;
        for (auto& span : out) {
            if (m.position > span.begin && m.position <= span.end) {
                home = &span;
                break;
            }
            if (m.position <= span.begin) {  // gap before this sentence
                home = &span;
                break;
            }
        }
        if (!home && !out.empty()) home = &out.back();
        if (home) {
            std::size_t rel = m.position > home->begin ? m.position - home->begin : 0;
            rel = std::min(rel, home->text.size());
            home->markers.push_back({rel, m.urls});
        }
    }
    for (auto& span : out) {
        std::sort(span.markers.begin(), span.markers.end(),
                  [](const RefMarker& a, const RefMarker& b) { return a.position < b.position; });
    }
    return out;
}

std::vector<CitingSentence> extract_citing_sentences(const ArticleSource& article,
                                                     const SentenceSplitter& splitter) {
    std::vector<CitingSentence> out;
    for (const auto& section : article.sections) {
        auto spans = splitter.split(section.text, section.markers);
        for (std::size_t i = 0; i < spans.size(); ++i) {
            if (spans[i].markers.empty()) continue;
            CitingSentence cs;
            cs.sentence_text = spans[i].text;
            cs.page_id = article.page_id;
            cs.last_updated = article.last_updated;
            cs.cohort_year = article.cohort_year;
            cs.context.title = article.title;
            cs.context.abstract = article.abstract;
            cs.context.header_path = section.header_path;
            for (std::size_t d = 1; d <= 2 && d <= i; ++d)
                cs.context.before.insert(cs.context.before.begin(), spans[i - d].text);
            for (std::size_t d = 1; d <= 2 && i + d < spans.size(); ++d)
                cs.context.after.push_back(spans[i + d].text);

            // Markers at the same position form one citation group.
            for (const auto& m : spans[i].markers) {
                if (!cs.segments.empty() && cs.segments.back().second.position == m.position) {
                    auto& urls = cs.segments.back().second.urls;
                    for (const auto& u : m.urls)
                        if (std::find(urls.begin(), urls.end(), u) == urls.end()) urls.push_back(u);
                } else {
                    CitationGroup g;
                    g.position = m.position;
                    g.urls = m.urls;
                    cs.segments.emplace_back(std::string(), std::move(g));
                }
            }
            cs.segments = segment_by_citations(cs);
            out.push_back(std::move(cs));
        }
    }
    return out;
}

std::vector<std::pair<std::string, CitationGroup>> segment_by_citations(
    const CitingSentence& sentence) {
    auto segments = sentence.segments;
    std::size_t prev = 0;
    for (std::size_t g = 0; g < segments.size(); ++g) {
        // Each segment ends at its own citation group's position; the last
        // segment also absorbs any trailing uncited text.
        std::size_t end = (g + 1 == segments.size()) ? sentence.sentence_text.size()
                                                     : segments[g].second.position;
        end = std::min(end, sentence.sentence_text.size());
        if (end < prev) end = prev;
        segments[g].first =
            util::trim(std::string_view(sentence.sentence_text).substr(prev, end - prev));
        prev = end;
    }
    return segments;
}

}  // namespace irb::ingest
