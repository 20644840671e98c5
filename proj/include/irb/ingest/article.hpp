#pragma once

#include <string>
#include <vector>

#include "irb/util/dates.hpp"

namespace irb::ingest {

struct RefMarker {
    std::size_t position = 0;            // char offset into the cleaned text
    std::vector<std::string> urls;       // deduplicated, document order
};

struct SectionText {
    std::vector<std::string> header_path;  // e.g. {"Career", "Real Madrid"}
    std::string text;                      // cleaned plain text
    std::vector<RefMarker> markers;        // positions into `text`
};

struct ArticleSource {
    std::string page_id;
    std::string title;
    std::string abstract;                      // lead section, cleaned
    std::vector<std::string> section_headers;  // in document order
    std::string body;                          // original wikitext
    util::Date last_updated;
    int cohort_year = 0;

    std::vector<SectionText> sections;   // lead first (empty header path)
    std::vector<std::string> parse_warnings;  // skipped/malformed spans
};

struct CitationGroup {
    std::vector<std::string> urls;  // non-empty, deduplicated, in order
    std::size_t position = 0;       // char offset within the sentence
};

struct SentenceContext {
    std::string title;
    std::string abstract;
    std::vector<std::string> before;  // up to 2 preceding sentences
    std::vector<std::string> after;   // up to 2 following sentences
    std::vector<std::string> header_path;
};

struct CitingSentence {
    std::string sentence_text;
    std::vector<std::pair<std::string, CitationGroup>> segments;
    SentenceContext context;
    std::string page_id;
    util::Date last_updated;
    int cohort_year = 0;
};

}  // namespace irb::ingest
