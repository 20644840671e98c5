#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "irb/ingest/article.hpp"

namespace irb::ingest {

// One sentence within a section, with the reference markers that bind to it.
struct SentenceSpan {
    std::string text;                  // trimmed sentence text
    std::size_t begin = 0;             // offsets into the section text
    std::size_t end = 0;
    std::vector<RefMarker> markers;    // positions re-based onto `text`
};

class SentenceSplitter {
public:
    virtual ~SentenceSplitter() = default;
    // Splits section text into sentences; never crosses a blank-line
    // paragraph boundary. Markers bind to the sentence that contains their
    // position (a marker sitting exactly at a sentence end belongs to it).
    virtual std::vector<SentenceSpan> split(std::string_view text,
                                            const std::vector<RefMarker>& markers) const = 0;
};

// Rule-based splitter: terminal punctuation followed by whitespace and an
// upper-case/digit/quote opener, with guards for common abbreviations,
// single-letter initials, decimal numbers, and ellipses.
class RuleSentenceSplitter final : public SentenceSplitter {
public:
    std::vector<SentenceSpan> split(std::string_view text,
                                    const std::vector<RefMarker>& markers) const override;
};

// Extracts every sentence that carries at least one reference marker,
// packaging it with title, abstract, +/-2 neighbouring sentences, and the
// section header path. Deterministic: document order, stable output.
std::vector<CitingSentence> extract_citing_sentences(const ArticleSource& article,
                                                     const SentenceSplitter& splitter);

// Splits a citing sentence into contiguous segments, one per citation group.
// Segment i covers the text between the previous group's position and this
// group's position; trailing uncited text is absorbed into the last segment
// so that the segments always partition the sentence.
std::vector<std::pair<std::string, CitationGroup>> segment_by_citations(
    const CitingSentence& sentence);

}  // namespace irb::ingest
