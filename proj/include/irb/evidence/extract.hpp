#pragma once

#include <memory>
#include <optional>
#include <string>

#include "irb/util/dates.hpp"

namespace irb::evidence {

// Pluggable main-content extraction. The default removes scripts, styles,
// navigation, and other boilerplate, then keeps text blocks by a
// link-density heuristic (dense prose stays; link farms and chrome go).
class MainContentExtractor {
public:
    virtual ~MainContentExtractor() = default;
    virtual std::string extract(const std::string& raw_html) const = 0;
};

class TextDensityExtractor final : public MainContentExtractor {
public:
    std::string extract(const std::string& raw_html) const override;
};

const MainContentExtractor& default_extractor();

// Flattens HTML to visible text without any density filtering (tags
// stripped, entities decoded, whitespace normalised).
std::string html_to_text(const std::string& raw_html);

// Best-effort publication date: meta tags, JSON-LD, <time datetime>, a date
// embedded in the URL path, then a byline date near the top of the visible
// text. Absent when nothing parses.
std::optional<util::Date> extract_publication_date(const std::string& raw_html,
                                                   const std::string& url);

// Pluggable language identification.
struct LanguageGuess {
    std::string code = "und";  // ISO 639-1 or "und"
    double confidence = 0.0;
};

class LanguageDetector {
public:
    virtual ~LanguageDetector() = default;
    virtual LanguageGuess detect(const std::string& content) const = 0;
};

// Script statistics plus stop-word profiles for en/fr/de/es/it/ru. Returns
// "und" below the 0.65 confidence threshold or for near-empty input.
class StopwordLanguageDetector final : public LanguageDetector {
public:
    LanguageGuess detect(const std::string& content) const override;
};

const LanguageDetector& default_language_detector();

// Convenience wrapper over the default detector: the dominant language code,
// or "und" when confidence is below threshold.
std::string detect_language(const std::string& content);

}  // namespace irb::evidence
