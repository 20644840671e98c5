#pragma once

#include <string>
#include <string_view>

#include "irb/ingest/article.hpp"

namespace irb::ingest {

struct ArticleMeta {
    std::string page_id;
    std::string title;
    util::Date last_updated;
    int cohort_year = 0;
};

/// Parses wikitext into cleaned section texts with reference markers.
/// Reference markup (<ref> tags, cite templates, named/reused refs) is
/// normalized to URL lists; refs that carry no URL are dropped. Malformed
/// spans are skipped and reported in parse_warnings, never fatal.
ArticleSource parse_article(std::string_view wikitext, const ArticleMeta& meta);

/// Strips inline markup ('''bold''', [[links]], {{templates}}, <tags>)
/// from one line of wikitext. Exposed for tests.
std::string strip_inline_markup(std::string_view line);

}  // namespace irb::ingest
