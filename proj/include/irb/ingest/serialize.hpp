#pragma once

#include <nlohmann/json_fwd.hpp>

#include "irb/ingest/article.hpp"

namespace irb::ingest {

nlohmann::json to_json(const CitationGroup& group);
CitationGroup citation_group_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CitingSentence& sentence);
CitingSentence citing_sentence_from_json(const nlohmann::json& j);

}  // namespace irb::ingest
