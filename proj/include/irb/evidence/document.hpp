#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "irb/util/dates.hpp"

namespace irb::evidence {

enum class FetchStatus { ok, offline, empty_extraction, non_text };

std::string to_string(FetchStatus status);
FetchStatus fetch_status_from_string(const std::string& s);

// A fetched evidence web document after main-content extraction.
struct EvidenceDocument {
    std::string doc_id;                  // stable hash of the URL
    std::string url;
    std::string content;                 // extracted main text; non-empty iff ok
    std::string language = "und";        // ISO 639-1 code or "und"
    double language_confidence = 0.0;
    std::optional<util::Date> published;
    FetchStatus fetch_status = FetchStatus::offline;

    nlohmann::json to_json() const;
    static EvidenceDocument from_json(const nlohmann::json& j);
};

// One retrieval unit: a contiguous ≤512-token slice of a document.
struct CorpusChunk {
    std::string doc_id;
    int chunk_index = 0;  // 0-based, contiguous per document
    int token_count = 0;  // ≤ 512
    std::string text;

    nlohmann::json to_json() const;
    static CorpusChunk from_json(const nlohmann::json& j);
};

inline constexpr int kChunkTokenLimit = 512;

// Splits a document's content into chunks of at most 512 tokens under the
// pipeline's fixed tokenizer. Concatenating the chunk token streams
// reproduces the document token stream.
std::vector<CorpusChunk> chunk_document(const EvidenceDocument& doc);

}  // namespace irb::evidence
