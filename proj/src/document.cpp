#include "irb/evidence/document.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "irb/text/tokenizer.hpp"

namespace irb::evidence {

std::string to_string(FetchStatus status) {
    switch (status) {
        case FetchStatus::ok: return "ok";
        case FetchStatus::offline: return "offline";
        case FetchStatus::empty_extraction: return "empty_extraction";
        case FetchStatus::non_text: return "non_text";
    }
    return "offline";
}

FetchStatus fetch_status_from_string(const std::string& s) {
    if (s == "ok") return FetchStatus::ok;
    if (s == "offline") return FetchStatus::offline;
    if (s == "empty_extraction") return FetchStatus::empty_extraction;
    if (s == "non_text") return FetchStatus::non_text;
    throw std::runtime_error("unknown fetch_status: " + s);
}

nlohmann::json EvidenceDocument::to_json() const {
    nlohmann::json j{{"doc_id", doc_id},
                     {"url", url},
                     {"content", content},
                     {"language", language},
                     {"language_confidence", language_confidence},
                     {"fetch_status", to_string(fetch_status)}};
    if (published) j["published"] = published->iso();
    else j["published"] = nullptr;
    return j;
}

EvidenceDocument EvidenceDocument::from_json(const nlohmann::json& j) {
    EvidenceDocument doc;
    doc.doc_id = j.at("doc_id").get<std::string>();
    doc.url = j.at("url").get<std::string>();
    doc.content = j.at("content").get<std::string>();
    doc.language = j.at("language").get<std::string>();
    doc.language_confidence = j.value("language_confidence", 0.0);
    doc.fetch_status = fetch_status_from_string(j.at("fetch_status").get<std::string>());
    if (j.contains("published") && !j.at("published").is_null()) {
        doc.published = util::parse_iso_date(j.at("published").get<std::string>());
    }
    return doc;
}

nlohmann::json CorpusChunk::to_json() const {
    return {{"doc_id", doc_id},
            {"chunk_index", chunk_index},
            {"token_count", token_count},
            {"text", text}};
}

CorpusChunk CorpusChunk::from_json(const nlohmann::json& j) {
    CorpusChunk c;
    c.doc_id = j.at("doc_id").get<std::string>();
    c.chunk_index = j.at("chunk_index").get<int>();
    c.token_count = j.at("token_count").get<int>();
    c.text = j.at("text").get<std::string>();
    return c;
}

std::vector<CorpusChunk> chunk_document(const EvidenceDocument& doc) {
    std::vector<CorpusChunk> chunks;
    auto tokens = text::default_tokenizer().tokenize(doc.content);
    for (std::size_t start = 0; start < tokens.size(); start += kChunkTokenLimit) {
        std::size_t count = std::min<std::size_t>(kChunkTokenLimit, tokens.size() - start);
        CorpusChunk chunk;
        chunk.doc_id = doc.doc_id;
        chunk.chunk_index = static_cast<int>(chunks.size());
        chunk.token_count = static_cast<int>(count);
        std::size_t byte_begin = tokens[start].begin;
        std::size_t byte_end = tokens[start + count - 1].end;
        chunk.text = doc.content.substr(byte_begin, byte_end - byte_begin);
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

}  // namespace irb::evidence
