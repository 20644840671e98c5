#include "irb/evidence/store.hpp"

#include <nlohmann/json.hpp>

#include "irb/util/fs.hpp"
#include "irb/util/hash.hpp"

namespace irb::evidence {

CorpusStore::CorpusStore(std::filesystem::path root) : root_(std::move(root)) {
    util::ensure_dir(root_);
    util::ensure_dir(root_ / "cache");
}

std::filesystem::path CorpusStore::cache_path(const std::string& url) const {
    return root_ / "cache" / (util::doc_id_for_url(url) + ".json");
}

std::optional<RawFetch> CorpusStore::cache_get(const std::string& url) const {
    auto text = util::read_file_if_exists(cache_path(url));
    if (!text) return std::nullopt;
    nlohmann::json j = nlohmann::json::parse(*text, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    if (j.value("url", "") != url) return std::nullopt;
    RawFetch raw;
    raw.transport_ok = j.value("transport_ok", false);
    raw.http_status = j.value("http_status", 0);
    raw.content_type = j.value("content_type", "");
    raw.body = j.value("body", "");
    raw.error = j.value("error", "");
    // Corruption check: body must hash to the recorded checksum.
    if (util::sha256_hex(raw.body) != j.value("checksum", "")) return std::nullopt;
    return raw;
}

void CorpusStore::cache_put(const std::string& url, const RawFetch& raw) const {
    nlohmann::json j{{"url", url},
                     {"transport_ok", raw.transport_ok},
                     {"http_status", raw.http_status},
                     {"content_type", raw.content_type},
                     {"body", raw.body},
                     {"error", raw.error},
                     {"checksum", util::sha256_hex(raw.body)}};
    util::write_file_atomic(cache_path(url), j.dump());
}

void CorpusStore::upsert(const EvidenceDocument& doc, const std::vector<CorpusChunk>& chunks) {
    docs_[doc.doc_id] = doc;
    chunks_[doc.doc_id] = chunks;
}

bool CorpusStore::contains(const std::string& doc_id) const { return docs_.count(doc_id) > 0; }

const EvidenceDocument* CorpusStore::find(const std::string& doc_id) const {
    auto it = docs_.find(doc_id);
    return it == docs_.end() ? nullptr : &it->second;
}

std::vector<EvidenceDocument> CorpusStore::documents() const {
    std::vector<EvidenceDocument> out;
    out.reserve(docs_.size());
    for (const auto& [id, doc] : docs_) out.push_back(doc);
    return out;
}

std::vector<CorpusChunk> CorpusStore::chunks() const {
    std::vector<CorpusChunk> out;
    for (const auto& [id, list] : chunks_)
        for (const auto& c : list) out.push_back(c);
    return out;
}

std::vector<CorpusChunk> CorpusStore::chunks_for(const std::string& doc_id) const {
    auto it = chunks_.find(doc_id);
    return it == chunks_.end() ? std::vector<CorpusChunk>{} : it->second;
}

void CorpusStore::save() const {
    std::vector<nlohmann::json> doc_lines, chunk_lines;
    doc_lines.reserve(docs_.size());
    for (const auto& [id, doc] : docs_) doc_lines.push_back(doc.to_json());
    for (const auto& [id, list] : chunks_)
        for (const auto& c : list) chunk_lines.push_back(c.to_json());
    util::write_jsonl(root_ / "docs.jsonl", doc_lines);
    util::write_jsonl(root_ / "chunks.jsonl", chunk_lines);
}

void CorpusStore::load() {
    docs_.clear();
    chunks_.clear();
    if (std::filesystem::exists(root_ / "docs.jsonl")) {
        for (const auto& j : util::read_jsonl(root_ / "docs.jsonl")) {
            auto doc = EvidenceDocument::from_json(j);
            docs_[doc.doc_id] = std::move(doc);
        }
    }
    if (std::filesystem::exists(root_ / "chunks.jsonl")) {
        for (const auto& j : util::read_jsonl(root_ / "chunks.jsonl")) {
            auto chunk = CorpusChunk::from_json(j);
            chunks_[chunk.doc_id].push_back(std::move(chunk));
        }
    }
}

}  // namespace irb::evidence
