#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "irb/evidence/document.hpp"
#include "irb/evidence/fetch.hpp"

namespace irb::evidence {

// On-disk corpus: corpus/docs.jsonl, corpus/chunks.jsonl, corpus/cache/.
// Documents are keyed by doc_id (itself derived from the URL), so re-runs
// are idempotent. The fetch cache never expires within a build: a dated
// benchmark snapshots the web as it was.
class CorpusStore {
public:
    explicit CorpusStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    // --- fetch cache -------------------------------------------------
    // A hit is only returned when the stored checksum matches the body;
    // corrupted entries behave like misses so callers re-fetch and repair.
    std::optional<RawFetch> cache_get(const std::string& url) const;
    void cache_put(const std::string& url, const RawFetch& raw) const;

    // --- documents and chunks ----------------------------------------
    void upsert(const EvidenceDocument& doc, const std::vector<CorpusChunk>& chunks);
    bool contains(const std::string& doc_id) const;
    const EvidenceDocument* find(const std::string& doc_id) const;

    std::vector<EvidenceDocument> documents() const;            // doc_id order
    std::vector<CorpusChunk> chunks() const;                    // doc_id, index order
    std::vector<CorpusChunk> chunks_for(const std::string& doc_id) const;

    // Persists docs.jsonl and chunks.jsonl atomically, sorted by doc_id so
    // the bytes are deterministic for identical content.
    void save() const;
    // Loads existing files if present; a fresh directory loads empty.
    void load();

private:
    std::filesystem::path cache_path(const std::string& url) const;

    std::filesystem::path root_;
    std::map<std::string, EvidenceDocument> docs_;
    std::map<std::string, std::vector<CorpusChunk>> chunks_;
};

}  // namespace irb::evidence
