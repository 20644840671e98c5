#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "irb/evidence/document.hpp"

namespace irb::retrieval {

inline constexpr std::size_t kDefaultTopM = 100;

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;

    bool operator==(const Bm25Params&) const = default;
};

struct ChunkHit {
    std::string doc_id;
    int chunk_index = 0;
    double score = 0.0;
};

struct DocHit {
    std::string doc_id;
    double score = 0.0;

    bool operator==(const DocHit&) const = default;
};

// Okapi BM25 over corpus chunks. Tokenization matches the chunking
// tokenizer (case-folded word tokens); idf is the classic unfloored
// ln((N - df + 0.5) / (df + 0.5)).
class Bm25Index {
public:
    static Bm25Index build(const std::vector<evidence::CorpusChunk>& chunks,
                           Bm25Params params = {});

    // Top chunks by score; ties broken by (doc_id, chunk_index) ascending.
    // An empty query after tokenization yields an empty ranking.
    std::vector<ChunkHit> search(const std::string& query,
                                 std::size_t top_m = kDefaultTopM) const;

    void save(const std::filesystem::path& path) const;
    static Bm25Index load(const std::filesystem::path& path);

    std::size_t chunk_count() const { return chunks_.size(); }
    const Bm25Params& params() const { return params_; }
    double idf(const std::string& term) const;

private:
    struct ChunkInfo {
        std::string doc_id;
        int chunk_index = 0;
        int length = 0;  // token count
    };

    Bm25Params params_;
    std::vector<ChunkInfo> chunks_;
    double avg_length_ = 0.0;
    // term -> (chunk ordinal, term frequency), ordinals ascending
    std::map<std::string, std::vector<std::pair<std::size_t, int>>> postings_;
};

// Documents scored by their best chunk, ordered score-descending with
// doc_id-ascending tie-break.
std::vector<DocHit> rank_documents(const std::vector<ChunkHit>& chunk_ranking);

// Binary-relevance nDCG with log2(i+1) discounts; the ideal DCG uses
// min(|relevant|, k) relevant positions. Throws when k < 1.
double ndcg_at_k(const std::vector<std::string>& ranking, const std::set<std::string>& relevant,
                 int k);

}  // namespace irb::retrieval
