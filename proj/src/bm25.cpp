#include "irb/retrieval/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "irb/text/tokenizer.hpp"
#include "irb/util/fs.hpp"

namespace irb::retrieval {

Bm25Index Bm25Index::build(const std::vector<evidence::CorpusChunk>& chunks, Bm25Params params) {
    Bm25Index index;
    index.params_ = params;
    long long total_length = 0;
    for (const auto& chunk : chunks) {
        auto terms = text::index_terms(chunk.text);
        std::map<std::string, int> tf;
        for (const auto& term : terms) ++tf[term];
        std::size_t ordinal = index.chunks_.size();
        index.chunks_.push_back({chunk.doc_id, chunk.chunk_index, static_cast<int>(terms.size())});
        total_length += static_cast<long long>(terms.size());
        for (const auto& [term, count] : tf) {
            index.postings_[term].emplace_back(ordinal, count);
        }
    }
    index.avg_length_ =
        index.chunks_.empty() ? 0.0 : static_cast<double>(total_length) / index.chunks_.size();
    return index;
}

double Bm25Index::idf(const std::string& term) const {
    auto hit = postings_.find(term);
    double df = hit == postings_.end() ? 0.0 : static_cast<double>(hit->second.size());
    double n = static_cast<double>(chunks_.size());
    return std::log((n - df + 0.5) / (df + 0.5));
}

std::vector<ChunkHit> Bm25Index::search(const std::string& query, std::size_t top_m) const {
    auto terms = text::index_terms(query);
    if (terms.empty() || chunks_.empty()) return {};

    // Query terms contribute once per occurrence.
    std::map<std::string, int> query_tf;
    for (const auto& term : terms) ++query_tf[term];

    std::map<std::size_t, double> scores;
    for (const auto& [term, qtf] : query_tf) {
        auto hit = postings_.find(term);
        if (hit == postings_.end()) continue;  // absent terms contribute 0
        double term_idf = idf(term);
        for (const auto& [ordinal, tf] : hit->second) {
            const auto& chunk = chunks_[ordinal];
            double norm = params_.k1 * (1.0 - params_.b +
                                        params_.b * chunk.length /
                                            (avg_length_ > 0.0 ? avg_length_ : 1.0));
            double contribution = term_idf * (tf * (params_.k1 + 1.0)) / (tf + norm);
            scores[ordinal] += qtf * contribution;
        }
    }

    std::vector<ChunkHit> hits;
    hits.reserve(scores.size());
    for (const auto& [ordinal, score] : scores) {
        hits.push_back({chunks_[ordinal].doc_id, chunks_[ordinal].chunk_index, score});
    }
    std::sort(hits.begin(), hits.end(), [](const ChunkHit& a, const ChunkHit& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
        return a.chunk_index < b.chunk_index;
    });
    if (hits.size() > top_m) hits.resize(top_m);
    return hits;
}

void Bm25Index::save(const std::filesystem::path& path) const {
    nlohmann::json chunks = nlohmann::json::array();
    for (const auto& chunk : chunks_) {
        chunks.push_back({{"doc_id", chunk.doc_id},
                          {"chunk_index", chunk.chunk_index},
                          {"length", chunk.length}});
    }
    nlohmann::json postings = nlohmann::json::object();
    for (const auto& [term, list] : postings_) {
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& [ordinal, tf] : list) entries.push_back({ordinal, tf});
        postings[term] = std::move(entries);
    }
    nlohmann::json j = {{"schema_version", 1},
                        {"params", {{"k1", params_.k1}, {"b", params_.b}}},
                        {"avg_length", avg_length_},
                        {"chunks", chunks},
                        {"postings", postings}};
    util::write_file_atomic(path, j.dump() + "\n");
}

Bm25Index Bm25Index::load(const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::parse(util::read_file(path));
    Bm25Index index;
    index.params_.k1 = j.at("params").at("k1").get<double>();
    index.params_.b = j.at("params").at("b").get<double>();
    index.avg_length_ = j.at("avg_length").get<double>();
    for (const auto& chunk : j.at("chunks")) {
        index.chunks_.push_back({chunk.at("doc_id").get<std::string>(),
                                 chunk.at("chunk_index").get<int>(),
                                 chunk.at("length").get<int>()});
    }
    for (const auto& [term, entries] : j.at("postings").items()) {
        auto& list = index.postings_[term];
        for (const auto& entry : entries) {
            list.emplace_back(entry.at(0).get<std::size_t>(), entry.at(1).get<int>());
        }
    }
    return index;
}

std::vector<DocHit> rank_documents(const std::vector<ChunkHit>& chunk_ranking) {
    std::map<std::string, double> best;
    for (const auto& hit : chunk_ranking) {
        auto [it, inserted] = best.emplace(hit.doc_id, hit.score);
        if (!inserted) it->second = std::max(it->second, hit.score);
    }
    std::vector<DocHit> docs;
    docs.reserve(best.size());
    for (const auto& [doc_id, score] : best) docs.push_back({doc_id, score});
    std::sort(docs.begin(), docs.end(), [](const DocHit& a, const DocHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    return docs;
}

double ndcg_at_k(const std::vector<std::string>& ranking, const std::set<std::string>& relevant,
                 int k) {
    if (k < 1) throw std::invalid_argument("ndcg_at_k: k must be >= 1");
    if (relevant.empty()) return 0.0;
    double dcg = 0.0;
    std::size_t limit = std::min(ranking.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < limit; ++i) {
        if (relevant.count(ranking[i])) {
            dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
        }
    }
    double ideal = 0.0;
    std::size_t ideal_hits = std::min(relevant.size(), static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < ideal_hits; ++i) {
        ideal += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
    return ideal == 0.0 ? 0.0 : dcg / ideal;
}

}  // namespace irb::retrieval
