#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "irb/bench/bench.hpp"
#include "irb/retrieval/bm25.hpp"

namespace irb::retrieval {

// A plugin (dense retriever, commercial reranker) that does not ship.
struct NotConfiguredError : util::Error {
    using util::Error::Error;
};

// query -> ranked documents
class Retriever {
public:
    virtual ~Retriever() = default;
    virtual std::vector<DocHit> retrieve(const std::string& query, std::size_t k) const = 0;
    virtual std::string id() const = 0;
};

class Bm25Retriever final : public Retriever {
public:
    Bm25Retriever(const Bm25Index& index, std::size_t top_m = kDefaultTopM)
        : index_(index), top_m_(top_m) {}
    std::vector<DocHit> retrieve(const std::string& query, std::size_t k) const override;
    std::string id() const override { return "bm25"; }

private:
    const Bm25Index& index_;
    std::size_t top_m_;
};

// query + candidates -> reordered candidates
class Reranker {
public:
    virtual ~Reranker() = default;
    virtual std::vector<DocHit> rerank(const std::string& query,
                                       const std::vector<DocHit>& candidates) const = 0;
};

class IdentityReranker final : public Reranker {
public:
    std::vector<DocHit> rerank(const std::string&,
                               const std::vector<DocHit>& candidates) const override {
        return candidates;
    }
};

// "bm25" is the only built-in retriever; "identity" (or "none") the only
// reranker. Other names raise NotConfiguredError naming the plugin.
std::unique_ptr<Retriever> make_retriever(const std::string& name, const Bm25Index& index,
                                          std::size_t top_m = kDefaultTopM);
std::unique_ptr<Reranker> make_reranker(const std::string& name);

struct RetrievalRun {
    std::string retriever_id;
    int k_eval = 5;
    std::map<std::string, std::vector<DocHit>> rankings;  // query_id -> ranked docs
};

// Ranks every query in the dataset, keeping the top k_eval documents.
RetrievalRun run_retrieval(const bench::BenchmarkDataset& dataset, const Retriever& retriever,
                           const Reranker& reranker, int k_eval);

// TREC run format: query_id Q0 doc_id rank score tag.
void write_trec_run(const RetrievalRun& run, const std::filesystem::path& path);
RetrievalRun load_trec_run(const std::filesystem::path& path);

struct ScoredSlices {
    int k = 5;
    std::map<std::string, double> values;        // slice -> mean nDCG@k
    std::map<std::string, std::size_t> counts;   // slice -> member query count
};

// Mean nDCG@k per attribute slice (Language/Freshness/Topic/#Hops plus
// False-premise and Overall). False-premise queries are excluded from the
// valid-premise slices. Throws when the run is missing any dataset query.
ScoredSlices score_run(const RetrievalRun& run, const bench::Qrels& qrels,
                       const std::vector<qgen::QASample>& queries);

nlohmann::json slices_to_json(const ScoredSlices& slices);
// Markdown table mirroring the retrieval-performance table layout.
std::string slices_markdown(const ScoredSlices& slices, const std::string& retriever_id);

}  // namespace irb::retrieval
