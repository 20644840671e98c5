#include "irb/retrieval/run.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

namespace irb::retrieval {

namespace {

std::string format_score(double score) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", score);
    return buffer;
}

// Canonical column order for slice reports.
int slice_rank(const std::string& name) {
    if (name == "Overall") return 0;
    if (name.rfind("Language:", 0) == 0) return name.find("English") != std::string::npos ? 1 : 2;
    if (name.rfind("Freshness:", 0) == 0) return 10;  // years sort lexically below
    if (name.rfind("Topic:", 0) == 0) return 20;
    if (name.rfind("Hops:", 0) == 0) return name.find("Single") != std::string::npos ? 30 : 31;
    if (name == "False-premise") return 40;
    return 50;
}

std::vector<std::string> ordered_slices(const ScoredSlices& slices) {
    std::vector<std::string> names;
    for (const auto& [name, value] : slices.values) names.push_back(name);
    std::stable_sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
        int ra = slice_rank(a), rb = slice_rank(b);
        if (ra != rb) return ra < rb;
        return a < b;
    });
    return names;
}

}  // namespace

std::vector<DocHit> Bm25Retriever::retrieve(const std::string& query, std::size_t k) const {
    auto docs = rank_documents(index_.search(query, top_m_));
    if (docs.size() > k) docs.resize(k);
    return docs;
}

std::unique_ptr<Retriever> make_retriever(const std::string& name, const Bm25Index& index,
                                          std::size_t top_m) {
    if (name == "bm25") return std::make_unique<Bm25Retriever>(index, top_m);
    throw NotConfiguredError("retriever '" + name +
                             "' is not configured; only 'bm25' ships with this build");
}

std::unique_ptr<Reranker> make_reranker(const std::string& name) {
    if (name.empty() || name == "identity" || name == "none") {
        return std::make_unique<IdentityReranker>();
    }
    throw NotConfiguredError("reranker '" + name +
                             "' is not configured; only 'identity' ships with this build");
}

RetrievalRun run_retrieval(const bench::BenchmarkDataset& dataset, const Retriever& retriever,
                           const Reranker& reranker, int k_eval) {
    RetrievalRun run;
    run.retriever_id = retriever.id();
    run.k_eval = k_eval;
    for (const auto& query : dataset.queries) {
        auto candidates = retriever.retrieve(query.question, static_cast<std::size_t>(k_eval));
        auto ranked = reranker.rerank(query.question, candidates);
        if (ranked.size() > static_cast<std::size_t>(k_eval)) ranked.resize(k_eval);
        run.rankings[query.sample_id] = std::move(ranked);
    }
    return run;
}

void write_trec_run(const RetrievalRun& run, const std::filesystem::path& path) {
    std::string out;
    for (const auto& [query_id, hits] : run.rankings) {
        for (std::size_t i = 0; i < hits.size(); ++i) {
            out += query_id + " Q0 " + hits[i].doc_id + " " + std::to_string(i + 1) + " " +
                   format_score(hits[i].score) + " " + run.retriever_id + "\n";
        }
    }
    util::write_file_atomic(path, out);
}

RetrievalRun load_trec_run(const std::filesystem::path& path) {
    RetrievalRun run;
    int max_rank = 0;
    std::istringstream in(util::read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream cells(line);
        std::string query_id, q0, doc_id, tag;
        int rank = 0;
        double score = 0.0;
        if (!(cells >> query_id >> q0 >> doc_id >> rank >> score >> tag) || q0 != "Q0") {
            throw util::Error("malformed TREC run line: " + line);
        }
        run.rankings[query_id].push_back({doc_id, score});
        run.retriever_id = tag;
        max_rank = std::max(max_rank, rank);
    }
    run.k_eval = max_rank;
    return run;
}

ScoredSlices score_run(const RetrievalRun& run, const bench::Qrels& qrels,
                       const std::vector<qgen::QASample>& queries) {
    std::vector<std::string> missing;
    for (const auto& query : queries) {
        if (!run.rankings.count(query.sample_id)) missing.push_back(query.sample_id);
    }
    if (!missing.empty()) {
        std::string ids;
        for (const auto& id : missing) ids += (ids.empty() ? "" : ", ") + id;
        throw util::Error("run is missing queries: " + ids);
    }

    ScoredSlices slices;
    slices.k = run.k_eval;
    std::map<std::string, double> sums;
    auto add = [&](const std::string& slice, double value) {
        sums[slice] += value;
        slices.counts[slice] += 1;
    };

    for (const auto& query : queries) {
        const auto& hits = run.rankings.at(query.sample_id);
        std::vector<std::string> ranking;
        ranking.reserve(hits.size());
        for (const auto& hit : hits) ranking.push_back(hit.doc_id);
        auto relevant = qrels.find(query.sample_id);
        if (relevant == qrels.end()) {
            throw util::Error("qrels missing query: " + query.sample_id);
        }
        double value = ndcg_at_k(ranking, relevant->second, run.k_eval);

        add("Overall", value);
        if (query.attributes.false_premise) {
            add("False-premise", value);
            continue;
        }
        add(query.attributes.language == bench::Language::english ? "Language: English"
                                                                  : "Language: Cross",
            value);
        add("Freshness: " + std::to_string(query.attributes.freshness_year), value);
        for (const auto& topic : query.attributes.topics) add("Topic: " + topic, value);
        add(query.attributes.hops == 2 ? "Hops: Multi" : "Hops: Single", value);
    }

    for (const auto& [slice, sum] : sums) {
        slices.values[slice] = sum / static_cast<double>(slices.counts.at(slice));
    }
    return slices;
}

nlohmann::json slices_to_json(const ScoredSlices& slices) {
    nlohmann::json out = {{"k", slices.k}, {"slices", nlohmann::json::object()}};
    for (const auto& [name, value] : slices.values) {
        out["slices"][name] = {{"ndcg", value}, {"count", slices.counts.at(name)}};
    }
    return out;
}

std::string slices_markdown(const ScoredSlices& slices, const std::string& retriever_id) {
    auto names = ordered_slices(slices);
    std::string header = "| Retriever |";
    std::string rule = "| --- |";
    std::string row = "| " + retriever_id + " |";
    for (const auto& name : names) {
        header += " " + name + " |";
        rule += " --- |";
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%.1f", 100.0 * slices.values.at(name));
        row += std::string(" ") + buffer + " |";
    }
    return "# Retrieval performance (nDCG@" + std::to_string(slices.k) + ")\n\n" + header +
           "\n" + rule + "\n" + row + "\n";
}

}  // namespace irb::retrieval
