#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "irb/bench/attributes.hpp"
#include "irb/evidence/document.hpp"
#include "irb/qgen/question.hpp"
#include "irb/util/dates.hpp"
#include "irb/util/fs.hpp"

namespace irb::bench {

inline constexpr int kSchemaVersion = 1;

// Dataset files written by a different schema revision.
struct SchemaError : util::Error {
    using util::Error::Error;
};

// Maps Wikipedia header strings into the four topic buckets by keyword.
// Headers matching no keyword fall into the documented default buckets.
class TopicMapper {
public:
    static TopicMapper load(const std::filesystem::path& path);

    // Multi-label, canonical bucket order, never empty.
    std::vector<std::string> map_headers(const std::vector<std::string>& headers) const;

private:
    // bucket -> lowercase keywords
    std::map<std::string, std::vector<std::string>> keywords_;
    std::vector<std::string> default_buckets_;
};

SampleAttributes annotate_attributes(const qgen::QASample& sample, const facts::Fact& fact,
                                     const std::vector<const evidence::EvidenceDocument*>& docs,
                                     const TopicMapper& topics);

// query_id -> relevant doc ids
using Qrels = std::map<std::string, std::set<std::string>>;

// Relevant set = the sample's gold docs (already the union of keypoint
// supporting docs; both facts for multi-hop; the unperturbed fact's docs
// for false-premise). Samples with no docs get no entry.
Qrels build_qrels(const std::vector<qgen::QASample>& samples);

struct ManifestDocument {
    std::string doc_id;
    std::string url;
    std::string language;
    std::optional<util::Date> published;

    bool operator==(const ManifestDocument&) const = default;
};

struct CorpusManifest {
    std::vector<ManifestDocument> documents;  // sorted by doc_id

    bool contains(const std::string& doc_id) const;
    nlohmann::json to_json() const;
    static CorpusManifest from_json(const nlohmann::json& j);

    bool operator==(const CorpusManifest&) const = default;
};

struct BenchmarkDataset {
    std::vector<qgen::QASample> queries;  // sorted by sample_id, traces cleared
    Qrels qrels;
    CorpusManifest manifest;
    util::Date reference_date{};
    nlohmann::json config_snapshot;

    bool operator==(const BenchmarkDataset&) const = default;
};

// Annotates every sample, builds qrels, drops samples with an empty
// relevant set, clears traces, sorts by sample_id, and checks invariants
// (unique ids; every qrels doc resolves in the manifest).
BenchmarkDataset make_dataset(std::vector<qgen::QASample> samples,
                              const std::vector<facts::Fact>& facts,
                              const std::vector<evidence::EvidenceDocument>& docs,
                              const TopicMapper& topics, CorpusManifest manifest,
                              const util::Date& reference_date,
                              nlohmann::json config_snapshot);

// Uniform sample of n queries without replacement under the seed,
// order-normalized by sample_id; qrels restricted to the selection.
BenchmarkDataset sample_dataset(const BenchmarkDataset& pool, std::size_t n, std::uint64_t seed);

// Table-style markdown statistics: valid-premise rows for language,
// freshness, topics and hop counts, plus the false-premise share, all as
// percentages of the total sample count.
std::string stats_markdown(const BenchmarkDataset& dataset);

// benchmark/ directory layout: queries.jsonl, qrels.tsv,
// corpus.manifest.json, config.snapshot.json, stats.md.
void serialize_dataset(const BenchmarkDataset& dataset, const std::filesystem::path& dir);
BenchmarkDataset load_dataset(const std::filesystem::path& dir);

}  // namespace irb::bench
