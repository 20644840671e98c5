#include "irb/bench/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "irb/util/strings.hpp"

namespace irb::bench {

namespace {

std::string percent(double numerator, double denominator) {
    double value = denominator == 0.0 ? 0.0 : 100.0 * numerator / denominator;
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.1f", value);
    return buffer;
}

}  // namespace

TopicMapper TopicMapper::load(const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::parse(util::read_file(path));
    TopicMapper mapper;
    const auto& canonical = topic_buckets();
    for (const auto& [bucket, words] : j.at("buckets").items()) {
        if (std::find(canonical.begin(), canonical.end(), bucket) == canonical.end()) {
            throw util::Error("topic keyword table names unknown bucket: " + bucket);
        }
        for (const auto& word : words) {
            mapper.keywords_[bucket].push_back(util::to_lower(word.get<std::string>()));
        }
    }
    for (const auto& bucket : j.at("default")) {
        std::string b = bucket.get<std::string>();
        if (std::find(canonical.begin(), canonical.end(), b) == canonical.end()) {
            throw util::Error("topic default names unknown bucket: " + b);
        }
        mapper.default_buckets_.push_back(std::move(b));
    }
    if (mapper.default_buckets_.empty()) {
        throw util::Error("topic keyword table has no default bucket");
    }
    return mapper;
}

std::vector<std::string> TopicMapper::map_headers(
    const std::vector<std::string>& headers) const {
    std::set<std::string> hits;
    for (const auto& header : headers) {
        // Padding lets keywords anchor at a word boundary with a leading or
        // trailing space (" war" must not fire inside "awards").
        std::string lower = " " + util::to_lower(header) + " ";
        for (const auto& [bucket, words] : keywords_) {
            for (const auto& word : words) {
                if (lower.find(word) != std::string::npos) {
                    hits.insert(bucket);
                    break;
                }
            }
        }
    }
    std::vector<std::string> out;
    for (const auto& bucket : topic_buckets()) {
        if (hits.count(bucket)) out.push_back(bucket);
    }
    if (out.empty()) out = default_buckets_;
    return out;
}

SampleAttributes annotate_attributes(const qgen::QASample& sample, const facts::Fact& fact,
                                     const std::vector<const evidence::EvidenceDocument*>& docs,
                                     const TopicMapper& topics) {
    SampleAttributes a;
    a.language = Language::english;
    for (const auto* doc : docs) {
        if (doc->language != "en") {
            a.language = Language::cross;
            break;
        }
    }
    a.freshness_year = fact.cohort_year;
    int latest = 0;
    for (const auto* doc : docs) {
        if (doc->published) latest = std::max(latest, doc->published->year);
    }
    if (latest > 0) a.freshness_year = latest;
    a.topics = topics.map_headers(fact.topic_headers);
    a.hops = sample.variant == qgen::Variant::multi_hop ? 2 : 1;
    a.false_premise = sample.variant == qgen::Variant::false_premise;
    return a;
}

Qrels build_qrels(const std::vector<qgen::QASample>& samples) {
    Qrels qrels;
    for (const auto& sample : samples) {
        if (sample.gold_doc_ids.empty()) continue;
        qrels[sample.sample_id] =
            std::set<std::string>(sample.gold_doc_ids.begin(), sample.gold_doc_ids.end());
    }
    return qrels;
}

bool CorpusManifest::contains(const std::string& doc_id) const {
    return std::any_of(documents.begin(), documents.end(),
                       [&](const ManifestDocument& d) { return d.doc_id == doc_id; });
}

nlohmann::json CorpusManifest::to_json() const {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : documents) {
        docs.push_back({{"doc_id", d.doc_id},
                        {"url", d.url},
                        {"language", d.language},
                        {"published", d.published ? nlohmann::json(d.published->iso())
                                                  : nlohmann::json(nullptr)}});
    }
    return {{"schema_version", kSchemaVersion},
            {"document_count", documents.size()},
            {"documents", docs}};
}

CorpusManifest CorpusManifest::from_json(const nlohmann::json& j) {
    CorpusManifest m;
    for (const auto& d : j.at("documents")) {
        ManifestDocument doc;
        doc.doc_id = d.at("doc_id").get<std::string>();
        doc.url = d.at("url").get<std::string>();
        doc.language = d.at("language").get<std::string>();
        if (!d.at("published").is_null()) {
            doc.published = util::parse_iso_date(d.at("published").get<std::string>());
        }
        m.documents.push_back(std::move(doc));
    }
    return m;
}

BenchmarkDataset make_dataset(std::vector<qgen::QASample> samples,
                              const std::vector<facts::Fact>& facts,
                              const std::vector<evidence::EvidenceDocument>& docs,
                              const TopicMapper& topics, CorpusManifest manifest,
                              const util::Date& reference_date,
                              nlohmann::json config_snapshot) {
    std::unordered_map<std::string, const facts::Fact*> fact_index;
    for (const auto& fact : facts) fact_index[fact.fact_id] = &fact;
    std::unordered_map<std::string, const evidence::EvidenceDocument*> doc_index;
    for (const auto& doc : docs) doc_index[doc.doc_id] = &doc;

    for (auto& sample : samples) {
        auto fact = fact_index.find(sample.fact_id);
        if (fact == fact_index.end()) {
            throw util::Error("sample " + sample.sample_id + " references unknown fact " +
                              sample.fact_id);
        }
        std::vector<const evidence::EvidenceDocument*> gold;
        for (const auto& doc_id : sample.gold_doc_ids) {
            auto doc = doc_index.find(doc_id);
            if (doc == doc_index.end()) {
                throw util::Error("sample " + sample.sample_id + " references unknown doc " +
                                  doc_id);
            }
            gold.push_back(doc->second);
        }
        sample.attributes = annotate_attributes(sample, *fact->second, gold, topics);
        sample.generation_trace.clear();
    }

    BenchmarkDataset dataset;
    dataset.qrels = build_qrels(samples);
    for (auto& sample : samples) {
        if (dataset.qrels.count(sample.sample_id)) {
            dataset.queries.push_back(std::move(sample));
        }
    }
    std::sort(dataset.queries.begin(), dataset.queries.end(),
              [](const auto& a, const auto& b) { return a.sample_id < b.sample_id; });
    for (std::size_t i = 1; i < dataset.queries.size(); ++i) {
        if (dataset.queries[i].sample_id == dataset.queries[i - 1].sample_id) {
            throw util::Error("duplicate sample id: " + dataset.queries[i].sample_id);
        }
    }
    for (const auto& [query_id, doc_ids] : dataset.qrels) {
        for (const auto& doc_id : doc_ids) {
            if (!manifest.contains(doc_id)) {
                throw util::Error("qrels doc " + doc_id + " missing from corpus manifest");
            }
        }
    }
    dataset.manifest = std::move(manifest);
    dataset.reference_date = reference_date;
    dataset.config_snapshot = std::move(config_snapshot);
    return dataset;
}

BenchmarkDataset sample_dataset(const BenchmarkDataset& pool, std::size_t n,
                                std::uint64_t seed) {
    if (n > pool.queries.size()) {
        throw util::Error("requested " + std::to_string(n) + " samples from a pool of " +
                          std::to_string(pool.queries.size()));
    }
    std::vector<std::size_t> order(pool.queries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    qgen::Rng rng(seed, "sample_dataset");
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + rng.below(order.size() - i);
        std::swap(order[i], order[j]);
    }

    BenchmarkDataset out;
    for (std::size_t i = 0; i < n; ++i) out.queries.push_back(pool.queries[order[i]]);
    std::sort(out.queries.begin(), out.queries.end(),
              [](const auto& a, const auto& b) { return a.sample_id < b.sample_id; });
    for (const auto& query : out.queries) {
        auto hit = pool.qrels.find(query.sample_id);
        if (hit != pool.qrels.end()) out.qrels[query.sample_id] = hit->second;
    }
    out.manifest = pool.manifest;
    out.reference_date = pool.reference_date;
    out.config_snapshot = pool.config_snapshot;
    return out;
}

std::string stats_markdown(const BenchmarkDataset& dataset) {
    double total = static_cast<double>(dataset.queries.size());
    std::size_t english = 0, cross = 0, single = 0, multi = 0, false_premise = 0;
    std::map<int, std::size_t> freshness;
    std::map<std::string, std::size_t> topic_counts;
    for (const auto& query : dataset.queries) {
        if (query.attributes.false_premise) {
            ++false_premise;
            continue;
        }
        (query.attributes.language == Language::english ? english : cross) += 1;
        ++freshness[query.attributes.freshness_year];
        for (const auto& topic : query.attributes.topics) ++topic_counts[topic];
        (query.attributes.hops == 2 ? multi : single) += 1;
    }

    std::string md;
    md += "# Benchmark statistics\n\n";
    md += "Total samples: " + std::to_string(dataset.queries.size()) + "\n";
    md += "Reference date: " + dataset.reference_date.iso() + "\n\n";
    md += "| Attribute of sample | | Percentage |\n";
    md += "| --- | --- | --- |\n";
    md += "| Valid-premise | Language: English | " + percent(english, total) + " |\n";
    md += "| Valid-premise | Language: Cross | " + percent(cross, total) + " |\n";
    for (const auto& [year, count] : freshness) {
        md += "| Valid-premise | Freshness: " + std::to_string(year) + " | " +
              percent(count, total) + " |\n";
    }
    for (const auto& bucket : topic_buckets()) {
        auto hit = topic_counts.find(bucket);
        std::size_t count = hit == topic_counts.end() ? 0 : hit->second;
        md += "| Valid-premise | Topics: " + bucket + " | " + percent(count, total) + " |\n";
    }
    md += "| Valid-premise | # Hops: Single | " + percent(single, total) + " |\n";
    md += "| Valid-premise | # Hops: Multi | " + percent(multi, total) + " |\n";
    md += "| False-premise | | " + percent(false_premise, total) + " |\n";
    return md;
}

namespace {

nlohmann::json query_to_json(const qgen::QASample& sample) {
    return {{"id", sample.sample_id},
            {"question", sample.question},
            {"answer", sample.answer},
            {"attributes", sample.attributes.to_json()},
            {"variant", qgen::to_string(sample.variant)},
            {"fact_id", sample.fact_id},
            {"fact_ids", sample.fact_ids},
            {"gold_doc_ids", sample.gold_doc_ids}};
}

qgen::QASample query_from_json(const nlohmann::json& j) {
    qgen::QASample sample;
    sample.sample_id = j.at("id").get<std::string>();
    sample.question = j.at("question").get<std::string>();
    sample.answer = j.at("answer").get<std::string>();
    sample.attributes = SampleAttributes::from_json(j.at("attributes"));
    sample.variant = qgen::variant_from_string(j.at("variant").get<std::string>());
    sample.fact_id = j.at("fact_id").get<std::string>();
    sample.fact_ids = j.at("fact_ids").get<std::vector<std::string>>();
    sample.gold_doc_ids = j.at("gold_doc_ids").get<std::vector<std::string>>();
    return sample;
}

}  // namespace

void serialize_dataset(const BenchmarkDataset& dataset, const std::filesystem::path& dir) {
    util::ensure_dir(dir);
    std::vector<nlohmann::json> queries;
    for (const auto& query : dataset.queries) queries.push_back(query_to_json(query));
    util::write_jsonl(dir / "queries.jsonl", queries);

    std::string qrels;
    for (const auto& [query_id, doc_ids] : dataset.qrels) {
        for (const auto& doc_id : doc_ids) {
            qrels += query_id + "\t" + doc_id + "\t1\n";
        }
    }
    util::write_file_atomic(dir / "qrels.tsv", qrels);
    util::write_file_atomic(dir / "corpus.manifest.json", dataset.manifest.to_json().dump(2) + "\n");

    nlohmann::json snapshot = {{"schema_version", kSchemaVersion},
                               {"reference_date", dataset.reference_date.iso()},
                               {"config", dataset.config_snapshot}};
    util::write_file_atomic(dir / "config.snapshot.json", snapshot.dump(2) + "\n");
    util::write_file_atomic(dir / "stats.md", stats_markdown(dataset));
}

BenchmarkDataset load_dataset(const std::filesystem::path& dir) {
    nlohmann::json snapshot = nlohmann::json::parse(util::read_file(dir / "config.snapshot.json"));
    int version = snapshot.value("schema_version", -1);
    if (version != kSchemaVersion) {
        throw SchemaError("dataset schema version " + std::to_string(version) + ", expected " +
                          std::to_string(kSchemaVersion) + " (" + (dir / "config.snapshot.json").string() + ")");
    }

    BenchmarkDataset dataset;
    dataset.reference_date = *util::parse_iso_date(snapshot.at("reference_date").get<std::string>());
    dataset.config_snapshot = snapshot.at("config");

    nlohmann::json manifest = nlohmann::json::parse(util::read_file(dir / "corpus.manifest.json"));
    int manifest_version = manifest.value("schema_version", -1);
    if (manifest_version != kSchemaVersion) {
        throw SchemaError("corpus manifest schema version " + std::to_string(manifest_version) +
                          ", expected " + std::to_string(kSchemaVersion));
    }
    dataset.manifest = CorpusManifest::from_json(manifest);

    for (const auto& line : util::read_jsonl(dir / "queries.jsonl")) {
        dataset.queries.push_back(query_from_json(line));
    }
    for (const auto& line : util::split(util::read_file(dir / "qrels.tsv"), '\n')) {
        if (util::trim(line).empty()) continue;
        auto cells = util::split(line, '\t');
        if (cells.size() != 3 || cells[2] != "1") {
            throw util::Error("malformed qrels line: " + line);
        }
        dataset.qrels[cells[0]].insert(cells[1]);
    }
    return dataset;
}

}  // namespace irb::bench
