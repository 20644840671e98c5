#include "irb/cli/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "irb/bench/bench.hpp"
#include "irb/evidence/fetch.hpp"
#include "irb/evidence/store.hpp"
#include "irb/facts/facts.hpp"
#include "irb/geneval/eval.hpp"
#include "irb/ingest/citing.hpp"
#include "irb/ingest/serialize.hpp"
#include "irb/ingest/syntax.hpp"
#include "irb/ingest/wikitext.hpp"
#include "irb/llm/client.hpp"
#include "irb/llm/gateway.hpp"
#include "irb/llm/mock.hpp"
#include "irb/llm/template.hpp"
#include "irb/qgen/question.hpp"
#include "irb/retrieval/run.hpp"
#include "irb/util/hash.hpp"

namespace irb::cli {

namespace stdfs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// PipelineConfig
// ---------------------------------------------------------------------------

namespace {

stdfs::path resolve_against(const stdfs::path& base, const stdfs::path& p) {
    if (p.empty() || p.is_absolute()) return p;
    return (base / p).lexically_normal();
}

util::Date parse_iso_or_throw(const std::string& text, const std::string& what) {
    auto date = util::parse_iso_date(text);
    if (!date) throw util::Error(what + ": invalid date \"" + text + "\" (expected YYYY-MM-DD)");
    return *date;
}

std::string now_utc_iso() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

PipelineConfig PipelineConfig::load(const stdfs::path& path) {
    PipelineConfig c;
    c.config_dir = stdfs::absolute(path).parent_path();
    json j;
    try {
        j = json::parse(util::read_file(path));
    } catch (const json::exception& e) {
        throw util::Error("config " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw util::Error("config " + path.string() + ": expected a JSON object");

    auto get_path = [&](const char* key, stdfs::path& into) {
        if (j.contains(key)) into = j.at(key).get<std::string>();
    };
    get_path("workspace", c.workspace);
    get_path("articles_dir", c.articles_dir);
    get_path("prompts_dir", c.prompts_dir);
    get_path("data_dir", c.data_dir);

    if (j.contains("reference_date"))
        c.reference_date = parse_iso_or_throw(j.at("reference_date").get<std::string>(), "config reference_date");
    if (j.contains("coverage_threshold")) c.coverage_threshold = j.at("coverage_threshold").get<double>();
    if (j.contains("k")) c.k = j.at("k").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("benchmark_size")) c.benchmark_size = j.at("benchmark_size").get<std::size_t>();
    if (j.contains("top_m")) c.top_m = j.at("top_m").get<std::size_t>();
    if (j.contains("bm25")) {
        const json& b = j.at("bm25");
        if (b.contains("k1")) c.bm25.k1 = b.at("k1").get<double>();
        if (b.contains("b")) c.bm25.b = b.at("b").get<double>();
    }
    if (j.contains("tagger")) c.tagger = j.at("tagger").get<std::string>();
    if (j.contains("ner")) c.ner = j.at("ner").get<std::string>();
    if (j.contains("retriever")) c.retriever = j.at("retriever").get<std::string>();
    if (j.contains("reranker")) c.reranker = j.at("reranker").get<std::string>();

    if (j.contains("llm")) {
        const json& l = j.at("llm");
        if (l.contains("provider")) c.provider = l.at("provider").get<std::string>();
        if (l.contains("endpoint")) c.endpoint = l.at("endpoint").get<std::string>();
        if (l.contains("api_key_env")) c.api_key_env = l.at("api_key_env").get<std::string>();
        if (l.contains("mock_fixtures")) c.mock_fixtures = l.at("mock_fixtures").get<std::string>();
        if (l.contains("max_attempts")) c.max_attempts = l.at("max_attempts").get<int>();
        if (l.contains("backoff_initial_ms")) c.backoff_initial_ms = l.at("backoff_initial_ms").get<int>();
        if (l.contains("pipeline_model")) c.pipeline_model = l.at("pipeline_model").get<std::string>();
        if (l.contains("generator_model")) c.generator_model = l.at("generator_model").get<std::string>();
        if (l.contains("judge_models"))
            c.judge_models = l.at("judge_models").get<std::vector<std::string>>();
    }
    if (j.contains("fetch")) {
        const json& f = j.at("fetch");
        if (f.contains("concurrency")) c.fetch_concurrency = f.at("concurrency").get<int>();
        if (f.contains("politeness_ms")) c.politeness_ms = f.at("politeness_ms").get<int>();
        if (f.contains("user_agent")) c.user_agent = f.at("user_agent").get<std::string>();
        if (f.contains("fixture_web_root"))
            c.fixture_web_root = f.at("fixture_web_root").get<std::string>();
    }
    if (j.contains("eval_mode")) c.eval_mode = j.at("eval_mode").get<std::string>();

    if (c.judge_models.empty()) throw util::Error("config: llm.judge_models must not be empty");
    if (c.fetch_concurrency < 1) throw util::Error("config: fetch.concurrency must be >= 1");
    if (c.k < 1) throw util::Error("config: k must be >= 1");
    if (c.eval_mode != "rag" && c.eval_mode != "closed-book" && c.eval_mode != "both")
        throw util::Error("config: eval_mode must be rag, closed-book, or both");

    c.workspace = resolve_against(c.config_dir, c.workspace);
    c.articles_dir = resolve_against(c.config_dir, c.articles_dir);
    c.prompts_dir = resolve_against(c.config_dir, c.prompts_dir);
    c.data_dir = resolve_against(c.config_dir, c.data_dir);
    c.mock_fixtures = resolve_against(c.config_dir, c.mock_fixtures);
    c.fixture_web_root = resolve_against(c.config_dir, c.fixture_web_root);
    return c;
}

json PipelineConfig::effective() const {
    // Paths are recorded relative to the config directory, so the snapshot
    // embedded in a published dataset carries no machine-specific absolute
    // paths and two builds of the same tree snapshot identically.
    auto rel = [&](const stdfs::path& p) {
        if (p.empty() || config_dir.empty()) return p.generic_string();
        return p.lexically_proximate(config_dir).generic_string();
    };
    return json{
        {"workspace", rel(workspace)},
        {"articles_dir", rel(articles_dir)},
        {"prompts_dir", rel(prompts_dir)},
        {"data_dir", rel(data_dir)},
        {"reference_date", reference_date.iso()},
        {"coverage_threshold", coverage_threshold},
        {"k", k},
        {"seed", seed},
        {"benchmark_size", benchmark_size},
        {"top_m", top_m},
        {"bm25", {{"k1", bm25.k1}, {"b", bm25.b}}},
        {"tagger", tagger},
        {"ner", ner},
        {"retriever", retriever},
        {"reranker", reranker},
        {"llm",
         {{"provider", provider},
          {"endpoint", endpoint},
          {"api_key_env", api_key_env},
          {"mock_fixtures", rel(mock_fixtures)},
          {"max_attempts", max_attempts},
          {"backoff_initial_ms", backoff_initial_ms},
          {"pipeline_model", pipeline_model},
          {"generator_model", generator_model},
          {"judge_models", judge_models}}},
        {"fetch",
         {{"concurrency", fetch_concurrency},
          {"politeness_ms", politeness_ms},
          {"user_agent", user_agent},
          {"fixture_web_root", rel(fixture_web_root)}}},
        {"eval_mode", eval_mode},
    };
}

// ---------------------------------------------------------------------------
// WorkspaceLock
// ---------------------------------------------------------------------------

WorkspaceLock::WorkspaceLock(const stdfs::path& workspace) {
    util::ensure_dir(workspace);
    path_ = workspace / ".lock";
    int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        throw util::Error("another irb-forge run holds the lock at " + path_.string() +
                          "; remove the file if no run is active");
    }
    std::string pid = std::to_string(::getpid()) + "\n";
    ssize_t written = ::write(fd, pid.data(), pid.size());
    (void)written;
    ::close(fd);
}

WorkspaceLock::~WorkspaceLock() {
    std::error_code ec;
    stdfs::remove(path_, ec);
}

// ---------------------------------------------------------------------------
// Pipeline plumbing
// ---------------------------------------------------------------------------

Pipeline::Pipeline(PipelineConfig config, bool dry_run)
    : config_(std::move(config)), dry_run_(dry_run) {
    util::ensure_dir(config_.workspace);
}

const std::vector<std::string>& Pipeline::subcommands() {
    static const std::vector<std::string> kNames = {
        "ingest",         "fetch", "facts",          "generate",        "assemble",
        "index",          "eval-retrieval", "eval-generation", "report"};
    return kNames;
}

void Pipeline::log(const std::string& stage, const std::string& event, const std::string& detail) {
    json record{{"ts", now_utc_iso()}, {"stage", stage}, {"event", event}, {"detail", detail}};
    util::append_jsonl(config_.log_path(), record);
    std::cerr << "[irb-forge] " << stage << ": " << event;
    if (!detail.empty()) std::cerr << " (" << detail << ")";
    std::cerr << "\n";
}

void Pipeline::require(const stdfs::path& path, const std::string& producer) const {
    if (!stdfs::exists(path)) {
        throw DependencyError("missing " + path.string() + "; run `irb-forge " + producer +
                              "` first");
    }
}

std::string Pipeline::fingerprint(const std::vector<stdfs::path>& inputs) const {
    // Configuration participates in the fingerprint, so changing a knob
    // re-runs every stage that depends on it; over-invalidation is the safe
    // direction for a reproducible benchmark.
    std::string blob = config_.effective().dump();
    std::vector<stdfs::path> files;
    for (const auto& input : inputs) {
        std::error_code ec;
        if (stdfs::is_directory(input, ec)) {
            for (const auto& entry : stdfs::recursive_directory_iterator(input, ec)) {
                if (entry.is_regular_file()) files.push_back(entry.path());
            }
        } else if (stdfs::is_regular_file(input, ec)) {
            files.push_back(input);
        } else {
            blob += "\nmissing:" + input.string();
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        blob += "\n" + file.string() + ":" + util::sha256_hex(util::read_file(file));
    }
    return util::sha256_hex(blob);
}

bool Pipeline::stage(const std::string& name, const std::vector<stdfs::path>& inputs,
                     const std::vector<stdfs::path>& outputs,
                     const std::function<void()>& body) {
    const std::string fp = fingerprint(inputs);
    const stdfs::path marker = config_.workspace / ".stage" / (name + ".json");

    bool up_to_date = false;
    if (auto content = util::read_file_if_exists(marker)) {
        try {
            up_to_date = json::parse(*content).value("fingerprint", "") == fp;
        } catch (const json::exception&) {
            up_to_date = false;
        }
    }
    if (up_to_date) {
        for (const auto& out : outputs) {
            if (!stdfs::exists(out)) {
                up_to_date = false;
                break;
            }
        }
    }

    if (dry_run_) {
        std::cerr << "[irb-forge] plan: " << name << " — "
                  << (up_to_date ? "up to date, would skip" : "would run") << "\n";
        return false;
    }
    if (up_to_date) {
        log(name, "skip", "outputs current");
        return false;
    }

    log(name, "start", "");
    try {
        body();
    } catch (...) {
        log(name, "error", "stage failed; marker not written");
        throw;
    }
    util::ensure_dir(marker.parent_path());
    json marker_json{{"fingerprint", fp}, {"completed", now_utc_iso()}};
    util::write_file_atomic(marker, marker_json.dump(2) + "\n");
    log(name, "done", "");
    executed_ = true;
    return true;
}

bool Pipeline::run(const std::string& subcommand) {
    executed_ = false;
    if (subcommand == "ingest") run_ingest();
    else if (subcommand == "fetch") run_fetch();
    else if (subcommand == "facts") run_facts();
    else if (subcommand == "generate") run_generate();
    else if (subcommand == "assemble") run_assemble();
    else if (subcommand == "index") run_index();
    else if (subcommand == "eval-retrieval") run_eval_retrieval();
    else if (subcommand == "eval-generation") run_eval_generation();
    else if (subcommand == "report") run_report();
    else throw util::Error("unknown subcommand: " + subcommand);
    return executed_;
}

// ---------------------------------------------------------------------------
// Model access
// ---------------------------------------------------------------------------

namespace {

std::unique_ptr<llm::LlmClient> make_client(const PipelineConfig& c) {
    if (c.provider == "mock") {
        if (!c.mock_fixtures.empty()) {
            return std::make_unique<llm::MockLlmClient>(
                llm::MockLlmClient::from_file(c.mock_fixtures));
        }
        return std::make_unique<llm::MockLlmClient>();
    }
    if (c.provider == "http") {
        if (c.endpoint.empty())
            throw util::Error("config: llm.endpoint is required when llm.provider is \"http\"");
        return std::make_unique<llm::HttpLlmClient>(c.endpoint, c.api_key_env);
    }
    throw util::Error("config: unknown llm.provider \"" + c.provider +
                      "\"; expected \"mock\" or \"http\"");
}

llm::GatewayConfig gateway_config(const PipelineConfig& c, const std::string& model_id) {
    llm::GatewayConfig g;
    g.model_id = model_id;
    g.max_attempts = c.max_attempts;
    g.backoff_initial_ms = c.backoff_initial_ms;
    g.ledger_path = c.ledger_path();
    return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// ingest: wikitext articles -> syntactically complete citing sentences
// ---------------------------------------------------------------------------

namespace {

struct ArticleFile {
    ingest::ArticleMeta meta;
    stdfs::path file;
};

// articles_dir/manifest.json lists the dump slice:
//   [{"page_id", "title", "file", "last_updated", "cohort_year"}, ...]
// Without a manifest, every *.wiki file is taken with defaults derived from
// the file name and the reference date.
std::vector<ArticleFile> list_articles(const stdfs::path& dir, const util::Date& reference_date) {
    std::vector<ArticleFile> out;
    const stdfs::path manifest = dir / "manifest.json";
    if (stdfs::exists(manifest)) {
        json j;
        try {
            j = json::parse(util::read_file(manifest));
        } catch (const json::exception& e) {
            throw util::Error("articles manifest " + manifest.string() + ": " + e.what());
        }
        for (const json& row : j) {
            ArticleFile a;
            a.meta.page_id = row.at("page_id").get<std::string>();
            a.meta.title = row.at("title").get<std::string>();
            a.meta.last_updated =
                parse_iso_or_throw(row.at("last_updated").get<std::string>(), "articles manifest last_updated");
            a.meta.cohort_year = row.at("cohort_year").get<int>();
            a.file = dir / row.at("file").get<std::string>();
            out.push_back(std::move(a));
        }
        return out;
    }
    std::vector<stdfs::path> files;
    std::error_code ec;
    for (const auto& entry : stdfs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".wiki")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        ArticleFile a;
        a.meta.page_id = file.stem().string();
        a.meta.title = file.stem().string();
        a.meta.last_updated = reference_date;
        a.meta.cohort_year = reference_date.year;
        a.file = file;
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace

void Pipeline::run_ingest() {
    if (!stdfs::exists(config_.articles_dir))
        throw DependencyError("missing " + config_.articles_dir.string() +
                              "; point articles_dir at a directory of wikitext articles");
    stage("ingest", {config_.articles_dir}, {config_.citing_path()}, [&] {
        auto tagger = ingest::make_tagger(config_.tagger);
        ingest::RuleSentenceSplitter splitter;
        std::vector<json> records;
        std::size_t article_count = 0;
        for (const auto& entry : list_articles(config_.articles_dir, config_.reference_date)) {
            ingest::ArticleSource article =
                ingest::parse_article(util::read_file(entry.file), entry.meta);
            for (const auto& warning : article.parse_warnings)
                log("ingest", "parse_warning", entry.meta.page_id + ": " + warning);
            auto sentences = ingest::extract_citing_sentences(article, splitter);
            sentences = ingest::filter_syntactic_completeness(std::move(sentences), *tagger);
            for (const auto& sentence : sentences) records.push_back(ingest::to_json(sentence));
            ++article_count;
        }
        util::write_jsonl(config_.citing_path(), records);
        log("ingest", "summary", std::to_string(article_count) + " articles, " +
                                     std::to_string(records.size()) + " citing sentences");
    });
}

// ---------------------------------------------------------------------------
// fetch: cited URLs -> evidence documents and chunks
// ---------------------------------------------------------------------------

void Pipeline::run_fetch() {
    require(config_.citing_path(), "ingest");
    const stdfs::path docs_file = config_.corpus_dir() / "docs.jsonl";
    const stdfs::path chunks_file = config_.corpus_dir() / "chunks.jsonl";
    stage("fetch", {config_.citing_path()}, {docs_file, chunks_file}, [&] {
        evidence::CorpusStore store(config_.corpus_dir());
        store.load();

        std::vector<std::string> urls;
        std::set<std::string> seen;
        for (const json& line : util::read_jsonl(config_.citing_path())) {
            const ingest::CitingSentence sentence = ingest::citing_sentence_from_json(line);
            for (const auto& segment : sentence.segments) {
                for (const auto& url : segment.second.urls) {
                    if (seen.insert(url).second) urls.push_back(url);
                }
            }
        }

        std::unique_ptr<evidence::Fetcher> fetcher;
        if (!config_.fixture_web_root.empty())
            fetcher = std::make_unique<evidence::FixtureFetcher>(config_.fixture_web_root);
        else
            fetcher = std::make_unique<evidence::HttpFetcher>(config_.user_agent);

        evidence::TextDensityExtractor extractor;
        evidence::StopwordLanguageDetector detector;

        std::mutex store_mutex;
        std::atomic<std::size_t> cache_hits{0};
        std::atomic<std::size_t> fetched{0};
        auto process = [&](const std::string& url) {
            std::optional<evidence::RawFetch> raw;
            {
                std::lock_guard<std::mutex> guard(store_mutex);
                raw = store.cache_get(url);
            }
            if (raw) {
                ++cache_hits;
            } else {
                raw = fetcher->get(url);
                if (config_.politeness_ms > 0)
                    std::this_thread::sleep_for(std::chrono::milliseconds(config_.politeness_ms));
                ++fetched;
                std::lock_guard<std::mutex> guard(store_mutex);
                store.cache_put(url, *raw);
            }
            evidence::EvidenceDocument doc =
                evidence::build_document(url, *raw, extractor, detector);
            std::vector<evidence::CorpusChunk> chunks;
            if (doc.fetch_status == evidence::FetchStatus::ok)
                chunks = evidence::chunk_document(doc);
            std::lock_guard<std::mutex> guard(store_mutex);
            store.upsert(doc, chunks);
        };

        if (config_.fetch_concurrency <= 1 || urls.size() <= 1) {
            for (const auto& url : urls) process(url);
        } else {
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                while (true) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= urls.size()) break;
                    process(urls[i]);
                }
            };
            std::size_t n_threads =
                std::min<std::size_t>(static_cast<std::size_t>(config_.fetch_concurrency),
                                      urls.size());
            std::vector<std::thread> pool;
            pool.reserve(n_threads);
            for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }

        store.save();
        log("fetch", "summary", std::to_string(urls.size()) + " urls (" +
                                    std::to_string(cache_hits.load()) + " cached, " +
                                    std::to_string(fetched.load()) + " fetched)");
    });
}

// ---------------------------------------------------------------------------
// facts: citing sentences + evidence -> grounded, decontextualized facts
// ---------------------------------------------------------------------------

void Pipeline::run_facts() {
    require(config_.citing_path(), "ingest");
    const stdfs::path docs_file = config_.corpus_dir() / "docs.jsonl";
    require(docs_file, "fetch");
    stage("facts", {config_.citing_path(), docs_file, config_.prompts_dir},
          {config_.facts_path(), config_.facts_rejects_path()}, [&] {
              evidence::CorpusStore store(config_.corpus_dir());
              store.load();
              llm::TemplateLibrary templates(config_.prompts_dir);
              auto client = make_client(config_);
              llm::Gateway gateway(*client, gateway_config(config_, config_.pipeline_model));

              std::vector<json> fact_records;
              std::vector<json> reject_records;
              for (const json& line : util::read_jsonl(config_.citing_path())) {
                  const ingest::CitingSentence sentence = ingest::citing_sentence_from_json(line);
                  auto decon = facts::decontextualize(sentence, gateway,
                                                      templates.get("keypoints"));
                  if (decon.reject) {
                      reject_records.push_back(decon.reject->to_json());
                      continue;
                  }
                  auto assembled = facts::assemble_fact(sentence, std::move(decon.keypoints),
                                                        store, gateway,
                                                        templates.get("groundedness"));
                  if (assembled.reject) reject_records.push_back(assembled.reject->to_json());
                  if (assembled.fact) fact_records.push_back(assembled.fact->to_json());
              }
              util::write_jsonl(config_.facts_path(), fact_records);
              util::write_jsonl(config_.facts_rejects_path(), reject_records);
              log("facts", "summary", std::to_string(fact_records.size()) + " facts, " +
                                          std::to_string(reject_records.size()) + " rejects");
          });
}

// ---------------------------------------------------------------------------
// generate: facts -> QA samples (single-hop, multi-hop, false-premise)
// ---------------------------------------------------------------------------

void Pipeline::run_generate() {
    require(config_.facts_path(), "facts");
    stage("generate", {config_.facts_path(), config_.prompts_dir, config_.data_dir},
          {config_.samples_path(), config_.qgen_rejects_path()}, [&] {
              std::vector<facts::Fact> all_facts;
              for (const json& line : util::read_jsonl(config_.facts_path()))
                  all_facts.push_back(facts::Fact::from_json(line));

              llm::TemplateLibrary templates(config_.prompts_dir);
              auto client = make_client(config_);
              llm::Gateway gateway(*client, gateway_config(config_, config_.pipeline_model));
              qgen::TransformTables tables = qgen::TransformTables::load(config_.data_dir);
              auto ner = qgen::make_ner(config_.ner);

              qgen::GenerationConfig gen_config;
              gen_config.coverage_threshold = config_.coverage_threshold;
              gen_config.reference_date = config_.reference_date;
              gen_config.seed = config_.seed;

              qgen::GenerationResult result =
                  qgen::generate_samples(all_facts, gateway, templates, tables, *ner, gen_config);
              for (const auto& warning : result.warnings) log("generate", "warning", warning);

              std::vector<json> sample_records;
              for (const auto& sample : result.samples) sample_records.push_back(sample.to_json());
              std::vector<json> reject_records;
              for (const auto& reject : result.rejects) reject_records.push_back(reject.to_json());
              util::write_jsonl(config_.samples_path(), sample_records);
              util::write_jsonl(config_.qgen_rejects_path(), reject_records);
              log("generate", "summary", std::to_string(sample_records.size()) + " samples, " +
                                             std::to_string(reject_records.size()) + " rejects");
          });
}

// ---------------------------------------------------------------------------
// assemble: samples -> versioned benchmark dataset
// ---------------------------------------------------------------------------

void Pipeline::run_assemble() {
    require(config_.samples_path(), "generate");
    require(config_.facts_path(), "facts");
    const stdfs::path docs_file = config_.corpus_dir() / "docs.jsonl";
    require(docs_file, "fetch");
    const stdfs::path topic_file = config_.data_dir / "topic_keywords.json";
    stage("assemble", {config_.samples_path(), config_.facts_path(), docs_file, topic_file},
          {config_.benchmark_dir() / "queries.jsonl", config_.benchmark_dir() / "qrels.tsv",
           config_.benchmark_dir() / "corpus.manifest.json",
           config_.benchmark_dir() / "config.snapshot.json",
           config_.benchmark_dir() / "stats.md"},
          [&] {
              std::vector<qgen::QASample> samples;
              for (const json& line : util::read_jsonl(config_.samples_path()))
                  samples.push_back(qgen::QASample::from_json(line));
              std::vector<facts::Fact> all_facts;
              for (const json& line : util::read_jsonl(config_.facts_path()))
                  all_facts.push_back(facts::Fact::from_json(line));

              evidence::CorpusStore store(config_.corpus_dir());
              store.load();
              const std::vector<evidence::EvidenceDocument> docs = store.documents();

              bench::TopicMapper topics = bench::TopicMapper::load(topic_file);
              bench::CorpusManifest manifest;
              for (const auto& doc : docs) {
                  if (doc.fetch_status != evidence::FetchStatus::ok) continue;
                  manifest.documents.push_back(bench::ManifestDocument{
                      doc.doc_id, doc.url, doc.language, doc.published});
              }

              bench::BenchmarkDataset pool =
                  bench::make_dataset(std::move(samples), all_facts, docs, topics,
                                      std::move(manifest), config_.reference_date,
                                      config_.effective());
              bench::BenchmarkDataset dataset =
                  config_.benchmark_size > 0
                      ? bench::sample_dataset(pool, config_.benchmark_size, config_.seed)
                      : std::move(pool);
              bench::serialize_dataset(dataset, config_.benchmark_dir());
              log("assemble", "summary",
                  std::to_string(dataset.queries.size()) + " queries, " +
                      std::to_string(dataset.manifest.documents.size()) + " corpus documents");
          });
}

// ---------------------------------------------------------------------------
// index: evidence chunks -> BM25 index
// ---------------------------------------------------------------------------

void Pipeline::run_index() {
    const stdfs::path chunks_file = config_.corpus_dir() / "chunks.jsonl";
    require(chunks_file, "fetch");
    stage("index", {chunks_file}, {config_.index_path()}, [&] {
        evidence::CorpusStore store(config_.corpus_dir());
        store.load();
        retrieval::Bm25Index index = retrieval::Bm25Index::build(store.chunks(), config_.bm25);
        util::ensure_dir(config_.index_path().parent_path());
        index.save(config_.index_path());
        log("index", "summary", std::to_string(store.chunks().size()) + " chunks indexed");
    });
}

// ---------------------------------------------------------------------------
// eval-retrieval: benchmark + index -> TREC run + nDCG slices
// ---------------------------------------------------------------------------

void Pipeline::run_eval_retrieval() {
    require(config_.benchmark_dir() / "queries.jsonl", "assemble");
    require(config_.index_path(), "index");
    stage("eval-retrieval", {config_.benchmark_dir(), config_.index_path()},
          {config_.run_path(), config_.retrieval_report_json(), config_.retrieval_report_md()},
          [&] {
              bench::BenchmarkDataset dataset = bench::load_dataset(config_.benchmark_dir());
              retrieval::Bm25Index index = retrieval::Bm25Index::load(config_.index_path());
              auto retriever = retrieval::make_retriever(config_.retriever, index, config_.top_m);
              auto reranker = retrieval::make_reranker(config_.reranker);
              retrieval::RetrievalRun run =
                  retrieval::run_retrieval(dataset, *retriever, *reranker, config_.k);
              util::ensure_dir(config_.run_path().parent_path());
              retrieval::write_trec_run(run, config_.run_path());

              retrieval::ScoredSlices slices =
                  retrieval::score_run(run, dataset.qrels, dataset.queries);
              util::write_file_atomic(config_.retrieval_report_json(),
                                      retrieval::slices_to_json(slices).dump(2) + "\n");
              util::write_file_atomic(config_.retrieval_report_md(),
                                      retrieval::slices_markdown(slices, run.retriever_id));
              log("eval-retrieval", "summary",
                  std::to_string(run.rankings.size()) + " queries ranked at k=" +
                      std::to_string(config_.k));
          });
}

// ---------------------------------------------------------------------------
// eval-generation: benchmark + run -> answers + grades
// ---------------------------------------------------------------------------

void Pipeline::run_eval_generation() {
    require(config_.benchmark_dir() / "queries.jsonl", "assemble");
    const bool wants_rag = config_.eval_mode == "rag" || config_.eval_mode == "both";
    const bool wants_closed = config_.eval_mode == "closed-book" || config_.eval_mode == "both";
    if (wants_rag) require(config_.run_path(), "eval-retrieval");
    const stdfs::path docs_file = config_.corpus_dir() / "docs.jsonl";
    if (wants_rag) require(docs_file, "fetch");

    std::vector<stdfs::path> inputs = {config_.benchmark_dir(), config_.prompts_dir};
    if (wants_rag) inputs.push_back(config_.run_path());
    stage("eval-generation", inputs, {config_.answers_path(), config_.grades_path()}, [&] {
        bench::BenchmarkDataset dataset = bench::load_dataset(config_.benchmark_dir());
        evidence::CorpusStore store(config_.corpus_dir());
        if (wants_rag) store.load();
        retrieval::RetrievalRun run;
        if (wants_rag) run = retrieval::load_trec_run(config_.run_path());

        llm::TemplateLibrary templates(config_.prompts_dir);
        auto client = make_client(config_);
        llm::Gateway generator(*client, gateway_config(config_, config_.generator_model));
        std::vector<std::unique_ptr<llm::Gateway>> judge_gateways;
        for (const auto& judge_model : config_.judge_models) {
            judge_gateways.push_back(
                std::make_unique<llm::Gateway>(*client, gateway_config(config_, judge_model)));
        }
        std::vector<llm::Gateway*> judges;
        for (auto& g : judge_gateways) judges.push_back(g.get());

        std::vector<json> answer_records;
        std::vector<json> grade_records;
        auto evaluate_mode = [&](const qgen::QASample& query, geneval::AnswerMode mode) {
            std::vector<const evidence::EvidenceDocument*> contexts;
            if (mode == geneval::AnswerMode::rag) {
                auto ranking = run.rankings.find(query.sample_id);
                if (ranking != run.rankings.end()) {
                    int used = 0;
                    for (const auto& hit : ranking->second) {
                        if (used >= config_.k) break;
                        const evidence::EvidenceDocument* doc = store.find(hit.doc_id);
                        if (doc == nullptr)
                            throw util::Error("run references unknown document " + hit.doc_id);
                        contexts.push_back(doc);
                        ++used;
                    }
                }
            }
            geneval::AnswerRecord answer =
                geneval::answer_query(query.sample_id, query.question, mode, contexts,
                                      config_.reference_date, generator, templates);
            answer_records.push_back(answer.to_json());
            geneval::Grade grade;
            if (answer.failed) {
                grade.query_id = query.sample_id;
                grade.failed = true;
            } else {
                grade = geneval::grade_answer(query.sample_id, query.question, answer.answer_text,
                                              query.answer, judges, templates);
            }
            json grade_json = grade.to_json();
            grade_json["mode"] = geneval::to_string(mode);
            grade_records.push_back(std::move(grade_json));
        };

        for (const auto& query : dataset.queries) {
            if (wants_rag) evaluate_mode(query, geneval::AnswerMode::rag);
            if (wants_closed) evaluate_mode(query, geneval::AnswerMode::closed_book);
        }
        util::write_jsonl(config_.answers_path(), answer_records);
        util::write_jsonl(config_.grades_path(), grade_records);
        log("eval-generation", "summary",
            std::to_string(answer_records.size()) + " answers graded (" + config_.eval_mode +
                ")");
    });
}

// ---------------------------------------------------------------------------
// report: grades + run -> sliced report with interplay taxonomy
// ---------------------------------------------------------------------------

void Pipeline::run_report() {
    require(config_.benchmark_dir() / "queries.jsonl", "assemble");
    require(config_.run_path(), "eval-retrieval");
    require(config_.answers_path(), "eval-generation");
    require(config_.grades_path(), "eval-generation");
    stage("report",
          {config_.benchmark_dir(), config_.run_path(), config_.answers_path(),
           config_.grades_path()},
          {config_.report_json_path(), config_.report_md_path()}, [&] {
              bench::BenchmarkDataset dataset = bench::load_dataset(config_.benchmark_dir());
              retrieval::RetrievalRun run = retrieval::load_trec_run(config_.run_path());

              std::vector<geneval::Grade> rag_grades;
              std::vector<geneval::Grade> closed_grades;
              for (const json& line : util::read_jsonl(config_.grades_path())) {
                  const std::string mode = line.value("mode", "rag");
                  geneval::Grade grade = geneval::Grade::from_json(line);
                  if (geneval::answer_mode_from_string(mode) == geneval::AnswerMode::rag)
                      rag_grades.push_back(std::move(grade));
                  else
                      closed_grades.push_back(std::move(grade));
              }
              std::size_t failed_answers = 0;
              for (const json& line : util::read_jsonl(config_.answers_path())) {
                  if (line.value("failed", false)) ++failed_answers;
              }

              geneval::EvalReport report = geneval::aggregate_report(
                  rag_grades, closed_grades, run, dataset.qrels, dataset.queries, config_.k,
                  config_.generator_model, failed_answers);
              util::write_file_atomic(config_.report_json_path(),
                                      report.to_json().dump(2) + "\n");
              util::write_file_atomic(config_.report_md_path(), report.markdown());
              log("report", "summary",
                  "report over " + std::to_string(dataset.queries.size()) + " queries");
          });
}

}  // namespace irb::cli
