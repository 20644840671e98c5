#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "irb/retrieval/bm25.hpp"
#include "irb/util/dates.hpp"
#include "irb/util/fs.hpp"

namespace irb::cli {

// A stage was invoked before its prerequisite produced the needed files.
struct DependencyError : util::Error {
    using util::Error::Error;
};

// The single source of configuration: a JSON document, with CLI flags
// layered on top. Relative paths resolve against the config file's
// directory.
struct PipelineConfig {
    std::filesystem::path config_dir;

    // paths
    std::filesystem::path workspace = "workspace";
    std::filesystem::path articles_dir = "articles";
    std::filesystem::path prompts_dir = "prompts";
    std::filesystem::path data_dir = "data";

    // pipeline parameters
    util::Date reference_date{2025, 9, 29};
    double coverage_threshold = 0.8;
    int k = 5;
    std::uint64_t seed = 17;
    std::size_t benchmark_size = 0;  // 0 keeps the whole pool
    std::size_t top_m = retrieval::kDefaultTopM;
    retrieval::Bm25Params bm25;
    std::string tagger = "heuristic";
    std::string ner = "heuristic";
    std::string retriever = "bm25";
    std::string reranker = "identity";

    // model access
    std::string provider = "mock";  // "mock" | "http"
    std::string endpoint;
    std::string api_key_env = "IRB_API_KEY";
    std::filesystem::path mock_fixtures;  // optional fixture-rule file
    int max_attempts = 4;
    int backoff_initial_ms = 250;
    std::string pipeline_model = "mock-model";    // keypoints .. refinement
    std::string generator_model = "mock-model";   // RAG / closed-book answering
    std::vector<std::string> judge_models = {"mock-judge-a", "mock-judge-b"};

    // fetching
    int fetch_concurrency = 1;
    int politeness_ms = 0;
    std::string user_agent = "irb-forge/0.1";
    std::filesystem::path fixture_web_root;  // when set, serve the web from disk

    // evaluation
    std::string eval_mode = "both";  // rag | closed-book | both

    static PipelineConfig load(const std::filesystem::path& path);

    // Canonical JSON of every effective setting; embedded verbatim in the
    // dataset snapshot. Recompute after applying flag overrides.
    nlohmann::json effective() const;

    // Workspace artifact paths.
    std::filesystem::path citing_path() const { return workspace / "citing.jsonl"; }
    std::filesystem::path corpus_dir() const { return workspace / "corpus"; }
    std::filesystem::path facts_path() const { return workspace / "facts.jsonl"; }
    std::filesystem::path facts_rejects_path() const { return workspace / "facts.rejects.jsonl"; }
    std::filesystem::path samples_path() const { return workspace / "samples.raw.jsonl"; }
    std::filesystem::path qgen_rejects_path() const { return workspace / "qgen.rejects.jsonl"; }
    std::filesystem::path benchmark_dir() const { return workspace / "benchmark"; }
    std::filesystem::path index_path() const { return workspace / "index" / "bm25.json"; }
    std::filesystem::path run_path() const {
        return workspace / "runs" / (retriever + ".trec");
    }
    std::filesystem::path retrieval_report_json() const {
        return workspace / "retrieval.slices.json";
    }
    std::filesystem::path retrieval_report_md() const {
        return workspace / "retrieval.slices.md";
    }
    std::filesystem::path answers_path() const { return workspace / "answers.jsonl"; }
    std::filesystem::path grades_path() const { return workspace / "grades.jsonl"; }
    std::filesystem::path report_json_path() const { return workspace / "report.json"; }
    std::filesystem::path report_md_path() const { return workspace / "report.md"; }
    std::filesystem::path ledger_path() const { return workspace / "llm.ledger.jsonl"; }
    std::filesystem::path log_path() const { return workspace / "run.log.jsonl"; }
};

// One pipeline run per working directory: created exclusively, removed on
// destruction, and an existing file is a hard error naming it.
class WorkspaceLock {
public:
    explicit WorkspaceLock(const std::filesystem::path& workspace);
    ~WorkspaceLock();
    WorkspaceLock(const WorkspaceLock&) = delete;
    WorkspaceLock& operator=(const WorkspaceLock&) = delete;

private:
    std::filesystem::path path_;
};

class Pipeline {
public:
    Pipeline(PipelineConfig config, bool dry_run = false);

    // Runs one subcommand; returns true when work was executed, false when
    // the stage was already up to date (or the dry run only printed a plan).
    bool run(const std::string& subcommand);

    static const std::vector<std::string>& subcommands();

private:
    bool stage(const std::string& name, const std::vector<std::filesystem::path>& inputs,
               const std::vector<std::filesystem::path>& outputs,
               const std::function<void()>& body);
    std::string fingerprint(const std::vector<std::filesystem::path>& inputs) const;
    void require(const std::filesystem::path& path, const std::string& producer) const;
    void log(const std::string& stage, const std::string& event, const std::string& detail);

    void run_ingest();
    void run_fetch();
    void run_facts();
    void run_generate();
    void run_assemble();
    void run_index();
    void run_eval_retrieval();
    void run_eval_generation();
    void run_report();

    PipelineConfig config_;
    bool dry_run_;
    bool executed_ = false;
};

}  // namespace irb::cli
