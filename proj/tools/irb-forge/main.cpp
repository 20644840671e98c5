// irb-forge: build evidence-grounded QA benchmarks from wikitext articles
// and evaluate retrievers and generators against them.
//
//   irb-forge <subcommand> --config pipeline.json [flags]
//
// Subcommands run one pipeline stage each and skip work whose inputs and
// configuration are unchanged, so a full build is just the nine stages in
// order and an interrupted build resumes where it stopped.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "irb/cli/pipeline.hpp"
#include "irb/util/dates.hpp"

namespace {

const char* describe(const std::string& name) {
    if (name == "ingest") return "Parse articles into syntactically complete citing sentences";
    if (name == "fetch") return "Fetch cited URLs into the evidence corpus (cached, resumable)";
    if (name == "facts") return "Decontextualize sentences and keep evidence-grounded facts";
    if (name == "generate") return "Generate single-hop, multi-hop, and false-premise QA samples";
    if (name == "assemble") return "Assemble the versioned benchmark dataset";
    if (name == "index") return "Build the BM25 index over evidence chunks";
    if (name == "eval-retrieval") return "Rank queries and score nDCG@k per attribute slice";
    if (name == "eval-generation") return "Answer queries (RAG and closed-book) and grade them";
    if (name == "report") return "Aggregate grades into the sliced report with interplay cells";
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"irb-forge: evidence-grounded QA benchmark builder and evaluation harness"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path = "irb-forge.json";
    bool dry_run = false;
    app.add_option("--config", config_path, "Pipeline configuration file (JSON)")
        ->capture_default_str();
    app.add_flag("--dry-run", dry_run, "Print what each stage would do without executing");

    // Flag overrides layered over the config file.
    std::optional<std::string> workspace;
    std::optional<std::string> reference_date;
    std::optional<std::string> current_date;
    std::optional<std::string> mode;
    std::optional<std::string> user_agent;
    std::optional<int> k;
    std::optional<int> fetch_concurrency;
    std::optional<int> politeness_ms;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> benchmark_size;
    app.add_option("--workspace", workspace, "Workspace directory override");
    app.add_option("--reference-date", reference_date,
                   "Reference date (YYYY-MM-DD) for relative-date text and attributes");
    app.add_option("--current-date", current_date,
                   "Current date (YYYY-MM-DD) presented to the answering model");
    app.add_option("--mode", mode, "Evaluation mode: rag, closed-book, or both");
    app.add_option("--user-agent", user_agent, "HTTP User-Agent for evidence fetching");
    app.add_option("--k", k, "Contexts per query / nDCG cutoff");
    app.add_option("--fetch-concurrency", fetch_concurrency, "Parallel fetch workers");
    app.add_option("--politeness-ms", politeness_ms, "Delay between fetches per worker");
    app.add_option("--seed", seed, "Deterministic seed for sampling and perturbation");
    app.add_option("--benchmark-size", benchmark_size,
                   "Sample the benchmark down to this many queries (0 keeps all)");

    for (const auto& name : irb::cli::Pipeline::subcommands())
        app.add_subcommand(name, describe(name));

    CLI11_PARSE(app, argc, argv);
    const std::string subcommand = app.get_subcommands().front()->get_name();

    try {
        irb::cli::PipelineConfig config = irb::cli::PipelineConfig::load(config_path);
        if (workspace) config.workspace = *workspace;
        auto parse_date_flag = [](const std::string& text, const char* flag) {
            auto date = irb::util::parse_iso_date(text);
            if (!date)
                throw irb::util::Error(std::string(flag) + ": invalid date \"" + text +
                                       "\" (expected YYYY-MM-DD)");
            return *date;
        };
        if (reference_date)
            config.reference_date = parse_date_flag(*reference_date, "--reference-date");
        if (current_date) config.reference_date = parse_date_flag(*current_date, "--current-date");
        if (mode) config.eval_mode = *mode;
        if (user_agent) config.user_agent = *user_agent;
        if (k) config.k = *k;
        if (fetch_concurrency) config.fetch_concurrency = *fetch_concurrency;
        if (politeness_ms) config.politeness_ms = *politeness_ms;
        if (seed) config.seed = *seed;
        if (benchmark_size) config.benchmark_size = *benchmark_size;

        irb::cli::WorkspaceLock lock(config.workspace);
        irb::cli::Pipeline pipeline(std::move(config), dry_run);
        pipeline.run(subcommand);
        return 0;
    } catch (const irb::cli::DependencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
