#pragma once

#include <filesystem>
#include <mutex>
#include <stdexcept>

#include "irb/llm/client.hpp"
#include "irb/llm/template.hpp"

namespace irb::llm {

// Exhausted retries or a permanent provider failure.
struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Prompt exceeded the model context; the caller decides truncation policy.
struct ContextLengthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One completed (or failed) gateway call, as recorded in the audit ledger.
struct LlmCall {
    std::string template_id;
    std::string model_id;
    std::string response_text;
    Usage usage;
    long latency_ms = 0;
    int attempt_count = 0;  // ≥ 1 whenever the provider was reached at all
    bool ok = false;
    bool truncated_input = false;  // caller truncated the prompt to fit
    std::string error;
};

struct GatewayConfig {
    std::string model_id = "mock-model";
    double temperature = 0.0;
    int max_output_tokens = 4096;
    int max_attempts = 4;
    int backoff_initial_ms = 250;          // doubles per retry
    bool backoff_sleep = true;             // tests disable real sleeping
    int parallelism = 1;                   // prompted steps run in sequence
    std::filesystem::path ledger_path;     // empty: no ledger file
};

// Uniform access point for every prompted step: renders, retries transient
// failures with exponential backoff, and appends one ledger entry per
// complete() invocation — including failures.
class Gateway {
public:
    Gateway(const LlmClient& client, GatewayConfig config);

    // Renders the template over the bindings and completes it. Throws
    // ProviderError after exhausting retries and ContextLengthError for
    // over-length prompts; both still produce a ledger entry.
    LlmCall complete(const PromptTemplate& tmpl,
                     const std::map<std::string, std::string>& bindings,
                     bool truncated_input = false);

    long long calls_made() const { return calls_made_; }
    const GatewayConfig& config() const { return config_; }

private:
    void append_ledger(const LlmCall& call);

    const LlmClient& client_;
    GatewayConfig config_;
    std::mutex ledger_mutex_;
    long long calls_made_ = 0;
};

}  // namespace irb::llm
