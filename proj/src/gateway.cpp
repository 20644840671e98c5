#include "irb/llm/gateway.hpp"

#include <chrono>
#include <thread>

#include <nlohmann/json.hpp>

#include "irb/util/fs.hpp"

namespace irb::llm {

Gateway::Gateway(const LlmClient& client, GatewayConfig config)
    : client_(client), config_(std::move(config)) {}

LlmCall Gateway::complete(const PromptTemplate& tmpl,
                          const std::map<std::string, std::string>& bindings,
                          bool truncated_input) {
    LlmRequest request;
    request.template_id = tmpl.template_id;
    request.bindings = bindings;
    request.prompt = render(tmpl, bindings);
    request.model_id = config_.model_id;
    request.temperature = config_.temperature;
    request.max_output_tokens = config_.max_output_tokens;

    LlmCall call;
    call.template_id = tmpl.template_id;
    call.model_id = config_.model_id;
    call.truncated_input = truncated_input;

    auto started = std::chrono::steady_clock::now();
    LlmResponse response;
    int backoff_ms = config_.backoff_initial_ms;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        call.attempt_count = attempt;
        response = client_.complete(request);
        if (response.ok || !response.transient) break;
        if (attempt < config_.max_attempts && config_.backoff_sleep) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
        }
        backoff_ms *= 2;
    }
    call.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - started)
                          .count();

    call.ok = response.ok;
    call.response_text = response.text;
    call.usage = response.usage;
    call.error = response.error;
    append_ledger(call);

    if (!response.ok) {
        if (response.context_length) {
            throw ContextLengthError("context length exceeded for template '" +
                                     tmpl.template_id + "': " + response.error);
        }
        throw ProviderError("provider failed after " + std::to_string(call.attempt_count) +
                            " attempt(s) for template '" + tmpl.template_id +
                            "': " + response.error);
    }
    return call;
}

void Gateway::append_ledger(const LlmCall& call) {
    std::lock_guard lock(ledger_mutex_);
    ++calls_made_;
    if (config_.ledger_path.empty()) return;
    nlohmann::json j{{"template_id", call.template_id},
                     {"model_id", call.model_id},
                     {"ok", call.ok},
                     {"attempt_count", call.attempt_count},
                     {"latency_ms", call.latency_ms},
                     {"prompt_tokens", call.usage.prompt_tokens},
                     {"completion_tokens", call.usage.completion_tokens},
                     {"truncated_input", call.truncated_input},
                     {"error", call.error}};
    if (call.usage.reasoning_tokens) j["reasoning_tokens"] = *call.usage.reasoning_tokens;
    util::append_jsonl(config_.ledger_path, j);
}

}  // namespace irb::llm
