#pragma once

#include <map>
#include <optional>
#include <string>

namespace irb::llm {

struct Usage {
    long prompt_tokens = 0;
    long completion_tokens = 0;
    std::optional<long> reasoning_tokens;
};

struct LlmRequest {
    std::string template_id;                       // which prompt this is
    std::map<std::string, std::string> bindings;   // placeholder bindings
    std::string prompt;                            // fully rendered text
    std::string model_id;
    double temperature = 0.0;                      // greedy by default
    int max_output_tokens = 4096;
};

struct LlmResponse {
    bool ok = false;
    std::string text;
    Usage usage;
    std::string error;
    bool transient = false;       // retry may succeed (429 / 5xx / timeout)
    bool context_length = false;  // prompt too long; caller decides truncation
};

class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual LlmResponse complete(const LlmRequest& request) const = 0;
};

// OpenAI-compatible chat-completions transport. The endpoint and model come
// from configuration; the API key is read from the named environment
// variable at call time and never stored.
class HttpLlmClient final : public LlmClient {
public:
    HttpLlmClient(std::string endpoint, std::string api_key_env,
                  int timeout_seconds = 120);
    LlmResponse complete(const LlmRequest& request) const override;

private:
    std::string endpoint_;
    std::string api_key_env_;
    int timeout_seconds_;
};

}  // namespace irb::llm
