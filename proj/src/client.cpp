#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "irb/llm/client.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "irb/util/strings.hpp"

namespace irb::llm {

HttpLlmClient::HttpLlmClient(std::string endpoint, std::string api_key_env,
                             int timeout_seconds)
    : endpoint_(std::move(endpoint)),
      api_key_env_(std::move(api_key_env)),
      timeout_seconds_(timeout_seconds) {}

LlmResponse HttpLlmClient::complete(const LlmRequest& request) const {
    LlmResponse out;

    std::size_t scheme_end = endpoint_.find("://");
    if (scheme_end == std::string::npos) {
        out.error = "invalid endpoint: " + endpoint_;
        return out;
    }
    std::size_t path_start = endpoint_.find('/', scheme_end + 3);
    std::string origin =
        path_start == std::string::npos ? endpoint_ : endpoint_.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/v1/chat/completions"
                                                       : endpoint_.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);

    httplib::Headers headers;
    if (!api_key_env_.empty()) {
        const char* key = std::getenv(api_key_env_.c_str());
        if (!key || !*key) {
            out.error = "credentials environment variable not set: " + api_key_env_;
            return out;
        }
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    nlohmann::json body{{"model", request.model_id},
                        {"messages", nlohmann::json::array({nlohmann::json{
                                         {"role", "user"}, {"content", request.prompt}}})},
                        {"temperature", request.temperature},
                        {"max_tokens", request.max_output_tokens}};

    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
        out.error = "transport: " + httplib::to_string(res.error());
        out.transient = true;  // timeouts and resets are worth retrying
        return out;
    }
    if (res->status == 429 || res->status >= 500) {
        out.error = "http " + std::to_string(res->status);
        out.transient = true;
        return out;
    }
    if (res->status != 200) {
        out.error = "http " + std::to_string(res->status) + ": " + res->body;
        out.context_length = util::contains_ci(res->body, "context_length") ||
                             util::contains_ci(res->body, "maximum context length");
        return out;
    }

    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded()) {
        out.error = "malformed provider response";
        return out;
    }
    try {
        out.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        out.error = std::string("unexpected response shape: ") + e.what();
        return out;
    }
    if (j.contains("usage")) {
        const auto& u = j["usage"];
        out.usage.prompt_tokens = u.value("prompt_tokens", 0L);
        out.usage.completion_tokens = u.value("completion_tokens", 0L);
        if (u.contains("completion_tokens_details") &&
            u["completion_tokens_details"].contains("reasoning_tokens")) {
            out.usage.reasoning_tokens =
                u["completion_tokens_details"]["reasoning_tokens"].get<long>();
        }
    }
    out.ok = true;
    return out;
}

}  // namespace irb::llm
