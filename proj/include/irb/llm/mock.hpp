#pragma once

#include <filesystem>
#include <vector>

#include "irb/llm/client.hpp"

namespace irb::llm {

// A canned response selected by template and binding content. The first
// rule whose template_id matches and whose every `match` entry is a
// substring of the corresponding binding wins.
struct FixtureRule {
    std::string template_id;
    std::map<std::string, std::string> match;
    std::string response;
};

// Deterministic offline stand-in for a chat model: fixture rules first,
// then per-template default behaviours that produce well-formed output for
// every pipeline prompt. Same request, same response bytes.
class MockLlmClient final : public LlmClient {
public:
    MockLlmClient() = default;
    static MockLlmClient from_file(const std::filesystem::path& fixture_json);

    void add_rule(FixtureRule rule);

    // The next `count` calls fail before any rule lookup; `transient`
    // selects retryable vs permanent failure. Supports retry-contract tests.
    void fail_next(int count, bool transient = true);

    LlmResponse complete(const LlmRequest& request) const override;

private:
    std::vector<FixtureRule> rules_;
    mutable int fail_count_ = 0;
    bool fail_transient_ = true;
};

}  // namespace irb::llm
