#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "irb/evidence/document.hpp"
#include "irb/evidence/extract.hpp"

namespace irb::evidence {

// What came back over the wire (or from a fixture / cache) before any
// content processing.
struct RawFetch {
    bool transport_ok = false;   // false: unreachable / timeout
    int http_status = 0;
    std::string content_type;
    std::string body;
    std::string error;
};

class Fetcher {
public:
    virtual ~Fetcher() = default;
    virtual RawFetch get(const std::string& url) const = 0;
};

// Real HTTP(S) transport with timeouts and a configurable user agent.
class HttpFetcher final : public Fetcher {
public:
    explicit HttpFetcher(std::string user_agent = "irb-forge/0.1",
                         int timeout_seconds = 20);
    RawFetch get(const std::string& url) const override;

private:
    std::string user_agent_;
    int timeout_seconds_;
};

// Serves files from a directory: https://host/name -> root/name. Unknown
// paths behave like an offline host, so failure handling is exercisable
// without a network.
class FixtureFetcher final : public Fetcher {
public:
    explicit FixtureFetcher(std::filesystem::path root);
    RawFetch get(const std::string& url) const override;

private:
    std::filesystem::path root_;
};

// Classifies a raw fetch and runs extraction, language identification, and
// date extraction. Never throws for remote failures: every failure class
// maps to a non-ok fetch_status.
EvidenceDocument build_document(const std::string& url, const RawFetch& raw,
                                const MainContentExtractor& extractor,
                                const LanguageDetector& detector);

// One-call form with the default extractor and detector.
EvidenceDocument fetch_document(const std::string& url, const Fetcher& fetcher);

}  // namespace irb::evidence
