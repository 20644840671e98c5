#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "irb/evidence/fetch.hpp"

#include <httplib.h>

#include <fstream>
#include <optional>

#include "irb/util/hash.hpp"
#include "irb/util/strings.hpp"

namespace irb::evidence {

namespace {

struct UrlParts {
    std::string scheme;
    std::string host_port;  // host[:port]
    std::string path;       // path + query, "/" minimum
};

std::optional<UrlParts> split_url(const std::string& url) {
    UrlParts parts;
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) return std::nullopt;
    parts.scheme = util::to_lower(url.substr(0, scheme_end));
    std::size_t host_start = scheme_end + 3;
    std::size_t path_start = url.find('/', host_start);
    if (path_start == std::string::npos) {
        parts.host_port = url.substr(host_start);
        parts.path = "/";
    } else {
        parts.host_port = url.substr(host_start, path_start - host_start);
        parts.path = url.substr(path_start);
    }
    if (parts.host_port.empty()) return std::nullopt;
    return parts;
}

bool non_text_content_type(const std::string& content_type) {
    std::string ct = util::to_lower(content_type);
    if (ct.empty()) return false;
    if (ct.find("text/") == 0) return false;
    if (ct.find("html") != std::string::npos) return false;
    if (ct.find("xml") != std::string::npos) return false;
    if (ct.find("json") != std::string::npos) return false;
    return true;
}

bool non_text_url(const std::string& url) {
    static const char* exts[] = {".pdf", ".mp4", ".mp3", ".avi", ".mov", ".png",
                                 ".jpg", ".jpeg", ".gif", ".zip", ".doc", ".docx",
                                 ".xls", ".ppt", ".webm", ".ogg", ".wav"};
    std::string low = util::to_lower(url);
    std::size_t query = low.find('?');
    if (query != std::string::npos) low = low.substr(0, query);
    for (const char* ext : exts)
        if (util::ends_with(low, ext)) return true;
    return false;
}

}  // namespace

HttpFetcher::HttpFetcher(std::string user_agent, int timeout_seconds)
    : user_agent_(std::move(user_agent)), timeout_seconds_(timeout_seconds) {}

RawFetch HttpFetcher::get(const std::string& url) const {
    RawFetch out;
    auto parts = split_url(url);
    if (!parts || (parts->scheme != "http" && parts->scheme != "https")) {
        out.error = "unsupported url";
        return out;
    }
    std::string origin = parts->scheme + "://" + parts->host_port;
    httplib::Client client(origin);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    client.set_follow_location(true);
    client.enable_server_certificate_verification(false);
    httplib::Headers headers = {{"User-Agent", user_agent_}};
    auto res = client.Get(parts->path, headers);
    if (!res) {
        out.error = httplib::to_string(res.error());
        return out;
    }
    out.transport_ok = true;
    out.http_status = res->status;
    out.content_type = res->get_header_value("Content-Type");
    out.body = res->body;
    return out;
}

FixtureFetcher::FixtureFetcher(std::filesystem::path root) : root_(std::move(root)) {}

RawFetch FixtureFetcher::get(const std::string& url) const {
    RawFetch out;
    auto parts = split_url(url);
    if (!parts) {
        out.error = "unsupported url";
        return out;
    }
    std::string name = parts->path;
    while (!name.empty() && name.front() == '/') name.erase(name.begin());
    if (name.empty()) {
        out.error = "no fixture path";
        return out;
    }
    std::filesystem::path file = root_ / name;
    std::error_code ec;
    if (!std::filesystem::exists(file, ec)) {
        out.error = "fixture not found: " + name;  // behaves like an offline host
        return out;
    }
    std::ifstream in(file, std::ios::binary);
    out.body.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    out.transport_ok = true;
    out.http_status = 200;
    std::string ext = util::to_lower(file.extension().string());
    if (ext == ".html" || ext == ".htm") out.content_type = "text/html";
    else if (ext == ".pdf") out.content_type = "application/pdf";
    else if (ext == ".json") out.content_type = "application/json";
    else out.content_type = "text/plain";
    return out;
}

EvidenceDocument build_document(const std::string& url, const RawFetch& raw,
                                const MainContentExtractor& extractor,
                                const LanguageDetector& detector) {
    EvidenceDocument doc;
    doc.url = url;
    doc.doc_id = util::doc_id_for_url(url);

    if (!raw.transport_ok || raw.http_status < 200 || raw.http_status >= 400) {
        doc.fetch_status = FetchStatus::offline;
        return doc;
    }
    if (non_text_content_type(raw.content_type) || non_text_url(url)) {
        doc.fetch_status = FetchStatus::non_text;
        return doc;
    }
    std::string content = util::trim(extractor.extract(raw.body));
    if (content.empty()) {
        doc.fetch_status = FetchStatus::empty_extraction;
        return doc;
    }
    doc.content = std::move(content);
    doc.fetch_status = FetchStatus::ok;
    auto guess = detector.detect(doc.content);
    doc.language = guess.code;
    doc.language_confidence = guess.confidence;
    doc.published = extract_publication_date(raw.body, url);
    return doc;
}

EvidenceDocument fetch_document(const std::string& url, const Fetcher& fetcher) {
    return build_document(url, fetcher.get(url), default_extractor(),
                          default_language_detector());
}

}  // namespace irb::evidence
