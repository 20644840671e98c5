#include "irb/ingest/wikitext.hpp"

#include <cctype>
#include <map>

#include "irb/util/strings.hpp"

namespace irb::ingest {

namespace {

constexpr char kSentinelOpen = '\x01';
constexpr char kSentinelClose = '\x02';

bool is_url_char(char c) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) return true;
    return std::string_view("-._~:/?#[]@!$&'()*+,;=%").find(c) != std::string_view::npos;
}

std::string trim_url(std::string url) {
    // Trailing punctuation is sentence punctuation, not part of the URL.
    while (!url.empty() && std::string_view(".,;:!?)]'").find(url.back()) != std::string_view::npos) {
        url.pop_back();
    }
    return url;
}

std::vector<std::string> extract_urls(std::string_view ref_content) {
    std::vector<std::string> urls;
    auto push = [&urls](std::string u) {
        u = trim_url(std::move(u));
        if (u.empty()) return;
        for (const auto& seen : urls)
            if (seen == u) return;
        urls.push_back(std::move(u));
    };

    // |url= parameters inside cite templates.
    std::size_t pos = 0;
    while ((pos = ref_content.find("url", pos)) != std::string::npos) {
        // Accept "url" only as a whole parameter name (|url= or {{...|url =).
        std::size_t name_start = pos;
        if (name_start > 0) {
            char prev = ref_content[name_start - 1];
            if (prev != '|' && prev != '{' && !std::isspace(static_cast<unsigned char>(prev))) {
                pos += 3;
                continue;
            }
        }
        std::size_t p = pos + 3;
        while (p < ref_content.size() && ref_content[p] == ' ') ++p;
        if (p >= ref_content.size() || ref_content[p] != '=') {
            pos += 3;
            continue;
        }
        ++p;
        while (p < ref_content.size() && ref_content[p] == ' ') ++p;
        std::size_t end = p;
        while (end < ref_content.size() && ref_content[end] != '|' && ref_content[end] != '}' &&
               !std::isspace(static_cast<unsigned char>(ref_content[end]))) {
            ++end;
        }
        push(std::string(ref_content.substr(p, end - p)));
        pos = end;
    }

    // Bare URLs.
    for (std::size_t i = 0; i + 7 < ref_content.size(); ++i) {
        if (ref_content.compare(i, 7, "http://") == 0 ||
            ref_content.compare(i, 8, "https://") == 0) {
            std::size_t end = i;
            while (end < ref_content.size() && is_url_char(ref_content[end])) ++end;
            push(std::string(ref_content.substr(i, end - i)));
            i = end;
        }
    }
    return urls;
}

struct TagHeader {
    std::map<std::string, std::string> attrs;
    bool self_closing = false;
    std::size_t end = 0;  // offset just past '>'
};

// Parses the attribute list of a <ref ...> opening tag starting at `pos`
// (which points at "<ref"). Returns nullopt when the tag never closes.
std::optional<TagHeader> parse_ref_tag(std::string_view text, std::size_t pos) {
    std::size_t p = pos + 4;  // past "<ref"
    TagHeader h;
    std::string pending_name;
    while (p < text.size() && text[p] != '>') {
        unsigned char c = static_cast<unsigned char>(text[p]);
        if (c == '/') {
            h.self_closing = true;
            ++p;
        } else if (std::isspace(c)) {
            ++p;
        } else if (std::isalpha(c)) {
            std::size_t ns = p;
            while (p < text.size() && (std::isalnum(static_cast<unsigned char>(text[p])) || text[p] == '-')) ++p;
            pending_name = util::to_lower(text.substr(ns, p - ns));
            while (p < text.size() && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
            if (p < text.size() && text[p] == '=') {
                ++p;
                while (p < text.size() && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
                std::string value;
                if (p < text.size() && (text[p] == '"' || text[p] == '\'')) {
                    char q = text[p++];
                    std::size_t vs = p;
                    while (p < text.size() && text[p] != q && text[p] != '>') ++p;
                    value = std::string(text.substr(vs, p - vs));
                    if (p < text.size() && text[p] == q) ++p;
                } else {
                    std::size_t vs = p;
                    while (p < text.size() && !std::isspace(static_cast<unsigned char>(text[p])) &&
                           text[p] != '>' && text[p] != '/') {
                        ++p;
                    }
                    value = std::string(text.substr(vs, p - vs));
                }
                h.attrs[pending_name] = value;
            } else {
                h.attrs[pending_name] = "";
            }
        } else {
            ++p;
        }
    }
    if (p >= text.size()) return std::nullopt;
    h.end = p + 1;
    return h;
}

std::string remove_comments(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 4, "<!--") == 0) {
            std::size_t close = text.find("-->", i + 4);
            i = (close == std::string::npos) ? text.size() : close + 3;
        } else {
            out += text[i++];
        }
    }
    return out;
}

// Removes balanced {{...}} template spans (multi-line). Unbalanced opens
// are skipped to end of line and reported.
std::string remove_templates(std::string_view text, std::vector<std::string>& warnings) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 2, "{{") == 0) {
            int depth = 0;
            std::size_t j = i;
            while (j < text.size()) {
                if (text.compare(j, 2, "{{") == 0) {
                    depth += 1;
                    j += 2;
                } else if (text.compare(j, 2, "}}") == 0) {
                    depth -= 1;
                    j += 2;
                    if (depth == 0) break;
                } else {
                    ++j;
                }
            }
            if (depth != 0) {
                std::size_t eol = text.find('\n', i);
                if (eol == std::string::npos) eol = text.size();
                warnings.push_back("unclosed template skipped: " +
                                   std::string(text.substr(i, std::min<std::size_t>(40, eol - i))));
                i = eol;
            } else {
                i = j;
            }
        } else {
            out += text[i++];
        }
    }
    return out;
}

std::string remove_tables(std::string_view text, std::vector<std::string>& warnings) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 2, "{|") == 0) {
            std::size_t close = text.find("|}", i + 2);
            if (close == std::string::npos) {
                warnings.push_back("unclosed table skipped");
                break;
            }
            i = close + 2;
        } else {
            out += text[i++];
        }
    }
    return out;
}

std::string decode_entities(std::string s) {
    s = util::replace_all(std::move(s), "&nbsp;", " ");
    s = util::replace_all(std::move(s), "&ndash;", "-");
    s = util::replace_all(std::move(s), "&mdash;", "-");
    s = util::replace_all(std::move(s), "&quot;", "\"");
    s = util::replace_all(std::move(s), "&lt;", "<");
    s = util::replace_all(std::move(s), "&gt;", ">");
    s = util::replace_all(std::move(s), "&amp;", "&");
    return s;
}

}  // namespace

std::string strip_inline_markup(std::string_view line) {
    std::string out;
    out.reserve(line.size());
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        // Sentinels pass through untouched.
        if (line[i] == kSentinelOpen) {
            std::size_t close = line.find(kSentinelClose, i);
            if (close == std::string::npos) break;
            out += line.substr(i, close - i + 1);
            i = close + 1;
            continue;
        }
        if (line.compare(i, 2, "[[") == 0) {
            int depth = 0;
            std::size_t j = i;
            while (j < n) {
                if (line.compare(j, 2, "[[") == 0) {
                    depth += 1;
                    j += 2;
                } else if (line.compare(j, 2, "]]") == 0) {
                    depth -= 1;
                    j += 2;
                    if (depth == 0) break;
                } else {
                    ++j;
                }
            }
            if (depth != 0) {  // unbalanced, emit verbatim minus brackets
                i += 2;
                continue;
            }
            std::string inner(line.substr(i + 2, j - i - 4));
            std::string low = util::to_lower(inner);
            if (util::starts_with(low, "file:") || util::starts_with(low, "image:") ||
                util::starts_with(low, "category:")) {
                i = j;
                continue;
            }
            std::size_t bar = inner.rfind('|');
            std::string label = (bar == std::string::npos) ? inner : inner.substr(bar + 1);
            out += strip_inline_markup(label);
            i = j;
            continue;
        }
        if (line[i] == '[' && (line.compare(i + 1, 7, "http://") == 0 ||
                               line.compare(i + 1, 8, "https://") == 0)) {
            std::size_t close = line.find(']', i);
            if (close == std::string::npos) {
                ++i;
                continue;
            }
            std::string inner(line.substr(i + 1, close - i - 1));
            std::size_t sp = inner.find(' ');
            if (sp != std::string::npos) out += inner.substr(sp + 1);
            i = close + 1;
            continue;
        }
        if (line[i] == '\'') {
            std::size_t run = 0;
            while (i + run < n && line[i + run] == '\'') ++run;
            if (run >= 2) {
                i += run;
                continue;
            }
            out += '\'';
            ++i;
            continue;
        }
        if (line[i] == '<') {
            std::size_t close = line.find('>', i);
            if (close != std::string::npos && close - i <= 64) {
                i = close + 1;
                continue;
            }
            ++i;
            continue;
        }
        out += line[i++];
    }
    return decode_entities(out);
}

ArticleSource parse_article(std::string_view wikitext, const ArticleMeta& meta) {
    ArticleSource article;
    article.page_id = meta.page_id;
    article.title = meta.title;
    article.last_updated = meta.last_updated;
    article.cohort_year = meta.cohort_year ? meta.cohort_year : meta.last_updated.year;
    article.body = std::string(wikitext);

    std::string text = remove_comments(wikitext);

    // Pass A: collect named ref definitions (use-before-define is legal).
    std::map<std::string, std::vector<std::string>> named_refs;
    {
        std::size_t pos = 0;
        while ((pos = text.find("<ref", pos)) != std::string::npos) {
            auto header = parse_ref_tag(text, pos);
            if (!header) break;
            if (!header->self_closing) {
                std::size_t close = text.find("</ref>", header->end);
                if (close == std::string::npos) {
                    pos = header->end;
                    continue;
                }
                auto it = header->attrs.find("name");
                if (it != header->attrs.end() && !it->second.empty()) {
                    auto urls = extract_urls(
                        std::string_view(text).substr(header->end, close - header->end));
                    if (!urls.empty()) named_refs[it->second] = urls;
                }
                pos = close + 6;
            } else {
                pos = header->end;
            }
        }
    }

    // Pass B: replace every in-flow ref with a sentinel, recording its URLs.
    std::vector<std::vector<std::string>> ref_urls;
    {
        std::string replaced;
        replaced.reserve(text.size());
        std::size_t i = 0;
        while (i < text.size()) {
            if (text.compare(i, 4, "<ref") == 0) {
                auto header = parse_ref_tag(text, i);
                if (!header) {
                    article.parse_warnings.push_back("unterminated <ref tag skipped");
                    break;
                }
                std::vector<std::string> urls;
                std::size_t next = header->end;
                if (header->self_closing) {
                    auto it = header->attrs.find("name");
                    if (it != header->attrs.end()) {
                        auto found = named_refs.find(it->second);
                        if (found != named_refs.end()) urls = found->second;
                    }
                } else {
                    std::size_t close = text.find("</ref>", header->end);
                    if (close == std::string::npos) {
                        article.parse_warnings.push_back("unclosed <ref> skipped");
                        i = header->end;
                        continue;
                    }
                    urls = extract_urls(std::string_view(text).substr(header->end, close - header->end));
                    next = close + 6;
                }
                if (!urls.empty()) {
                    replaced += kSentinelOpen;
                    replaced += std::to_string(ref_urls.size());
                    replaced += kSentinelClose;
                    ref_urls.push_back(std::move(urls));
                }
                i = next;
                continue;
            }
            replaced += text[i++];
        }
        text = std::move(replaced);
    }

    // The <references> block repeats list-defined refs; keep it out of flow.
    {
        std::size_t open = text.find("<references");
        if (open != std::string::npos) {
            std::size_t close = text.find("</references>", open);
            text.erase(open, close == std::string::npos ? std::string::npos : close + 13 - open);
        }
    }

    text = remove_templates(text, article.parse_warnings);
    text = remove_tables(text, article.parse_warnings);

    // Walk lines: headers delimit sections, blank lines delimit paragraphs.
    std::vector<std::string> header_path;
    SectionText current;
    std::string paragraph;
    std::vector<std::pair<std::size_t, std::size_t>> paragraph_markers;  // (pos, ref index)

    auto flush_paragraph = [&]() {
        std::string body = util::trim(paragraph);
        paragraph.clear();
        if (body.empty()) {
            paragraph_markers.clear();
            return;
        }
        if (!current.text.empty()) current.text += "\n\n";
        std::size_t base = current.text.size();
        // Re-scan for sentinels: positions must be computed on final text.
        std::string clean;
        clean.reserve(body.size());
        std::size_t i = 0;
        while (i < body.size()) {
            if (body[i] == kSentinelOpen) {
                std::size_t close = body.find(kSentinelClose, i);
                if (close == std::string::npos) break;
                std::size_t idx = std::stoul(body.substr(i + 1, close - i - 1));
                current.markers.push_back({base + clean.size(), ref_urls[idx]});
                i = close + 1;
            } else {
                clean += body[i++];
            }
        }
        current.text += clean;
        paragraph_markers.clear();
    };
    auto flush_section = [&]() {
        flush_paragraph();
        if (!current.text.empty()) article.sections.push_back(std::move(current));
        current = SectionText{};
        current.header_path = header_path;
    };

    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        std::size_t eol = text.find('\n', line_start);
        if (eol == std::string::npos) eol = text.size();
        std::string_view raw(text.data() + line_start, eol - line_start);
        std::string line = util::trim(raw);

        if (line.empty()) {
            flush_paragraph();
        } else if (line.size() >= 4 && line.front() == '=' && line.back() == '=') {
            std::size_t level = 0;
            while (level < line.size() && line[level] == '=') ++level;
            std::size_t tail = 0;
            while (tail < line.size() && line[line.size() - 1 - tail] == '=') ++tail;
            std::size_t depth = std::min(level, tail);
            std::string header = util::trim(line.substr(depth, line.size() - 2 * depth));
            // Drop ref sentinels and markup from the header text.
            std::string clean_header;
            for (std::size_t i = 0; i < header.size(); ++i) {
                if (header[i] == kSentinelOpen) {
                    std::size_t close = header.find(kSentinelClose, i);
                    if (close == std::string::npos) break;
                    i = close;
                } else {
                    clean_header += header[i];
                }
            }
            clean_header = util::trim(strip_inline_markup(clean_header));
            flush_section();
            std::size_t path_depth = depth >= 2 ? depth - 2 : 0;  // == is depth 0
            header_path.resize(path_depth);
            header_path.push_back(clean_header);
            current.header_path = header_path;
            if (!clean_header.empty()) article.section_headers.push_back(clean_header);
        } else {
            // List markers and indentation are stripped; items become paragraphs.
            std::string_view content = line;
            bool is_list = false;
            while (!content.empty() && (content[0] == '*' || content[0] == '#' ||
                                        content[0] == ':' || content[0] == ';')) {
                content.remove_prefix(1);
                is_list = true;
            }
            if (is_list) flush_paragraph();
            std::string stripped = strip_inline_markup(util::trim(content));
            if (!util::trim(stripped).empty()) {
                if (!paragraph.empty()) paragraph += ' ';
                paragraph += stripped;
            }
            if (is_list) flush_paragraph();
        }
        line_start = eol + 1;
        if (eol == text.size()) break;
    }
    flush_section();

    if (!article.sections.empty() && article.sections.front().header_path.empty()) {
        article.abstract = article.sections.front().text;
    }
    return article;
}

}  // namespace irb::ingest
