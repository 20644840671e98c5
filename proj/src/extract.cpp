#include "irb/evidence/extract.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <vector>

#include "irb/util/strings.hpp"

namespace irb::evidence {

namespace {

std::string decode_entities(std::string s) {
    s = util::replace_all(std::move(s), "&nbsp;", " ");
    s = util::replace_all(std::move(s), "&ndash;", "-");
    s = util::replace_all(std::move(s), "&mdash;", "-");
    s = util::replace_all(std::move(s), "&quot;", "\"");
    s = util::replace_all(std::move(s), "&#39;", "'");
    s = util::replace_all(std::move(s), "&apos;", "'");
    s = util::replace_all(std::move(s), "&lt;", "<");
    s = util::replace_all(std::move(s), "&gt;", ">");
    s = util::replace_all(std::move(s), "&amp;", "&");
    return s;
}

// Removes <tag ...>...</tag> spans wholesale (case-insensitive tag match).
std::string drop_elements(std::string html, const std::vector<std::string>& tags) {
    std::string low = util::to_lower(html);
    for (const auto& tag : tags) {
        std::string open = "<" + tag;
        std::string close = "</" + tag + ">";
        std::size_t pos = 0;
        while ((pos = low.find(open, pos)) != std::string::npos) {
            char after = pos + open.size() < low.size() ? low[pos + open.size()] : ' ';
            if (after != ' ' && after != '>' && after != '\t' && after != '\n' && after != '/') {
                pos += open.size();
                continue;
            }
            std::size_t end = low.find(close, pos);
            std::size_t erase_end =
                end == std::string::npos ? low.size() : end + close.size();
            low.erase(pos, erase_end - pos);
            html.erase(pos, erase_end - pos);
        }
    }
    return html;
}

std::string drop_comments(std::string html) {
    std::size_t pos = 0;
    while ((pos = html.find("<!--", pos)) != std::string::npos) {
        std::size_t end = html.find("-->", pos + 4);
        html.erase(pos, end == std::string::npos ? std::string::npos : end + 3 - pos);
    }
    return html;
}

bool is_block_tag(const std::string& name) {
    static const std::set<std::string> blocks = {
        "p",   "div",  "li",      "ul",   "ol",    "h1",    "h2",   "h3",
        "h4",  "h5",   "h6",      "br",   "table", "tr",    "td",   "th",
        "section", "article", "main", "figure", "figcaption", "blockquote",
        "pre", "hr",   "body",    "html", "head",  "title"};
    return blocks.count(name) > 0;
}

struct Block {
    std::string text;
    std::size_t link_chars = 0;
};

// Walks the HTML once, accumulating visible text into blocks split at
// block-level tags, tracking how much of each block's text sits inside <a>.
std::vector<Block> collect_blocks(const std::string& html) {
    std::vector<Block> blocks;
    Block current;
    int link_depth = 0;
    auto flush = [&]() {
        current.text = util::normalize_ws(current.text);
        if (!current.text.empty()) blocks.push_back(current);
        current = Block{};
    };
    std::size_t i = 0;
    const std::size_t n = html.size();
    while (i < n) {
        if (html[i] == '<') {
            std::size_t close = html.find('>', i);
            if (close == std::string::npos) break;
            std::string tag = html.substr(i + 1, close - i - 1);
            bool closing = !tag.empty() && tag[0] == '/';
            std::size_t ns = closing ? 1 : 0;
            std::size_t ne = ns;
            while (ne < tag.size() && std::isalnum(static_cast<unsigned char>(tag[ne]))) ++ne;
            std::string name = util::to_lower(tag.substr(ns, ne - ns));
            if (name == "a") link_depth += closing ? -1 : 1;
            if (link_depth < 0) link_depth = 0;
            if (is_block_tag(name)) flush();
            i = close + 1;
            continue;
        }
        std::size_t next = html.find('<', i);
        if (next == std::string::npos) next = n;
        std::string piece = decode_entities(html.substr(i, next - i));
        current.text += piece;
        if (link_depth > 0) current.link_chars += util::normalize_ws(piece).size();
        i = next;
    }
    flush();
    return blocks;
}

}  // namespace

std::string html_to_text(const std::string& raw_html) {
    std::string html = drop_comments(raw_html);
    html = drop_elements(std::move(html), {"script", "style", "noscript", "template"});
    auto blocks = collect_blocks(html);
    std::vector<std::string> texts;
    texts.reserve(blocks.size());
    for (auto& b : blocks) texts.push_back(std::move(b.text));
    return util::join(texts, "\n");
}

std::string TextDensityExtractor::extract(const std::string& raw_html) const {
    std::string html = drop_comments(raw_html);
    html = drop_elements(std::move(html),
                         {"script", "style", "noscript", "template", "nav", "header",
                          "footer", "aside", "form", "button", "svg", "iframe", "head"});
    auto blocks = collect_blocks(html);

    std::vector<std::string> kept;
    for (const auto& b : blocks) {
        double density =
            b.text.empty() ? 1.0 : static_cast<double>(b.link_chars) / b.text.size();
        // Dense prose: long enough to be a sentence, mostly not link text.
        if (b.text.size() >= 40 && density <= 0.4) kept.push_back(b.text);
    }
    if (kept.empty()) {
        // Fall back to everything visible rather than returning nothing for
        // minimalist pages.
        for (const auto& b : blocks)
            if (!b.text.empty()) kept.push_back(b.text);
    }
    return util::join(kept, "\n\n");
}

const MainContentExtractor& default_extractor() {
    static const TextDensityExtractor instance;
    return instance;
}

namespace {

std::optional<util::Date> find_meta_date(const std::string& html) {
    static const std::array<std::string, 6> keys = {
        "article:published_time", "article:modified_time", "datepublished",
        "publication_date",       "pubdate",               "date"};
    std::string low = util::to_lower(html);
    std::size_t pos = 0;
    std::optional<util::Date> best;
    int best_rank = static_cast<int>(keys.size());
    while ((pos = low.find("<meta", pos)) != std::string::npos) {
        std::size_t end = low.find('>', pos);
        if (end == std::string::npos) break;
        std::string tag = low.substr(pos, end - pos);
        std::string raw = html.substr(pos, end - pos);
        for (int rank = 0; rank < static_cast<int>(keys.size()); ++rank) {
            if (tag.find(keys[static_cast<std::size_t>(rank)]) == std::string::npos) continue;
            std::size_t c = tag.find("content=");
            if (c == std::string::npos) break;
            std::size_t vs = c + 8;
            char quote = vs < raw.size() ? raw[vs] : '"';
            if (quote == '"' || quote == '\'') ++vs;
            std::size_t ve = vs;
            while (ve < raw.size() && raw[ve] != quote && raw[ve] != '>') ++ve;
            auto date = util::parse_date(util::trim(raw.substr(vs, ve - vs)));
            if (date && rank < best_rank) {
                best = date;
                best_rank = rank;
            }
            break;
        }
        pos = end;
    }
    return best;
}

std::optional<util::Date> find_jsonld_date(const std::string& html) {
    std::size_t pos = html.find("\"datePublished\"");
    if (pos == std::string::npos) return std::nullopt;
    pos = html.find(':', pos);
    if (pos == std::string::npos) return std::nullopt;
    ++pos;
    while (pos < html.size() && (html[pos] == ' ' || html[pos] == '"')) ++pos;
    std::size_t end = pos;
    while (end < html.size() && html[end] != '"' && html[end] != ',' && html[end] != '}') ++end;
    return util::parse_date(util::trim(html.substr(pos, end - pos)));
}

std::optional<util::Date> find_time_tag_date(const std::string& html) {
    std::string low = util::to_lower(html);
    std::size_t pos = low.find("<time");
    while (pos != std::string::npos) {
        std::size_t end = low.find('>', pos);
        if (end == std::string::npos) return std::nullopt;
        std::size_t dt = low.find("datetime=", pos);
        if (dt != std::string::npos && dt < end) {
            std::size_t vs = dt + 9;
            char quote = html[vs];
            if (quote == '"' || quote == '\'') ++vs;
            std::size_t ve = vs;
            while (ve < html.size() && html[ve] != quote && html[ve] != '>') ++ve;
            if (auto date = util::parse_date(util::trim(html.substr(vs, ve - vs)))) return date;
        }
        pos = low.find("<time", end);
    }
    return std::nullopt;
}

std::optional<util::Date> find_url_date(const std::string& url) {
    // /YYYY/MM/DD or /YYYY-MM-DD anywhere in the path.
    auto digits = [&](std::size_t at, std::size_t count) {
        for (std::size_t d = 0; d < count; ++d) {
            if (at + d >= url.size() || !std::isdigit(static_cast<unsigned char>(url[at + d])))
                return false;
        }
        return true;
    };
    for (std::size_t i = 0; i + 11 <= url.size(); ++i) {
        if (url[i] != '/' || !digits(i + 1, 4)) continue;
        char sep = url[i + 5];
        if ((sep != '/' && sep != '-') || !digits(i + 6, 2)) continue;
        if (url[i + 8] != sep || !digits(i + 9, 2)) continue;
        util::Date date{std::stoi(url.substr(i + 1, 4)), std::stoi(url.substr(i + 6, 2)),
                        std::stoi(url.substr(i + 9, 2))};
        if (date.valid()) return date;
    }
    return std::nullopt;
}

std::optional<util::Date> find_byline_date(const std::string& html) {
    std::string text = html_to_text(html);
    std::string head = text.substr(0, std::min<std::size_t>(text.size(), 1200));
    std::string low = util::to_lower(head);
    static const std::array<std::string, 4> cues = {"published", "updated", "posted",
                                                    "last modified"};
    for (const auto& cue : cues) {
        std::size_t pos = low.find(cue);
        if (pos == std::string::npos) continue;
        std::size_t start = pos + cue.size();
        std::string window = head.substr(start, std::min<std::size_t>(48, head.size() - start));
        // Try successively shorter prefixes; parse_date rejects garbage.
        for (std::size_t len = window.size(); len >= 8; --len) {
            std::string candidate = util::trim(window.substr(0, len));
            while (!candidate.empty() && (candidate.front() == ':' || candidate.front() == 'o' ||
                                          candidate.front() == 'n' || candidate.front() == ' ')) {
                candidate.erase(candidate.begin());
            }
            if (auto date = util::parse_date(candidate)) return date;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<util::Date> extract_publication_date(const std::string& raw_html,
                                                   const std::string& url) {
    if (auto d = find_meta_date(raw_html)) return d;
    if (auto d = find_jsonld_date(raw_html)) return d;
    if (auto d = find_time_tag_date(raw_html)) return d;
    if (auto d = find_url_date(url)) return d;
    if (auto d = find_byline_date(raw_html)) return d;
    return std::nullopt;
}

namespace {

struct Profile {
    const char* code;
    std::set<std::string> words;
};

const std::vector<Profile>& profiles() {
    static const std::vector<Profile> p = {
        {"en", {"the", "and", "of", "to", "in", "is", "was", "that", "for", "with",
                "as", "on", "are", "were", "by", "at", "from", "it", "his", "this",
                "which", "has", "have", "had", "be", "an"}},
        {"fr", {"le", "la", "les", "de", "des", "du", "et", "en", "un", "une",
                "est", "dans", "que", "qui", "pour", "par", "sur", "avec", "au",
                "aux", "il", "elle", "sont", "plus", "ont"}},
        {"de", {"der", "die", "das", "und", "den", "von", "zu", "mit", "sich",
                "des", "auf", "für", "ist", "im", "dem", "nicht", "ein", "eine",
                "als", "auch", "es", "an", "werden", "aus", "er"}},
        {"es", {"el", "la", "los", "las", "de", "del", "y", "en", "un", "una",
                "es", "que", "por", "con", "para", "su", "al", "lo", "como",
                "más", "pero", "sus", "se", "fue", "ha"}},
        {"it", {"il", "la", "le", "di", "del", "della", "e", "in", "un", "una",
                "è", "che", "per", "con", "non", "si", "da", "come", "anche",
                "più", "dei", "delle", "al", "nel", "sono"}},
        {"ru", {"и", "в", "не", "на", "что", "с", "по", "как", "это", "из",
                "у", "за", "от", "для", "его", "к", "но", "она", "он", "они",
                "был", "была", "году", "года", "или"}},
    };
    return p;
}

}  // namespace

LanguageGuess StopwordLanguageDetector::detect(const std::string& content) const {
    constexpr double kThreshold = 0.65;
    constexpr double kMinHit = 0.03;

    // Script statistics over letters.
    std::size_t letters = 0, cyrillic = 0;
    for (std::size_t i = 0; i < content.size();) {
        unsigned char c = static_cast<unsigned char>(content[i]);
        if (c < 0x80) {
            if (std::isalpha(c)) ++letters;
            ++i;
        } else if ((c & 0xE0) == 0xC0 && i + 1 < content.size()) {
            unsigned cp = ((c & 0x1Fu) << 6) |
                          (static_cast<unsigned char>(content[i + 1]) & 0x3Fu);
            ++letters;
            if (cp >= 0x0400 && cp <= 0x04FF) ++cyrillic;
            i += 2;
        } else if ((c & 0xF0) == 0xE0) {
            ++letters;
            i += 3;
        } else if ((c & 0xF8) == 0xF0) {
            ++letters;
            i += 4;
        } else {
            ++i;
        }
    }
    if (letters < 10) return {"und", 0.0};
    double cyr_fraction = static_cast<double>(cyrillic) / letters;
    if (cyr_fraction >= 0.5) {
        return cyr_fraction >= kThreshold ? LanguageGuess{"ru", cyr_fraction}
                                          : LanguageGuess{"und", cyr_fraction};
    }

    auto words = util::content_words(content);
    if (words.empty()) return {"und", 0.0};
    double total_hits = 0.0, best_hits = 0.0;
    const char* best_code = "und";
    for (const auto& profile : profiles()) {
        std::size_t hits = 0;
        for (const auto& w : words) hits += profile.words.count(w);
        double fraction = static_cast<double>(hits) / words.size();
        total_hits += fraction;
        if (fraction > best_hits) {
            best_hits = fraction;
            best_code = profile.code;
        }
    }
    if (best_hits < kMinHit) return {"und", 0.0};
    double confidence = best_hits / (total_hits + 1e-9);
    if (confidence < kThreshold) return {"und", confidence};
    return {best_code, confidence};
}

const LanguageDetector& default_language_detector() {
    static const StopwordLanguageDetector instance;
    return instance;
}

std::string detect_language(const std::string& content) {
    return default_language_detector().detect(content).code;
}

}  // namespace irb::evidence
