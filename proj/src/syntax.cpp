#include "irb/ingest/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "irb/text/tokenizer.hpp"
#include "irb/util/strings.hpp"

namespace irb::ingest {

namespace {

const std::set<std::string>& auxiliaries() {
    static const std::set<std::string> verbs = {
        "is",   "am",    "are",  "was",   "were",  "be",    "been", "being",
        "has",  "have",  "had",  "does",  "do",    "did",   "will", "would",
        "can",  "could", "may",  "might", "must",  "shall", "should"};
    return verbs;
}

const std::set<std::string>& irregular_pasts() {
    static const std::set<std::string> verbs = {
        "became", "began",   "broke",  "brought", "built", "bought", "came",
        "chose",  "drew",    "drove",  "fell",    "felt",  "found",  "gave",
        "grew",   "held",    "kept",   "knew",    "led",   "left",   "lost",
        "made",   "met",     "paid",   "ran",     "rose",  "said",   "saw",
        "sold",   "sent",    "set",    "sat",     "spent", "stood",  "took",
        "taught", "thought", "told",   "understood", "went", "won",  "wrote",
        "wore",   "threw",   "sang",   "sank",    "spoke", "swam",   "put",
        "read",   "beat",    "cut",    "hit",     "let",   "shut",   "cost"};
    return verbs;
}

const std::set<std::string>& function_words() {
    static const std::set<std::string> words = {
        "the", "a",   "an",  "of",  "in",  "on",  "at",  "to",  "for", "by",
        "with", "and", "or",  "but", "as",  "from", "into", "over", "under",
        "their", "his", "her", "its", "our", "your", "my", "this", "that",
        "these", "those", "not", "also", "both", "all", "some", "any"};
    return words;
}

bool looks_like_regular_past(const std::string& lower) {
    if (lower.size() < 4) return false;
    if (!util::ends_with(lower, "ed")) return false;
    // Exclude common -ed nouns/adjectives that never act as main verbs here.
    static const std::set<std::string> non_verbs = {"hundred", "red", "united",
                                                    "sacred", "naked", "wicked"};
    return !non_verbs.count(lower);
}

bool looks_like_present_s(const std::string& lower) {
    static const std::set<std::string> verbs = {
        "includes",  "contains", "features", "serves",  "represents",
        "remains",   "holds",    "marks",    "plays",   "means",
        "makes",     "takes",    "gives",    "provides", "describes",
        "shows",     "covers",   "spans",    "hosts",    "forms",
        "stands",    "lies",     "runs",     "uses",     "consists",
        "comprises", "carries",  "leads",    "owns",     "becomes"};
    return verbs.count(lower) > 0;
}

const std::set<std::string>& plain_verbs() {
    static const std::set<std::string> verbs = {
        "include", "contain", "feature", "serve",  "represent", "remain",
        "hold",    "mark",    "play",    "mean",   "make",      "take",
        "give",    "provide", "describe", "show",  "cover",     "span",
        "host",    "form",    "stand",   "lie",    "run",       "use",
        "consist", "comprise", "carry",  "lead",   "own",       "become",
        "win",     "write",   "score",   "release", "announce", "begin"};
    return verbs;
}

bool is_word(const text::Token& t) {
    return std::isalnum(static_cast<unsigned char>(t.text[0])) ||
           static_cast<unsigned char>(t.text[0]) >= 0x80;
}

}  // namespace

std::vector<DepToken> HeuristicTagger::parse(const std::string& sentence) const {
    auto tokens = text::default_tokenizer().tokenize(sentence);
    std::vector<DepToken> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back({t.text, is_word(t) ? "dep" : "punct"});

    // Locate the main verb: first token matching a verb cue, skipping the
    // sentence-initial token (which cannot be the root of a citing claim).
    std::size_t root = out.size();
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i].dep != "dep") continue;
        std::string lower = util::to_lower(out[i].text);
        if (auxiliaries().count(lower) || irregular_pasts().count(lower) ||
            plain_verbs().count(lower) || looks_like_present_s(lower) ||
            looks_like_regular_past(lower)) {
            root = i;
            break;
        }
    }
    if (root >= out.size()) return out;
    out[root].dep = "root";

    // Subject: nearest preceding content word.
    for (std::size_t i = root; i-- > 0;) {
        if (out[i].dep != "dep") continue;
        if (function_words().count(util::to_lower(out[i].text))) continue;
        out[i].dep = "nsubj";
        break;
    }
    // Object / complement: first following content word.
    for (std::size_t i = root + 1; i < out.size(); ++i) {
        if (out[i].dep != "dep") continue;
        if (function_words().count(util::to_lower(out[i].text)) && i + 1 < out.size()) continue;
        out[i].dep = "obj";
        break;
    }
    return out;
}

std::unique_ptr<SyntacticTagger> make_tagger(const std::string& name) {
    if (name == "heuristic" || name.empty()) return std::make_unique<HeuristicTagger>();
    throw std::runtime_error("syntactic tagger '" + name +
                             "' is not available; the completeness filter cannot run without it");
}

bool is_complete_sentence(const std::string& sentence, const SyntacticTagger& tagger) {
    auto parse = tagger.parse(sentence);
    bool subj = false, root = false, obj = false;
    for (const auto& t : parse) {
        if (t.dep == "nsubj") subj = true;
        else if (t.dep == "root") root = true;
        else if (t.dep == "obj") obj = true;
    }
    return subj && root && obj;
}

std::vector<CitingSentence> filter_syntactic_completeness(
    std::vector<CitingSentence> sentences, const SyntacticTagger& tagger) {
    std::vector<CitingSentence> kept;
    kept.reserve(sentences.size());
    for (auto& s : sentences) {
        if (is_complete_sentence(s.sentence_text, tagger)) kept.push_back(std::move(s));
    }
    return kept;
}

}  // namespace irb::ingest
