#include <doctest.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "helpers.hpp"
#include "irb/evidence/document.hpp"
#include "irb/ingest/citing.hpp"
#include "irb/ingest/syntax.hpp"
#include "irb/text/tokenizer.hpp"

using irb::evidence::chunk_document;
using irb::evidence::EvidenceDocument;
using irb::evidence::kChunkTokenLimit;
using irb::text::default_tokenizer;
using irb::text::index_terms;
using irb::text::Token;

namespace {

// Independent restatement of the tokenizer contract: maximal runs of
// alphanumeric-or-high bytes are words, every other non-whitespace byte is a
// single punctuation token, whitespace never appears.
std::vector<std::string> oracle_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    auto wordish = [](unsigned char c) {
        return std::isalnum(c) != 0 || c >= 0x80;
    };
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (wordish(c)) {
            std::size_t begin = i;
            while (i < text.size() && wordish(static_cast<unsigned char>(text[i]))) ++i;
            out.emplace_back(text.substr(begin, i - begin));
        } else {
            out.emplace_back(text.substr(i, 1));
            ++i;
        }
    }
    return out;
}

std::vector<std::string> token_texts(const std::vector<Token>& tokens) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(t.text);
    return out;
}

std::string random_text(irb_test::TestRng& rng) {
    static const std::vector<std::string> pieces = {
        "alpha", "Beta", "carbon14", "x",  "Ω",  "živa", "река", "3.5", "—",
        "(",     ")",    ",",        ".",  "!",  "?",    ";",    "\"",  "'",
        "a-b",   "C++",  "über",     "42", "№7", "  ",   "\n",   "\t",  " "};
    std::string text;
    int n = static_cast<int>(rng.range(0, 40));
    for (int i = 0; i < n; ++i) {
        text += pieces[rng.below(pieces.size())];
        if (rng.chance(0.6)) text += ' ';
    }
    return text;
}

EvidenceDocument doc_with_words(int words) {
    EvidenceDocument doc;
    doc.doc_id = "dtest";
    doc.url = "https://example.org/x";
    doc.fetch_status = irb::evidence::FetchStatus::ok;
    for (int i = 0; i < words; ++i) {
        if (i) doc.content += ' ';
        doc.content += "w" + std::to_string(i);
    }
    return doc;
}

}  // namespace

TEST_CASE("tokenizer: words, punctuation, and byte offsets") {
    const std::string text = "Hello, world! 3.5 km";
    auto tokens = default_tokenizer().tokenize(text);
    CHECK(token_texts(tokens) ==
          std::vector<std::string>{"Hello", ",", "world", "!", "3", ".", "5", "km"});
    for (const auto& t : tokens) {
        REQUIRE(t.end > t.begin);
        CHECK(text.substr(t.begin, t.end - t.begin) == t.text);
    }
}

TEST_CASE("tokenizer: UTF-8 words stay whole") {
    auto tokens = default_tokenizer().tokenize("Волга впадает в Каспийское море.");
    CHECK(token_texts(tokens) == std::vector<std::string>{"Волга", "впадает", "в",
                                                          "Каспийское", "море", "."});
}

TEST_CASE("tokenizer: empty and whitespace-only input") {
    CHECK(default_tokenizer().tokenize("").empty());
    CHECK(default_tokenizer().tokenize(" \t\n  ").empty());
}

TEST_CASE("tokenizer: matches the documented rule on randomized text") {
    irb_test::TestRng rng(0x70CABu);
    for (int iter = 0; iter < 200; ++iter) {
        std::string text = random_text(rng);
        CAPTURE(text);
        CHECK(token_texts(default_tokenizer().tokenize(text)) == oracle_tokens(text));
    }
}

TEST_CASE("index_terms: lower-cased word tokens only") {
    CHECK(index_terms("The Dog barked!") ==
          std::vector<std::string>{"the", "dog", "barked"});
    CHECK(index_terms("C++ (since 1985)") ==
          std::vector<std::string>{"c", "since", "1985"});
    CHECK(index_terms(".,;!").empty());
}

TEST_CASE("chunking: a short document stays a single chunk") {
    auto chunks = chunk_document(doc_with_words(100));
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].doc_id == "dtest");
    CHECK(chunks[0].chunk_index == 0);
    CHECK(chunks[0].token_count == 100);
}

TEST_CASE("chunking: 1025 tokens split 512/512/1") {
    auto chunks = chunk_document(doc_with_words(1025));
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].token_count == 512);
    CHECK(chunks[1].token_count == 512);
    CHECK(chunks[2].token_count == 1);
    CHECK(chunks[2].text == "w1024");
    for (std::size_t i = 0; i < chunks.size(); ++i)
        CHECK(chunks[i].chunk_index == static_cast<int>(i));
}

TEST_CASE("chunking: empty content produces no chunks") {
    CHECK(chunk_document(doc_with_words(0)).empty());
}

TEST_CASE("chunking: token streams reconstruct the document") {
    irb_test::TestRng rng(0xC4A11u);
    for (int iter = 0; iter < 100; ++iter) {
        EvidenceDocument doc;
        doc.doc_id = "d" + std::to_string(iter);
        int n = static_cast<int>(rng.range(0, 5));
        for (int p = 0; p < n; ++p) doc.content += random_text(rng) + "\n\n";
        // Occasionally force multi-chunk documents.
        if (rng.chance(0.2)) {
            for (int w = 0; w < 1100; ++w) doc.content += " t" + std::to_string(w);
        }
        auto doc_tokens = token_texts(default_tokenizer().tokenize(doc.content));
        auto chunks = chunk_document(doc);

        std::vector<std::string> rebuilt;
        for (const auto& chunk : chunks) {
            CHECK(chunk.token_count <= kChunkTokenLimit);
            auto chunk_tokens = token_texts(default_tokenizer().tokenize(chunk.text));
            CHECK(static_cast<int>(chunk_tokens.size()) == chunk.token_count);
            rebuilt.insert(rebuilt.end(), chunk_tokens.begin(), chunk_tokens.end());
        }
        CHECK(rebuilt == doc_tokens);
    }
}

TEST_CASE("syntax: section-header fragments are incomplete") {
    irb::ingest::HeuristicTagger tagger;
    CHECK_FALSE(irb::ingest::is_complete_sentence("Awards.", tagger));
    CHECK_FALSE(irb::ingest::is_complete_sentence("Early life.", tagger));
    CHECK_FALSE(irb::ingest::is_complete_sentence("In 2004.", tagger));
    CHECK(irb::ingest::is_complete_sentence("Ronaldo scored a penalty.", tagger));
}

TEST_CASE("syntax: heuristic parse labels root, subject, and object") {
    irb::ingest::HeuristicTagger tagger;
    auto parse = tagger.parse("Marta Vance founded Kestrel Aero in 2004.");
    REQUIRE(parse.size() == 8);
    CHECK(parse[1].text == "Vance");
    CHECK(parse[1].dep == "nsubj");
    CHECK(parse[2].text == "founded");
    CHECK(parse[2].dep == "root");
    CHECK(parse[3].text == "Kestrel");
    CHECK(parse[3].dep == "obj");
    CHECK(parse[7].dep == "punct");
}

TEST_CASE("syntax: completeness filter keeps 7 of 10 sentences") {
    const std::vector<std::string> texts = {
        "Ronaldo scored a penalty.",
        "Awards.",
        "The committee announced the winners in March.",
        "She wrote three novels.",
        "Early life.",
        "The bridge spans the river.",
        "Researchers found evidence of early settlement.",
        "See also references.",
        "The album was released in 2019.",
        "He led the expedition to the coast.",
    };
    std::vector<irb::ingest::CitingSentence> sentences;
    for (const auto& t : texts) {
        irb::ingest::CitingSentence s;
        s.sentence_text = t;
        sentences.push_back(std::move(s));
    }
    irb::ingest::HeuristicTagger tagger;
    auto kept = irb::ingest::filter_syntactic_completeness(sentences, tagger);
    REQUIRE(kept.size() == 7);
    CHECK(kept[0].sentence_text == texts[0]);
    CHECK(kept[1].sentence_text == texts[2]);
    CHECK(kept[2].sentence_text == texts[3]);
    CHECK(kept[3].sentence_text == texts[5]);
    CHECK(kept[4].sentence_text == texts[6]);
    CHECK(kept[5].sentence_text == texts[8]);
    CHECK(kept[6].sentence_text == texts[9]);
}

TEST_CASE("syntax: only the heuristic tagger is configured") {
    CHECK(irb::ingest::make_tagger("heuristic") != nullptr);
    CHECK(irb::ingest::make_tagger("") != nullptr);
    CHECK_THROWS(irb::ingest::make_tagger("neural"));
}
