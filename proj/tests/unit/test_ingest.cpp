#include <doctest.h>

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "irb/ingest/article.hpp"
#include "irb/ingest/citing.hpp"
#include "irb/ingest/serialize.hpp"
#include "irb/ingest/wikitext.hpp"
#include "irb/util/fs.hpp"

using irb::ingest::ArticleMeta;
using irb::ingest::CitingSentence;
using irb::ingest::parse_article;
using irb::ingest::RefMarker;
using irb::ingest::RuleSentenceSplitter;
using irb::ingest::strip_inline_markup;

namespace {

ArticleMeta kestrel_meta() {
    ArticleMeta meta;
    meta.page_id = "1001";
    meta.title = "Kestrel Aero";
    meta.last_updated = {2024, 12, 20};
    meta.cohort_year = 2024;
    return meta;
}

irb::ingest::ArticleSource load_kestrel() {
    auto wikitext =
        irb::util::read_file(irb_test::fixtures_dir() / "articles" / "kestrel_aero.wiki");
    return parse_article(wikitext, kestrel_meta());
}

}  // namespace

TEST_CASE("strip_inline_markup: bold, links, tags, entities") {
    CHECK(strip_inline_markup("'''Kestrel Aero''' is a [[regional aircraft|manufacturer]]") ==
          "Kestrel Aero is a manufacturer");
    CHECK(strip_inline_markup("in [[Brackenfield]]") == "in Brackenfield");
    CHECK(strip_inline_markup("''italic'' stays") == "italic stays");
    CHECK(strip_inline_markup("[[File:map.png|thumb|A map]]") == "");
    CHECK(strip_inline_markup("[https://x.test/page Label text]") == "Label text");
    CHECK(strip_inline_markup("a <span class=\"x\">b</span> c") == "a b c");
    CHECK(strip_inline_markup("5&nbsp;km &amp; more") == "5 km & more");
}

TEST_CASE("parse_article: fixture article sections, abstract, and markers") {
    auto article = load_kestrel();
    CHECK(article.page_id == "1001");
    CHECK(article.title == "Kestrel Aero");
    CHECK(article.cohort_year == 2024);
    CHECK(article.parse_warnings.empty());

    CHECK(article.abstract ==
          "Kestrel Aero is a regional aircraft manufacturer headquartered in Brackenfield. "
          "The company designs short-haul turboprop aircraft for island and mountain routes.");
    CHECK(article.section_headers ==
          std::vector<std::string>{"History", "Fleet", "References"});

    REQUIRE(article.sections.size() == 3);  // the empty References section is dropped
    CHECK(article.sections[0].header_path.empty());
    CHECK(article.sections[0].markers.empty());
    CHECK(article.sections[1].header_path == std::vector<std::string>{"History"});
    CHECK(article.sections[2].header_path == std::vector<std::string>{"Fleet"});
    CHECK(article.sections[2].markers.empty());

    const auto& history = article.sections[1];
    REQUIRE(history.markers.size() == 2);
    CHECK(history.markers[0].urls ==
          std::vector<std::string>{"https://evidence.test/kestrel-founding.html"});
    CHECK(history.markers[1].urls ==
          std::vector<std::string>{"https://evidence.test/tailwind-2024.html"});
    // Marker offsets point at the character right after the cited span.
    CHECK(history.markers[0].position == history.text.find(" and received"));
    CHECK(history.markers[1].position == history.text.find(" The award ceremony"));
}

TEST_CASE("parse_article: named refs resolve in both directions") {
    const std::string wikitext =
        "Alpha fact.<ref name=\"a\">{{cite web |url=https://evidence.test/a.html}}</ref> "
        "Early reuse.<ref name=\"b\" /> "
        "Beta fact.<ref name=\"a\" /> "
        "Late definition.<ref name=\"b\">{{cite web |url=https://evidence.test/b.html}}</ref>\n";
    ArticleMeta meta;
    meta.page_id = "42";
    meta.title = "T";
    meta.last_updated = {2024, 1, 1};
    auto article = parse_article(wikitext, meta);
    REQUIRE(article.sections.size() == 1);
    const auto& markers = article.sections[0].markers;
    REQUIRE(markers.size() == 4);
    CHECK(markers[0].urls == std::vector<std::string>{"https://evidence.test/a.html"});
    CHECK(markers[1].urls == std::vector<std::string>{"https://evidence.test/b.html"});
    CHECK(markers[2].urls == std::vector<std::string>{"https://evidence.test/a.html"});
    CHECK(markers[3].urls == std::vector<std::string>{"https://evidence.test/b.html"});
}

TEST_CASE("parse_article: refs without URLs are dropped, bare URLs kept") {
    const std::string wikitext =
        "Cited claim.<ref>https://evidence.test/raw.html</ref> "
        "Bookish claim.<ref>Smith, A History of Things, 1990.</ref>\n";
    ArticleMeta meta;
    meta.page_id = "7";
    meta.title = "T";
    meta.last_updated = {2024, 1, 1};
    auto article = parse_article(wikitext, meta);
    REQUIRE(article.sections.size() == 1);
    REQUIRE(article.sections[0].markers.size() == 1);
    CHECK(article.sections[0].markers[0].urls ==
          std::vector<std::string>{"https://evidence.test/raw.html"});
}

TEST_CASE("parse_article: unclosed template is skipped with a warning") {
    const std::string wikitext = "{{broken infobox\nGood line survives.\n";
    ArticleMeta meta;
    meta.page_id = "9";
    meta.title = "T";
    meta.last_updated = {2024, 1, 1};
    auto article = parse_article(wikitext, meta);
    REQUIRE(article.parse_warnings.size() == 1);
    REQUIRE(article.sections.size() == 1);
    CHECK(article.sections[0].text == "Good line survives.");
}

TEST_CASE("sentence splitter: basic split with faithful offsets") {
    const std::string text = "First things came early. Second things came later.";
    auto spans = RuleSentenceSplitter().split(text, {});
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].text == "First things came early.");
    CHECK(spans[1].text == "Second things came later.");
    for (const auto& s : spans) {
        CHECK(text.substr(s.begin, s.end - s.begin) == s.text);
    }
}

TEST_CASE("sentence splitter: abbreviation, initial, decimal, ellipsis guards") {
    RuleSentenceSplitter splitter;
    CHECK(splitter.split("Dr. Smith arrived at noon. He left at dusk.", {}).size() == 2);
    CHECK(splitter.split("J. K. Rowling wrote it. Fans cheered loudly.", {}).size() == 2);
    CHECK(splitter.split("Prices rose 3.5 percent. Then they fell again.", {}).size() == 2);
    CHECK(splitter.split("They waited... Then came dawn.", {}).size() == 2);
    CHECK(splitter.split("The co. was sold in May. It moved north.", {}).size() == 2);
}

TEST_CASE("sentence splitter: paragraph breaks always split") {
    auto spans = RuleSentenceSplitter().split("alpha beta gamma\n\ndelta epsilon", {});
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].text == "alpha beta gamma");
    CHECK(spans[1].text == "delta epsilon");
}

TEST_CASE("sentence splitter: markers bind to their sentence") {
    const std::string text = "Alpha beta gamma. Delta epsilon zeta.";
    std::vector<RefMarker> markers;
    markers.push_back({17, {"u-end"}});      // right after the first period
    markers.push_back({24, {"u-mid"}});      // inside the second sentence
    markers.push_back({0, {"u-forward"}});   // at the very front binds forward
    auto spans = RuleSentenceSplitter().split(text, markers);
    REQUIRE(spans.size() == 2);
    REQUIRE(spans[0].markers.size() == 2);
    CHECK(spans[0].markers[0].urls == std::vector<std::string>{"u-forward"});
    CHECK(spans[0].markers[1].position == spans[0].text.size());
    CHECK(spans[0].markers[1].urls == std::vector<std::string>{"u-end"});
    REQUIRE(spans[1].markers.size() == 1);
    CHECK(spans[1].markers[0].urls == std::vector<std::string>{"u-mid"});
    CHECK(spans[1].markers[0].position == 6);  // rebased: right before "epsilon"
    CHECK(spans[1].text.substr(spans[1].markers[0].position, 7) == "epsilon");
}

TEST_CASE("sentence splitter: randomized partition and marker conservation") {
    static const std::vector<std::string> bank = {
        "Alice met the council at dawn.", "The tower fell in 1901.",
        "Storms often batter the coast.", "He sold the farm to a rival.",
        "Maps of the region were redrawn.", "Two ships left the harbour.",
        "The charter was signed by envoys.", "Wolves returned to the valley.",
    };
    irb_test::TestRng rng(0x1461u);
    RuleSentenceSplitter splitter;
    for (int iter = 0; iter < 100; ++iter) {
        int n = static_cast<int>(rng.range(1, 6));
        std::string text;
        std::vector<std::size_t> ends;
        std::vector<std::string> picked;
        for (int i = 0; i < n; ++i) {
            if (i) text += ' ';
            picked.push_back(bank[rng.below(bank.size())]);
            text += picked.back();
            ends.push_back(text.size());
        }
        std::vector<RefMarker> markers;
        std::vector<int> want_count(n, 0);
        for (int i = 0; i < n; ++i) {
            if (rng.chance(0.6)) {
                markers.push_back({ends[i], {"u" + std::to_string(i)}});
                want_count[i] += 1;
            }
            if (rng.chance(0.3)) {
                markers.push_back({ends[i] - 4, {"m" + std::to_string(i)}});
                want_count[i] += 1;
            }
        }
        auto spans = splitter.split(text, markers);
        REQUIRE(spans.size() == static_cast<std::size_t>(n));
        std::size_t total = 0;
        for (int i = 0; i < n; ++i) {
            CHECK(spans[i].text == picked[i]);
            CHECK(text.substr(spans[i].begin, spans[i].end - spans[i].begin) == picked[i]);
            if (i) CHECK(spans[i].begin >= spans[i - 1].end);
            CHECK(spans[i].markers.size() == static_cast<std::size_t>(want_count[i]));
            total += spans[i].markers.size();
        }
        CHECK(total == markers.size());
    }
}

TEST_CASE("extract_citing_sentences: fixture yields one two-segment sentence") {
    auto article = load_kestrel();
    auto citing = irb::ingest::extract_citing_sentences(article, RuleSentenceSplitter());
    REQUIRE(citing.size() == 1);
    const auto& cs = citing[0];
    CHECK(cs.sentence_text ==
          "Marta Vance founded Kestrel Aero in 2004 and received the Tailwind Prize "
          "on 30 November 2024.");
    CHECK(cs.page_id == "1001");
    CHECK(cs.cohort_year == 2024);
    CHECK(cs.last_updated.iso() == "2024-12-20");
    CHECK(cs.context.title == "Kestrel Aero");
    CHECK(cs.context.header_path == std::vector<std::string>{"History"});
    REQUIRE(cs.context.before.size() == 1);
    CHECK(cs.context.before[0] == "The company grew out of a small gliding workshop.");
    REQUIRE(cs.context.after.size() == 1);
    CHECK(cs.context.after[0] ==
          "The award ceremony was held in the company's original hangar.");

    REQUIRE(cs.segments.size() == 2);
    CHECK(cs.segments[0].first == "Marta Vance founded Kestrel Aero in 2004");
    CHECK(cs.segments[0].second.urls ==
          std::vector<std::string>{"https://evidence.test/kestrel-founding.html"});
    CHECK(cs.segments[1].first ==
          "and received the Tailwind Prize on 30 November 2024.");
    CHECK(cs.segments[1].second.urls ==
          std::vector<std::string>{"https://evidence.test/tailwind-2024.html"});
}

TEST_CASE("segment_by_citations: one group absorbs the whole sentence") {
    CitingSentence cs;
    cs.sentence_text = "The envoy signed the charter at the summer council.";
    irb::ingest::CitationGroup g;
    g.position = cs.sentence_text.find(" at the");
    g.urls = {"u1"};
    cs.segments.emplace_back("", g);
    auto segments = irb::ingest::segment_by_citations(cs);
    REQUIRE(segments.size() == 1);
    CHECK(segments[0].first == cs.sentence_text);
}

TEST_CASE("segment_by_citations: segments partition the sentence") {
    CitingSentence cs;
    cs.sentence_text = "Part one holds, part two follows, part three closes.";
    irb::ingest::CitationGroup g1{{"a"}, cs.sentence_text.find(", part two")};
    irb::ingest::CitationGroup g2{{"b"}, cs.sentence_text.find(", part three")};
    irb::ingest::CitationGroup g3{{"c"}, cs.sentence_text.size()};
    cs.segments = {{"", g1}, {"", g2}, {"", g3}};
    auto segments = irb::ingest::segment_by_citations(cs);
    REQUIRE(segments.size() == 3);
    CHECK(segments[0].first == "Part one holds");
    CHECK(segments[1].first == ", part two follows");
    CHECK(segments[2].first == ", part three closes.");
}

TEST_CASE("citing sentence JSON round-trip") {
    auto article = load_kestrel();
    auto citing = irb::ingest::extract_citing_sentences(article, RuleSentenceSplitter());
    REQUIRE(citing.size() == 1);
    auto j = irb::ingest::to_json(citing[0]);
    auto back = irb::ingest::citing_sentence_from_json(j);
    CHECK(back.sentence_text == citing[0].sentence_text);
    CHECK(back.page_id == citing[0].page_id);
    CHECK(back.cohort_year == citing[0].cohort_year);
    CHECK(back.last_updated.iso() == citing[0].last_updated.iso());
    CHECK(back.context.title == citing[0].context.title);
    CHECK(back.context.abstract == citing[0].context.abstract);
    CHECK(back.context.before == citing[0].context.before);
    CHECK(back.context.after == citing[0].context.after);
    CHECK(back.context.header_path == citing[0].context.header_path);
    REQUIRE(back.segments.size() == citing[0].segments.size());
    for (std::size_t i = 0; i < back.segments.size(); ++i) {
        CHECK(back.segments[i].first == citing[0].segments[i].first);
        CHECK(back.segments[i].second.urls == citing[0].segments[i].second.urls);
        CHECK(back.segments[i].second.position == citing[0].segments[i].second.position);
    }
}
