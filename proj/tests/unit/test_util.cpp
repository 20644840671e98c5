#include <doctest.h>

#include <nlohmann/json.hpp>

#include "irb/util/dates.hpp"
#include "irb/util/fs.hpp"
#include "irb/util/hash.hpp"
#include "irb/util/strings.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

using namespace irb;

TEST_CASE("sha256 matches the published test vectors") {
    // FIPS 180-2 vectors.
    CHECK(util::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(util::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(util::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("doc ids are a stable function of the url") {
    std::string id = util::doc_id_for_url("https://evidence.test/a.html");
    CHECK(id == "d" + util::sha256_hex("https://evidence.test/a.html").substr(0, 16));
    CHECK(id == util::doc_id_for_url("https://evidence.test/a.html"));
    CHECK(id != util::doc_id_for_url("https://evidence.test/b.html"));
}

TEST_CASE("fnv1a64 matches the reference constants") {
    CHECK(util::fnv1a64("") == 14695981039346656037ULL);   // offset basis
    CHECK(util::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(util::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("string helpers") {
    CHECK(util::trim("  x \t\n") == "x");
    CHECK(util::trim("") == "");
    CHECK(util::to_lower("AbC-Д") == "abc-Д");  // ASCII only; bytes >= 0x80 untouched
    CHECK(util::starts_with("generated question", "gen"));
    CHECK_FALSE(util::starts_with("gen", "generated"));
    CHECK(util::ends_with("run.log.jsonl", ".jsonl"));
    CHECK(util::contains_ci("The Quick Fox", "quick f"));
    CHECK_FALSE(util::contains_ci("The Quick Fox", "quicker"));
    CHECK(util::split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(util::join({"a", "b", "c"}, ", ") == "a, b, c");
    CHECK(util::replace_all("a-b-c", "-", "+") == "a+b+c");
    CHECK(util::normalize_ws("  a \t b\n\nc ") == "a b c");
}

TEST_CASE("content_words folds case and splits on punctuation") {
    CHECK(util::content_words("Volga Line carried 2.5 million passengers") ==
          std::vector<std::string>{"volga", "line", "carried", "2", "5", "million",
                                   "passengers"});
    CHECK(util::content_words("...") == std::vector<std::string>{});
    // Bytes >= 0x80 count as word characters, so UTF-8 words survive whole.
    CHECK(util::content_words("Пермь city") == std::vector<std::string>{"Пермь", "city"});
}

TEST_CASE("edit distance and similarity") {
    CHECK(util::edit_distance("kitten", "sitting") == 3);
    CHECK(util::edit_distance("", "abc") == 3);
    CHECK(util::edit_distance("same", "same") == 0);
    CHECK(util::similarity("", "") == doctest::Approx(1.0));
    CHECK(util::similarity("abcd", "abcd") == doctest::Approx(1.0));
    CHECK(util::similarity("abcd", "abce") == doctest::Approx(0.75));
}

TEST_CASE("date parsing accepts the documented formats") {
    auto d = util::parse_date("2024-11-30");
    REQUIRE(d.has_value());
    CHECK(*d == util::Date{2024, 11, 30});
    CHECK(util::parse_date("30 November 2024") == util::Date{2024, 11, 30});
    CHECK(util::parse_date("30 Nov 2024") == util::Date{2024, 11, 30});
    CHECK(util::parse_date("November 30, 2024") == util::Date{2024, 11, 30});
    CHECK(util::parse_date("Nov 30, 2024") == util::Date{2024, 11, 30});
    CHECK(util::parse_date("nOv 30, 2024") == util::Date{2024, 11, 30});
    CHECK(util::parse_iso_date("2024-11-30T08:15:00Z") == util::Date{2024, 11, 30});

    CHECK_FALSE(util::parse_date("the other day").has_value());
    CHECK_FALSE(util::parse_date("2024-13-01").has_value());
    CHECK_FALSE(util::parse_date("30 Smarch 2024").has_value());
    CHECK_FALSE(util::parse_date("2024").has_value());
    CHECK_FALSE(util::parse_iso_date("2024-2-3").has_value());
}

TEST_CASE("date validity and formatting") {
    CHECK(util::Date{2024, 2, 29}.valid());       // leap year
    CHECK_FALSE(util::Date{2023, 2, 29}.valid());
    CHECK_FALSE(util::Date{2024, 0, 1}.valid());
    CHECK_FALSE(util::Date{2024, 4, 31}.valid());
    CHECK(util::Date{987, 3, 4}.iso() == "0987-03-04");
}

TEST_CASE("months_between: hand cases") {
    CHECK(util::months_between({2024, 11, 30}, {2025, 9, 29}) == 9);
    CHECK(util::months_between({2024, 9, 29}, {2025, 9, 29}) == 12);
    CHECK(util::months_between({2025, 9, 29}, {2025, 9, 29}) == 0);
    CHECK(util::months_between({2025, 9, 1}, {2025, 9, 29}) == 0);
    // Day-level remainders floor: the 31st never recurred.
    CHECK(util::months_between({2023, 1, 31}, {2023, 2, 28}) == 0);
    CHECK(util::months_between({2023, 1, 31}, {2023, 3, 31}) == 2);
}

TEST_CASE("months_between agrees with the walking oracle on random pairs") {
    irb_test::TestRng rng(0x5eed01);
    for (int i = 0; i < 300; ++i) {
        util::Date ref{rng.range(2000, 2030), rng.range(1, 12), 1};
        ref.day = rng.range(1, 28);
        int back_days = rng.range(0, 4000);
        // Build d by walking back whole months then days, keeping it valid.
        util::Date d = ref;
        int back_months = back_days / 30;
        d.month -= back_months % 12;
        d.year -= back_months / 12;
        if (d.month < 1) {
            d.month += 12;
            d.year -= 1;
        }
        d.day = rng.range(1, 28);
        if (!(d < ref || d == ref)) continue;
        CAPTURE(d.iso());
        CAPTURE(ref.iso());
        CHECK(util::months_between(d, ref) == irb_test::months_oracle(d, ref));
    }
    // Month-end edges specifically (days 28..31 against short months).
    for (int day = 28; day <= 31; ++day) {
        util::Date d{2024, 1, day};
        for (int rd = 27; rd <= 30; ++rd) {
            util::Date ref{2024, 4, rd};
            CHECK(util::months_between(d, ref) == irb_test::months_oracle(d, ref));
        }
    }
}

TEST_CASE("file helpers round-trip and stay atomic-friendly") {
    irb_test::TempDir tmp("util-fs");
    auto p = tmp.path() / "nested" / "file.txt";
    util::write_file_atomic(p, "payload\n");
    CHECK(util::read_file(p) == "payload\n");
    CHECK(util::read_file_if_exists(p).value() == "payload\n");
    CHECK_FALSE(util::read_file_if_exists(tmp.path() / "absent").has_value());
    CHECK_THROWS_AS((void)util::read_file(tmp.path() / "absent"), util::Error);

    // Overwrite leaves no temp litter behind.
    util::write_file_atomic(p, "second");
    CHECK(util::read_file(p) == "second");
    std::size_t entries = 0;
    for (auto const& e : std::filesystem::directory_iterator(p.parent_path())) {
        (void)e;
        ++entries;
    }
    CHECK(entries == 1);
}

TEST_CASE("jsonl read/write/append round-trip") {
    irb_test::TempDir tmp("util-jsonl");
    auto p = tmp.path() / "rows.jsonl";
    std::vector<nlohmann::json> rows = {{{"a", 1}}, {{"b", "x"}}, {{"c", nlohmann::json::array({1, 2})}}};
    util::write_jsonl(p, rows);
    CHECK(util::read_jsonl(p) == rows);
    util::append_jsonl(p, {{"d", true}});
    auto all = util::read_jsonl(p);
    REQUIRE(all.size() == 4);
    CHECK(all.back() == nlohmann::json{{"d", true}});
}
