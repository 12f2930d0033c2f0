#include <doctest.h>

#include <fstream>
#include <random>

#include "../support/oracles.hpp"
#include "veracity/corpus/lexicon.hpp"
#include "veracity/corpus/records.hpp"
#include "veracity/corpus/text.hpp"
#include "veracity/error.hpp"

using namespace veracity;
using namespace veracity::corpus;

namespace {

std::string words(std::size_t n, const std::string& stem = "w") {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + stem + std::to_string(i);
    return s;
}

std::string non_space(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

}  // namespace

TEST_CASE("segment_paragraphs packs greedily") {
    auto counts = [](const std::vector<Paragraph>& ps) {
        std::vector<std::size_t> c;
        for (const auto& p : ps) c.push_back(p.token_count);
        return c;
    };
    CHECK(counts(segment_paragraphs({"d", "", "", words(650)}, 300)) == std::vector<std::size_t>{300, 300, 50});
    CHECK(counts(segment_paragraphs({"d", "", "", words(300)}, 300)) == std::vector<std::size_t>{300});
    CHECK(segment_paragraphs({"d", "", "", "   "}, 300).empty());
    CHECK_THROWS_AS(segment_paragraphs({"d", "", "", "a"}, 0), InvalidArgument);

    auto ps = segment_paragraphs({"doc", "", "", words(7)}, 3);
    REQUIRE(ps.size() == 3);
    CHECK(ps[2].ordinal == 2);
    CHECK(ps[1].id() == "doc#1");
}

TEST_CASE("segment_paragraphs round-trips random documents") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> len(0, 900), max_tokens(1, 320), gap(1, 4);
    for (int doc = 0; doc < 10; ++doc) {
        std::string text;
        const std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i) text += std::string(gap(rng), i % 7 ? ' ' : '\n') + "t" + std::to_string(i % 13);
        const std::size_t m = max_tokens(rng);
        auto ps = segment_paragraphs({"d", "", "", text}, m);
        std::vector<std::string> joined;
        std::size_t total = 0;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            CHECK(ps[i].token_count <= m);
            if (i + 1 < ps.size()) CHECK(ps[i].token_count == m);
            total += ps[i].token_count;
            for (auto& w : whitespace_tokens(ps[i].text)) joined.push_back(w);
        }
        CHECK(joined == whitespace_tokens(text));
        CHECK(total == whitespace_tokens(text).size());
    }
}

TEST_CASE("split_sentences") {
    const std::set<std::string> none;
    const std::set<std::string> dr{"dr."};
    CHECK(split_sentences("A. B.", none) == std::vector<std::string>{"A.", "B."});
    CHECK(split_sentences("Dr. Smith spoke.", dr) == std::vector<std::string>{"Dr. Smith spoke."});
    CHECK(split_sentences("It rose 2.5 percent! Really? Yes", none) ==
          std::vector<std::string>{"It rose 2.5 percent!", "Really?", "Yes"});
    CHECK(split_sentences("first line\n\nsecond line", none) == std::vector<std::string>{"first line", "second line"});
    CHECK(split_sentences("He said \"stop.\" Then left.", none) ==
          std::vector<std::string>{"He said \"stop.\"", "Then left."});
    CHECK(split_sentences("", none).empty());
}

TEST_CASE("split_sentences preserves non-whitespace characters") {
    std::mt19937_64 rng(11);
    const std::string alphabet = "abc .!?\n\"')x1";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(0, 200);
    for (int i = 0; i < 500; ++i) {
        std::string text;
        const std::size_t n = len(rng);
        for (std::size_t j = 0; j < n; ++j) text += alphabet[pick(rng)];
        std::string joined;
        for (const auto& s : split_sentences(text, {"x."})) {
            CHECK(!s.empty());
            joined += s;
        }
        CHECK(non_space(joined) == non_space(text));
    }
}

TEST_CASE("categorize_claim") {
    const auto& lex = Lexicons::defaults();
    auto types = [&](const std::string& text, const EntityTagger& tagger = nullptr) {
        return categorize_claim({"c", text}, lex, tagger).types;
    };
    using K = ClaimType::Kind;
    CHECK(types("Can vitamin D cure COVID-19?") == std::set<ClaimType>{{K::Question, {}}});
    CHECK(types("Whiskey and honey cure coronavirus.").empty());

    EntityTagger tagger = [](std::string_view) {
        return std::vector<Entity>{{"Nancy Pelosi", "PERSON"}, {"Wuhan", "GPE"}, {"November 2019", "DATE"}};
    };
    auto tagged = types("Nancy Pelosi visited Wuhan, China, in November 2019, just a month before the COVID-19 "
                        "outbreak there.",
                        tagger);
    CHECK(tagged.contains({K::Numerical, {}}));
    CHECK(tagged.contains(ClaimType::named_entity(EntityKind::Person)));
    CHECK(tagged.contains(ClaimType::named_entity(EntityKind::Gpe)));
    CHECK(tagged.size() == 3);

    CHECK(types("Video shows a tweet about 5G").contains({K::Multimodal, {}}));
    CHECK(types("Video shows a tweet about 5G").contains({K::SocialMedia, {}}));

    EntityTagger broken = [](std::string_view) -> std::vector<Entity> { throw std::runtime_error("down"); };
    auto partial = categorize_claim({"c", "Who sent 3 tweets?"}, lex, broken);
    CHECK(partial.partial);
    CHECK(partial.types.contains({K::Question, {}}));
    CHECK(partial.types == categorize_claim({"c", "Who sent 3 tweets?"}, lex, broken).types);
}

TEST_CASE("claim loaders") {
    const auto dir = oracle::temp_dir("corpus");
    SUBCASE("empty file") {
        std::ofstream(dir / "empty.jsonl");
        CHECK(load_claims(dir / "empty.jsonl", ClaimFormat::Jsonl).empty());
    }
    SUBCASE("round trip") {
        ClaimRecord a{"c1", "Garlic cures \"flu\", really", Label::True, "snopes", "panacea",
                      {{ClaimType::Kind::Question, {}}, ClaimType::named_entity(EntityKind::Organization)}, "doc-1"};
        ClaimRecord b{"c2", "Line\nbreak, comma", Label::False, "", "", {}, std::nullopt};
        for (auto format : {ClaimFormat::Jsonl, ClaimFormat::Csv}) {
            const auto path = dir / (format == ClaimFormat::Csv ? "c.csv" : "c.jsonl");
            save_claims(path, {a, b}, format);
            CHECK(load_claims(path, format) == std::vector<ClaimRecord>{a, b});
        }
    }
    SUBCASE("nuanced labels and duplicates are rejected with row numbers") {
        std::ofstream(dir / "bad.jsonl") << R"({"id":"c1","text":"x","label":"True","claim_source":"s","origin_dataset":"o"})" << '\n'
                                         << R"({"id":"c2","text":"y","label":"Misleading","claim_source":"s","origin_dataset":"o"})" << '\n'
                                         << R"({"id":"c1","text":"z","label":"False","claim_source":"s","origin_dataset":"o"})" << '\n';
        try {
            load_claims(dir / "bad.jsonl", ClaimFormat::Jsonl);
            FAIL("expected RecordError");
        } catch (const RecordError& e) {
            REQUIRE(e.issues().size() == 2);
            CHECK(e.issues()[0].row == 2);
            CHECK(e.issues()[0].field == "label");
            CHECK(e.issues()[1].row == 3);
        }
    }
    SUBCASE("documents") {
        std::vector<DocumentRecord> docs{{"d1", "http://a", "a", "text one"}, {"d2", "http://b", "b", "two"}};
        save_documents(dir / "d.jsonl", docs);
        CHECK(load_documents(dir / "d.jsonl") == docs);
        std::ofstream(dir / "e.jsonl") << R"({"id":"d1","url":"u","domain":"x","text":""})" << '\n';
        CHECK_THROWS_AS(load_documents(dir / "e.jsonl"), RecordError);
    }
    CHECK_THROWS_AS(load_claims(dir / "missing.jsonl", ClaimFormat::Jsonl), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("label and type parsing") {
    CHECK(parse_label("True") == Label::True);
    CHECK(!parse_label("Misleading"));
    CHECK(parse_entity_kind("ORG") == EntityKind::Organization);
    CHECK(parse_entity_kind("FAC") == EntityKind::Facility);
    CHECK(!parse_entity_kind("DATE"));
    auto t = parse_claim_type("NamedEntity:PERSON");
    REQUIRE(t);
    CHECK(to_string(*t) == "NamedEntity:PERSON");
    CHECK(!parse_claim_type("Sarcasm"));
}
