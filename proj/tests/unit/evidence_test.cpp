#include <doctest.h>

#include <random>

#include "veracity/encoder/cache.hpp"
#include "veracity/encoder/client.hpp"
#include "veracity/encoder/hashing_backend.hpp"
#include "veracity/error.hpp"
#include "veracity/evidence/evidence.hpp"

using namespace veracity;
using namespace veracity::evidence;

namespace {

// Unit vectors at a chosen cosine to the claim vector (1, 0).
Embedder fixed_similarity(std::map<std::string, double> sims) {
    return [sims](const std::vector<std::string>& texts) {
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < texts.size(); ++i) {
            if (i == 0) {
                out.push_back({1.0, 0.0});
                continue;
            }
            const double c = sims.at(texts[i]);
            out.push_back({c, std::sqrt(1.0 - c * c)});
        }
        return out;
    };
}

}  // namespace

TEST_CASE("flat top n") {
    std::vector<corpus::DocumentRecord> docs{
        {"d1", "http://one", "one", "Alpha sentence here today. Beta sentence here today."},
        {"d2", "http://two", "two", "Gamma sentence here today. Delta sentence here today."}};
    auto embed = fixed_similarity({{"Alpha sentence here today.", 0.3},
                                   {"Beta sentence here today.", 0.9},
                                   {"Gamma sentence here today.", 0.1},
                                   {"Delta sentence here today.", 0.8}});
    auto set = retrieve_evidence_flat({"c1", "claim"}, docs, 2, embed);
    REQUIRE(set.sentences.size() == 2);
    CHECK(set.sentences[0].text == "Beta sentence here today.");
    CHECK(set.sentences[0].source_url == "http://one");
    CHECK(set.sentences[1].text == "Delta sentence here today.");
    CHECK(set.sentences[1].source_doc_id == "d2");
    CHECK(set.sentences[0].similarity == doctest::Approx(0.9).epsilon(1e-12));

    CHECK(retrieve_evidence_flat({"c1", "claim"}, docs, 10, embed).sentences.size() == 4);
    CHECK(retrieve_evidence_flat({"c1", "claim"}, {}, 3, embed).sentences.empty());
    CHECK_THROWS_AS(retrieve_evidence_flat({"c1", "claim"}, docs, 0, embed), InvalidArgument);

    auto per_doc = retrieve_evidence_per_doc({"c1", "claim"}, docs, 1, embed);
    REQUIRE(per_doc.sentences.size() == 2);
    CHECK(per_doc.sentences[0].source_doc_id == "d1");
    CHECK(per_doc.sentences[1].source_doc_id == "d2");
}

TEST_CASE("short sentences are not candidates") {
    std::vector<corpus::DocumentRecord> docs{{"d", "u", "x", "Yes. This one is long enough."}};
    auto embed = fixed_similarity({{"This one is long enough.", 0.5}});
    auto set = retrieve_evidence_flat({"c", "claim"}, docs, 5, embed);
    REQUIRE(set.sentences.size() == 1);
    CHECK(set.sentences[0].position == 1);
}

TEST_CASE("embedder failures name the stage") {
    std::vector<corpus::DocumentRecord> docs{{"d", "u", "x", "A long enough sentence here."}};
    Embedder broken = [](const std::vector<std::string>&) -> std::vector<std::vector<double>> {
        throw std::runtime_error("down");
    };
    CHECK_THROWS_AS(retrieve_evidence_flat({"c", "claim"}, docs, 1, broken), ServiceError);
    Embedder short_batch = [](const std::vector<std::string>&) { return std::vector<std::vector<double>>{{1.0}}; };
    CHECK_THROWS_AS(retrieve_evidence_flat({"c", "claim"}, docs, 1, short_batch), ServiceError);
}

TEST_CASE("pooled lists are sorted") {
    auto backend = std::make_shared<encoder::HashingBackend>(encoder::HashingOptions{32, 8, 512, 3});
    encoder::EncoderClient client(backend, nullptr, encoder::CacheMode::Live);
    std::mt19937_64 rng(6);
    const std::vector<std::string> words{"garlic", "flu", "virus", "cure", "vaccine", "mask", "water", "sun"};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<corpus::DocumentRecord> docs;
        for (int d = 0; d < 4; ++d) {
            std::string text;
            for (int s = 0; s < 5; ++s) {
                for (int w = 0; w < 5; ++w) text += words[rng() % words.size()] + " ";
                text += "end. ";
            }
            docs.push_back({"d" + std::to_string(d), "u", "x", text});
        }
        for (const auto& set : {retrieve_evidence_flat({"c", "garlic cures flu"}, docs, 7, client_embedder(client)),
                                retrieve_evidence_per_doc({"c", "garlic cures flu"}, docs, 2, client_embedder(client))}) {
            for (std::size_t i = 1; i < set.sentences.size(); ++i) {
                CHECK(set.sentences[i - 1].similarity >= set.sentences[i].similarity);
            }
        }
    }
}

TEST_CASE("evidence json") {
    EvidenceSet set{"c", SelectionPolicy::PerDocTopM, {{"s", "d", "u", 0, 0, 0.5}}};
    auto j = to_json(set);
    CHECK(j["policy"] == "per_doc_top_m");
    CHECK(j["sentences"][0]["source_url"] == "u");
    CHECK(parse_selection_policy("flat_top_n") == SelectionPolicy::FlatTopN);
    CHECK_THROWS_AS(parse_selection_policy("x"), InvalidArgument);
}
