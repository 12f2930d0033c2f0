#include <doctest.h>

#include <numeric>
#include <random>

#include "../support/oracles.hpp"
#include "veracity/encoder/client.hpp"
#include "veracity/encoder/hashing_backend.hpp"
#include "veracity/error.hpp"
#include "veracity/nn/grad_check.hpp"
#include "veracity/nn/ops.hpp"
#include "veracity/verdict/features.hpp"
#include "veracity/verdict/heads.hpp"
#include "veracity/verdict/metrics.hpp"
#include "veracity/verdict/synthetic.hpp"
#include "veracity/verdict/train.hpp"

using namespace veracity;
using namespace veracity::verdict;
using corpus::Label;

namespace {

HeadConfig small(HeadKind kind, std::size_t d, std::size_t pairs) {
    HeadConfig c = HeadConfig::defaults(kind, d);
    c.pairs = pairs;
    c.hidden = 6;
    c.gcn_channels = 5;
    return c;
}

double max_diff(const std::array<double, 2>& a, const std::vector<double>& b) {
    return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
}

Example nli_example(std::array<double, 3> tri, std::size_t pairs, Label label, const std::string& id) {
    Example e;
    e.inputs.claim_id = id;
    for (std::size_t i = 0; i < pairs; ++i) {
        PairInput p;
        p.nli = tri;
        e.inputs.pairs.push_back(p);
    }
    e.label = label;
    return e;
}

std::vector<Example> separable_nli(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> strong(0.6, 0.9), u(0.0, 1.0);
    std::vector<Example> out;
    for (std::size_t i = 0; i < n; ++i) {
        const Label label = i % 2 ? Label::True : Label::False;
        Example e;
        e.inputs.claim_id = "s" + std::to_string(i);
        for (int p = 0; p < 5; ++p) {
            const double s = strong(rng), rest = 1.0 - s, split = u(rng);
            PairInput pi;
            pi.nli = label == Label::True ? std::array{rest * split, rest * (1 - split), s}
                                          : std::array{s, rest * split, rest * (1 - split)};
            e.inputs.pairs.push_back(pi);
        }
        e.label = label;
        out.push_back(std::move(e));
    }
    return out;
}

double accuracy(const Head& head, const std::vector<Example>& data) {
    std::size_t right = 0;
    for (const auto& e : data) right += head.predict(e.inputs) == e.label;
    return static_cast<double>(right) / static_cast<double>(data.size());
}

}  // namespace

TEST_CASE("SAN head matches the dense oracle") {
    std::mt19937_64 rng(1);
    auto head = make_head(small(HeadKind::NliSan, 4, 2), 3);
    for (int trial = 0; trial < 20; ++trial) {
        auto in = oracle::random_san_inputs(2, 3, 4, rng);
        CHECK(max_diff(head->predict_proba(in), oracle::san_forward(*head, in)) <= 1e-10);
        auto partial = oracle::random_san_inputs(1, 3, 4, rng);
        CHECK(max_diff(head->predict_proba(partial), oracle::san_forward(*head, partial)) <= 1e-10);
    }
    CHECK_THROWS_AS(head->predict_proba(oracle::random_san_inputs(3, 3, 4, rng)), InvalidArgument);
    CHECK_THROWS_AS(head->predict_proba(oracle::random_san_inputs(1, 3, 5, rng)), InvalidArgument);
}

TEST_CASE("SAN output is invariant to token order and padding") {
    std::mt19937_64 rng(2);
    auto head = make_head(small(HeadKind::NliSan, 4, 3), 5);
    auto in = oracle::random_san_inputs(3, 5, 4, rng);
    const auto base = head->predict_proba(in);

    auto shuffled = in;
    std::vector<std::size_t> perm{3, 0, 4, 2, 1};
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 4; ++c) shuffled.pairs[1].tokens(r, c) = in.pairs[1].tokens(perm[r], c);
    CHECK(max_diff(head->predict_proba(shuffled), {base[0], base[1]}) <= 1e-12);

    // Extra masked rows leave the result unchanged.
    auto padded = in;
    nn::Tensor longer(8, 4, 0.0);
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 4; ++c) longer(r, c) = in.pairs[0].tokens(r, c);
    for (std::size_t r = 5; r < 8; ++r) longer(r, 0) = 7.0 + r;
    padded.pairs[0].tokens = longer;
    padded.pairs[0].token_mask = {true, true, true, true, true, false, false, false};
    CHECK(max_diff(head->predict_proba(padded), {base[0], base[1]}) <= 1e-12);

    auto ragged = oracle::random_san_inputs(3, 6, 4, rng, true);
    CHECK(max_diff(head->predict_proba(ragged), oracle::san_forward(*head, ragged)) <= 1e-10);
}

TEST_CASE("graph heads match the dense oracle") {
    std::mt19937_64 rng(3);
    for (auto kind : {HeadKind::NliGraph, HeadKind::NliGraphAbl}) {
        for (bool relu : {true, false}) {
            auto c = small(kind, 4, 6);
            c.gcn_relu = relu;
            auto head = make_head(c, 11);
            for (int trial = 0; trial < 20; ++trial) {
                auto in = oracle::random_graph_inputs(1 + rng() % 8, 4, rng);
                CHECK(max_diff(head->predict_proba(in), oracle::graph_forward(*head, in)) <= 1e-10);
                in.graph->adjacency.fill(0.0);
                CHECK(max_diff(head->predict_proba(in), oracle::graph_forward(*head, in)) <= 1e-10);
            }
        }
    }
    auto head = make_head(small(HeadKind::NliGraph, 4, 6), 1);
    ClaimInputs no_graph;
    CHECK_THROWS_AS(head->predict_proba(no_graph), InvalidArgument);
}

TEST_CASE("graph output is invariant to evidence order") {
    std::mt19937_64 rng(4);
    auto head = make_head(small(HeadKind::NliGraph, 4, 6), 2);
    for (int trial = 0; trial < 10; ++trial) {
        auto in = oracle::random_graph_inputs(6, 4, rng);
        std::vector<std::size_t> order{4, 2, 0, 3, 1};
        ClaimInputs moved = in;
        moved.graph = permute_evidence(*in.graph, order);
        const auto a = head->predict_proba(in), b = head->predict_proba(moved);
        CHECK(std::abs(a[0] - b[0]) <= 1e-12);
        CHECK(moved.graph->features.row(1)[0] == in.graph->features.row(5)[0]);
    }
}

TEST_CASE("evidence graph construction") {
    // claim-e1 cosine 0.95, e1-e2 0.91, e3 at 0.2 to every node; claim-e2 is
    // then cos(acos .95 + acos .91) < 0.9, so it stays unconnected.
    const double a1 = std::acos(0.95), a2 = std::acos(0.91);
    std::vector<double> claim{1, 0, 0};
    std::vector<double> e1{std::cos(a1), std::sin(a1), 0};
    std::vector<double> e2{std::cos(a1 + a2), std::sin(a1 + a2), 0};
    std::vector<double> e3{0.2, 0.0, std::sqrt(1 - 0.04)};
    auto g = build_evidence_graph(claim, {e1, e2, e3}, {1.0, 2.0}, {{3, 4}, {5, 6}, {7, 8}},
                                  {{0.1, 0.2, 0.7}, {0.3, 0.3, 0.4}, {0.5, 0.4, 0.1}}, 0.9);
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0].a == 0);
    CHECK(g.edges[0].b == 1);
    CHECK(g.edges[1].a == 1);
    CHECK(g.edges[1].b == 2);
    CHECK(g.adjacency(1, 0) == 1.0);
    CHECK(g.adjacency(0, 2) == 0.0);
    CHECK(g.features.row(0)[2] == 0.0);
    CHECK(g.features.row(0)[4] == 1.0);
    CHECK(g.features.row(2)[4] == 0.4);
    CHECK_NOTHROW(nn::validate_adjacency(g.adjacency));
    CHECK_THROWS_AS(build_evidence_graph(claim, {e1}, {1.0}, {}, {}, 0.9), ShapeError);
}

TEST_CASE("head gradients match finite differences") {
    std::mt19937_64 rng(6);
    SUBCASE("SAN") {
        auto head = make_head(small(HeadKind::NliSan, 8, 3), 4);
        auto in = oracle::random_san_inputs(3, 12, 8, rng, true);
        auto r = nn::grad_check([&](nn::Tape& t) { return nn::cross_entropy(t, head->forward(t, in), 1); },
                                head->parameters());
        CHECK(r.max_rel_error <= 1e-5);
    }
    SUBCASE("graph") {
        auto head = make_head(small(HeadKind::NliGraph, 8, 5), 4);
        auto in = oracle::random_graph_inputs(6, 8, rng);
        auto r = nn::grad_check([&](nn::Tape& t) { return nn::cross_entropy(t, head->forward(t, in), 0); },
                                head->parameters());
        CHECK(r.max_rel_error <= 1e-4);
    }
}

TEST_CASE("ablation heads") {
    SUBCASE("NLI head distinguishes entailment from contradiction after training") {
        auto head = make_head(small(HeadKind::Nli, 4, 5), 1);
        std::vector<Example> two{nli_example({0, 0, 1}, 5, Label::True, "t"), nli_example({1, 0, 0}, 5, Label::False, "f")};
        TrainConfig c = TrainConfig::defaults(HeadKind::Nli);
        c.epochs = 100;
        train(*head, two, c, 3);
        CHECK(head->predict(two[0].inputs) == Label::True);
        CHECK(head->predict(two[1].inputs) == Label::False);
    }
    SUBCASE("NLI head fits a separable fixture") {
        auto data = separable_nli(200, 5);
        auto head = make_head(HeadConfig::defaults(HeadKind::Nli, 4), 2);
        train(*head, data, TrainConfig::defaults(HeadKind::Nli), 9);
        CHECK(accuracy(*head, data) >= 0.99);
    }
    SUBCASE("Sent and PSent padding") {
        std::mt19937_64 rng(7);
        auto in = oracle::random_san_inputs(2, 3, 4, rng);
        for (auto& p : in.pairs) p.pooled = {0.1, 0.2, 0.3, 0.4};
        auto sent = make_head(small(HeadKind::NliSent, 4, 3), 1);
        auto psent = make_head(small(HeadKind::NliPSent, 4, 3), 1);
        std::vector<double> x;
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 4; ++j) x.push_back(i < 2 ? in.pairs[i].tokens(0, j) : 0.0);
            auto tri = i < 2 ? in.pairs[i].nli : std::array<double, 3>{0, 1, 0};
            x.insert(x.end(), tri.begin(), tri.end());
        }
        CHECK(max_diff(sent->predict_proba(in), oracle::mlp(x, *sent)) <= 1e-12);
        std::vector<double> mean{0.1, 0.2, 0.3, 0.4, 0, 0, 0};
        for (std::size_t j = 0; j < 3; ++j) mean[4 + j] = (in.pairs[0].nli[j] + in.pairs[1].nli[j]) / 2;
        CHECK(max_diff(psent->predict_proba(in), oracle::mlp(mean, *psent)) <= 1e-12);
        ClaimInputs empty;
        CHECK(max_diff(psent->predict_proba(empty), oracle::mlp({0, 0, 0, 0, 0, 1, 0}, *psent)) <= 1e-12);
    }
}

TEST_CASE("training is deterministic and serial equals parallel") {
    std::mt19937_64 rng(8);
    std::vector<Example> data;
    for (int i = 0; i < 40; ++i) {
        data.push_back({oracle::random_san_inputs(2, 4, 4, rng, true), i % 2 ? Label::True : Label::False});
        data.back().inputs.claim_id = "x" + std::to_string(i);
    }
    auto run = [&](bool parallel) {
        auto head = make_head(small(HeadKind::NliSan, 4, 2), 21);
        TrainConfig c = TrainConfig::defaults(HeadKind::NliSan);
        c.epochs = 5;
        c.batch_size = 7;
        c.lr.base = 1e-2;
        c.parallel = parallel;
        auto result = train(*head, data, c, 99);
        std::vector<nn::Tensor> values;
        for (const auto* p : std::as_const(*head).parameters()) values.push_back(p->value);
        return std::pair{result.epoch_loss, values};
    };
    auto a = run(true), b = run(true), s = run(false);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
    CHECK(a.second == s.second);
    CHECK(a.first.back() < a.first.front());

    auto head = make_head(small(HeadKind::NliSan, 4, 2), 21);
    std::vector<nn::Tensor> before;
    for (const auto* p : std::as_const(*head).parameters()) before.push_back(p->value);
    TrainConfig frozen = TrainConfig::defaults(HeadKind::NliSan);
    frozen.epochs = 3;
    frozen.lr.base = 0.0;
    train(*head, data, frozen, 1);
    std::size_t i = 0;
    for (const auto* p : std::as_const(*head).parameters()) CHECK(p->value == before[i++]);

    CHECK_THROWS_AS(train(*head, {}, frozen, 1), InvalidArgument);
}

TEST_CASE("non-finite training stops with the claim named") {
    auto head = make_head(small(HeadKind::Nli, 4, 1), 1);
    std::vector<Example> data{nli_example({0, 0, 1}, 1, Label::True, "claim-7")};
    TrainConfig c = TrainConfig::defaults(HeadKind::Nli);
    c.lr.base = 1e300;
    c.epochs = 50;
    try {
        train(*head, data, c, 1);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        const std::string what = e.what();
        CHECK((what.find("claim-7") != std::string::npos || what.find("parameter") != std::string::npos));
    }
}

TEST_CASE("head checkpoints") {
    auto dir = oracle::temp_dir("head");
    auto head = make_head(small(HeadKind::NliGraph, 4, 6), 8);
    head->save(dir / "h.ckpt", {{"seed", 8}});
    auto [back, meta] = load_head(dir / "h.ckpt");
    CHECK(meta["seed"] == 8);
    CHECK(back->kind() == HeadKind::NliGraph);
    CHECK(back->config().hidden == 6);
    std::mt19937_64 rng(1);
    auto in = oracle::random_graph_inputs(4, 4, rng);
    CHECK(back->predict_proba(in) == head->predict_proba(in));
    std::filesystem::remove_all(dir);
    CHECK(parse_head_kind("nli-graph-abl") == HeadKind::NliGraphAbl);
    CHECK_THROWS_AS(parse_head_kind("bert"), InvalidArgument);
    CHECK(HeadConfig::defaults(HeadKind::NliPSent).pairs == 30);
    CHECK(TrainConfig::defaults(HeadKind::NliGraph).epochs == 200);
    CHECK(TrainConfig::defaults(HeadKind::NliGraph).lr.boundary == 100u);
}

TEST_CASE("classification metrics") {
    auto m = classification_metrics({Label::True, Label::True, Label::False, Label::False},
                                    {Label::True, Label::False, Label::False, Label::False});
    CHECK(m.per_class[1].precision == 1.0);
    CHECK(m.per_class[1].recall == 0.5);
    CHECK(std::abs(m.per_class[1].f1 - 2.0 / 3.0) <= 1e-12);
    CHECK(std::abs(m.per_class[0].precision - 2.0 / 3.0) <= 1e-12);
    CHECK(m.per_class[0].recall == 1.0);
    CHECK(std::abs(m.per_class[0].f1 - 0.8) <= 1e-12);
    CHECK(std::abs(m.macro_f1 - (2.0 / 3.0 + 0.8) / 2.0) <= 1e-9);
    CHECK(m.accuracy == 0.75);

    auto all_false = classification_metrics({Label::True, Label::False}, {Label::False, Label::False});
    CHECK(all_false.per_class[1].precision == 0.0);
    CHECK(all_false.per_class[1].f1 == 0.0);
    CHECK_THROWS_AS(classification_metrics({Label::True}, {}), InvalidArgument);
}

TEST_CASE("ap at k") {
    CHECK(ap_at_k({1, 3, 101}, 5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(ap_at_k({1, std::nullopt}, 10) == 0.5);
    double prev = 0.0;
    for (std::size_t k = 1; k < 120; ++k) {
        const double v = ap_at_k({1, 3, 101, std::nullopt, 7}, k);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS_AS(ap_at_k({}, 5), InvalidArgument);
    CHECK_THROWS_AS(ap_at_k({1}, 0), InvalidArgument);
    CHECK_THROWS_AS(ap_at_k({0}, 1), InvalidArgument);
}

TEST_CASE("fold assignment") {
    std::vector<std::string> ids;
    for (int i = 0; i < 10; ++i) ids.push_back("claim-" + std::to_string(i));
    auto folds = assign_folds(ids, 5, 42);
    for (std::size_t f = 0; f < 5; ++f) CHECK(std::count(folds.begin(), folds.end(), f) == 2);

    auto reversed = ids;
    std::reverse(reversed.begin(), reversed.end());
    auto folds_rev = assign_folds(reversed, 5, 42);
    for (std::size_t i = 0; i < ids.size(); ++i) CHECK(folds_rev[ids.size() - 1 - i] == folds[i]);
    CHECK(assign_folds(ids, 5, 43) != folds);

    CHECK_THROWS_AS(assign_folds(ids, 1, 0), InvalidArgument);
    CHECK_THROWS_AS(assign_folds(ids, 11, 0), InvalidArgument);
    CHECK_THROWS_AS(assign_folds({"a", "a"}, 2, 0), InvalidArgument);
}

TEST_CASE("kfold evaluation") {
    auto data = separable_nli(60, 2);
    auto config = TrainConfig::defaults(HeadKind::Nli);
    config.epochs = 30;
    auto factory = [](std::size_t fold) { return make_head(HeadConfig::defaults(HeadKind::Nli, 4), 100 + fold); };
    auto report = kfold_evaluate(data, 3, factory, config, 5);
    REQUIRE(report.folds.size() == 3);
    double sum = 0.0;
    std::size_t tested = 0;
    for (const auto& f : report.folds) {
        sum += f.metrics.macro_f1;
        tested += f.test_size;
        CHECK(f.train_size + f.test_size == 60);
    }
    CHECK(tested == 60);
    CHECK(std::abs(report.mean.macro_f1 - sum / 3.0) <= 1e-12);
    CHECK(report.mean.macro_f1 >= 0.9);
    auto again = kfold_evaluate(data, 3, factory, config, 5);
    CHECK(again.mean.macro_f1 == report.mean.macro_f1);
    auto j = to_json(report);
    CHECK(j["folds"].size() == 3);
}

TEST_CASE("featurize and synthetic data") {
    auto backend = std::make_shared<encoder::HashingBackend>(encoder::HashingOptions{32, 8, 512, 1});
    encoder::EncoderClient client(backend, nullptr, encoder::CacheMode::Live);
    SyntheticOptions o;
    o.claims = 20;
    auto claims = generate_synthetic_claims(o);
    REQUIRE(claims.size() == 20);
    CHECK(std::count_if(claims.begin(), claims.end(), [](const auto& c) { return c.label == Label::True; }) == 10);
    CHECK(generate_synthetic_claims(o)[3].text == claims[3].text);

    auto san = featurize(claims[0].id, claims[0].text, claims[0].evidence, client,
                         FeatureOptions::for_head(HeadConfig::defaults(HeadKind::NliSan, 8)));
    CHECK(san.pairs.size() == 5);
    CHECK(san.pairs[0].tokens.cols() == 8);
    CHECK(san.pairs[0].tokens.rows() > 1);
    CHECK(!san.graph);

    auto graph = featurize(claims[0].id, claims[0].text, claims[0].evidence, client,
                           FeatureOptions::for_head(HeadConfig::defaults(HeadKind::NliGraph, 8)));
    REQUIRE(graph.graph);
    CHECK(graph.graph->nodes() == 1 + claims[0].evidence.size());
    CHECK(graph.graph->features.cols() == 11);

    auto nli_only = FeatureOptions::for_head(HeadConfig::defaults(HeadKind::Nli, 8));
    CHECK(nli_only.tokens == FeatureOptions::Tokens::None);
    auto ex = featurize_all(claims, client, nli_only);
    CHECK(ex.size() == 20);
    CHECK(ex[0].inputs.pairs[0].tokens.size() == 0);
}
