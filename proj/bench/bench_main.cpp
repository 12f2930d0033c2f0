// Parallel paths against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "support/oracles.hpp"
#include "veracity/index/bm25.hpp"
#include "veracity/index/inverted_index.hpp"
#include "veracity/nn/kernels.hpp"
#include "veracity/verdict/heads.hpp"
#include "veracity/verdict/train.hpp"

using namespace veracity;

namespace {

template <nn::Tensor (*Kernel)(const nn::Tensor&, const nn::Tensor&)>
void BM_matmul(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    const auto a = oracle::random_tensor(n, n, rng), b = oracle::random_tensor(n, n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n * n));
}
BENCHMARK(BM_matmul<nn::kernels::matmul>)->Name("matmul/parallel")->RangeMultiplier(4)->Range(16, 256);
BENCHMARK(BM_matmul<nn::kernels::reference::matmul>)->Name("matmul/reference")->RangeMultiplier(4)->Range(16, 256);

template <bool Exhaustive>
void BM_bm25(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const auto paragraphs = oracle::random_paragraphs(static_cast<std::size_t>(state.range(0)), rng, 2000);
    const auto idx = index::InvertedIndex::build(paragraphs);
    std::vector<index::Query> queries;
    for (int i = 0; i < 64; ++i) queries.push_back({oracle::random_query(rng, 2000)});
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& q = queries[i++ % queries.size()];
        if constexpr (Exhaustive) {
            benchmark::DoNotOptimize(index::bm25_search_exhaustive(idx, q, 10));
        } else {
            benchmark::DoNotOptimize(index::bm25_search(idx, q, 10));
        }
    }
}
BENCHMARK(BM_bm25<false>)->Name("bm25/postings")->Arg(1000)->Arg(20000);
BENCHMARK(BM_bm25<true>)->Name("bm25/exhaustive")->Arg(1000)->Arg(20000);

void BM_train_epoch(benchmark::State& state) {
    const bool parallel = state.range(0) != 0;
    std::mt19937_64 rng(3);
    std::vector<verdict::Example> data;
    for (int i = 0; i < 64; ++i) {
        data.push_back({oracle::random_san_inputs(5, 16, 32, rng, true),
                        i % 2 ? corpus::Label::True : corpus::Label::False});
        data.back().inputs.claim_id = "b" + std::to_string(i);
    }
    auto config = verdict::TrainConfig::defaults(verdict::HeadKind::NliSan);
    config.epochs = 1;
    config.parallel = parallel;
    for (auto _ : state) {
        auto head = verdict::make_head(verdict::HeadConfig::defaults(verdict::HeadKind::NliSan, 32), 4);
        benchmark::DoNotOptimize(verdict::train(*head, data, config, 5));
    }
    state.SetLabel(parallel ? "parallel" : "serial");
}
BENCHMARK(BM_train_epoch)->Name("train/epoch")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
