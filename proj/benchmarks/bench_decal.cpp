#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <decal/clifford.hpp>
#include <decal/eval.hpp>
#include <decal/model.hpp>
#include <decal/train.hpp>

namespace {

// UMLS-scale defaults: 135 entities, 46 relations (92 rows), d=16.
constexpr int kEntities = 135;
constexpr int kRelationRows = 92;

decal::EmbeddingTable random_table(const decal::Signature& sig, std::uint64_t seed) {
    decal::EmbeddingTable table(sig, kEntities, kRelationRows);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    for (double& v : table.entities) v = dist(rng);
    for (double& v : table.relations) v = dist(rng);
    return table;
}

decal::Signature bench_signature(const benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const int q = static_cast<int>(state.range(1));
    const int r = static_cast<int>(state.range(2));
    return decal::Signature(p, q, r, 16);
}

void BM_CliffordProduct(benchmark::State& state) {
    const decal::Signature sig = bench_signature(state);
    decal::EmbeddingTable table = random_table(sig, 1);
    const decal::CliffordElement x = decal::decode(table.entity_row(0), sig);
    const decal::CliffordElement y = decal::decode(table.relation_row(0), sig);
    for (auto _ : state) {
        benchmark::DoNotOptimize(decal::clifford_product(x, y, sig));
    }
}
BENCHMARK(BM_CliffordProduct)->Args({0, 0, 0})->Args({0, 1, 0})->Args({1, 1, 1})->Args({3, 3, 3});

void BM_ScoreAllTails(benchmark::State& state) {
    const decal::Signature sig = bench_signature(state);
    decal::EmbeddingTable table = random_table(sig, 2);
    std::vector<double> scores(kEntities, 0.0);
    for (auto _ : state) {
        decal::score_all_tails(7, 3, table, {scores.data(), scores.size()});
        benchmark::DoNotOptimize(scores.data());
    }
    state.SetItemsProcessed(state.iterations() * kEntities);
}
BENCHMARK(BM_ScoreAllTails)->Args({0, 0, 0})->Args({0, 1, 0})->Args({1, 1, 1})->Args({3, 3, 3});

void BM_ScoreGradients(benchmark::State& state) {
    const decal::Signature sig = bench_signature(state);
    decal::EmbeddingTable table = random_table(sig, 3);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> dist(-0.01, 0.01);
    std::vector<double> t_grad(kEntities);
    for (double& v : t_grad) v = dist(rng);
    decal::GradientTable grads = decal::GradientTable::zeros_like(table);
    for (auto _ : state) {
        grads.reset();
        decal::accumulate_score_gradients(7, 3, {t_grad.data(), t_grad.size()}, table, grads);
        benchmark::DoNotOptimize(grads.entities.data());
    }
}
BENCHMARK(BM_ScoreGradients)->Args({0, 0, 0})->Args({0, 1, 0})->Args({1, 1, 1})->Args({3, 3, 3});

void BM_AdamStep(benchmark::State& state) {
    const decal::Signature sig(1, 1, 1, 16);
    decal::EmbeddingTable table = random_table(sig, 5);
    decal::AdamState opt = decal::AdamState::zeros_like(table);
    decal::TrainConfig cfg;
    decal::GradientTable grads = decal::GradientTable::zeros_like(table);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> dist(-0.01, 0.01);
    for (double& v : grads.entities) v = dist(rng);
    for (double& v : grads.relations) v = dist(rng);
    for (auto _ : state) {
        decal::adam_step(table, grads, opt, cfg);
        benchmark::DoNotOptimize(table.entities.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            (table.entities.size() + table.relations.size()));
}
BENCHMARK(BM_AdamStep);

void BM_FilteredRank(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> scores(kEntities);
    for (double& s : scores) s = dist(rng);
    std::vector<int> known{3, 17, 42, 99};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            decal::filtered_rank({scores.data(), scores.size()}, 42, {known.data(), known.size()}));
    }
}
BENCHMARK(BM_FilteredRank);

} // namespace

BENCHMARK_MAIN();
