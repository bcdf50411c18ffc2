#include <benchmark/benchmark.h>

#include <random>

#include "gradekit/agreement.hpp"

namespace {

using namespace gradekit;

ScoreVector random_scores(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Rational> values;
    values.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        values.emplace_back(static_cast<std::int64_t>(rng() % 141), 4);
    return ScoreVector(std::move(values), Rational(35), "bench");
}

void BM_Pearson(benchmark::State& state) {
    const auto b = random_scores(static_cast<std::size_t>(state.range(0)), 1);
    const auto e = random_scores(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        auto r = pearson(b, e);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_Pearson)->Arg(100)->Arg(1000);

void BM_Spearman(benchmark::State& state) {
    const auto b = random_scores(static_cast<std::size_t>(state.range(0)), 3);
    const auto e = random_scores(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        auto r = spearman(b, e);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_Spearman)->Arg(100)->Arg(1000);

// Covers both tau-b routes: pair enumeration below the exact-count limit and
// merge-sort counting above it.
void BM_KendallTauB(benchmark::State& state) {
    const auto b = random_scores(static_cast<std::size_t>(state.range(0)), 5);
    const auto e = random_scores(static_cast<std::size_t>(state.range(0)), 6);
    for (auto _ : state) {
        auto r = kendall_tau_b(b, e);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_KendallTauB)->Arg(100)->Arg(1000)->Arg(5000)->Arg(20000);

void BM_FullReport(benchmark::State& state) {
    const auto b = random_scores(static_cast<std::size_t>(state.range(0)), 7);
    const auto e = random_scores(static_cast<std::size_t>(state.range(0)), 8);
    for (auto _ : state) {
        auto report = full_report(b, e, 5);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_FullReport)->Arg(100)->Arg(1000);

}  // namespace
