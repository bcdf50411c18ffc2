#include <benchmark/benchmark.h>

#include <random>

#include "gradekit/preprocess.hpp"

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

void BM_BinByRank(benchmark::State& state) {
    const auto v = random_scores(static_cast<std::size_t>(state.range(0)), 11);
    for (auto _ : state) {
        auto binned = bin_by_rank(v, 5);
        benchmark::DoNotOptimize(binned);
    }
}
BENCHMARK(BM_BinByRank)->Arg(100)->Arg(10000);

void BM_ScaleLinear(benchmark::State& state) {
    const auto v = random_scores(static_cast<std::size_t>(state.range(0)), 12);
    for (auto _ : state) {
        auto scaled = scale_linear(v, Rational(4));
        benchmark::DoNotOptimize(scaled);
    }
}
BENCHMARK(BM_ScaleLinear)->Arg(100)->Arg(10000);

void BM_ScaleMethodwise(benchmark::State& state) {
    std::mt19937_64 rng(13);
    const std::size_t students = static_cast<std::size_t>(state.range(0));
    std::vector<std::vector<Rational>> rows(students);
    for (auto& row : rows)
        for (int m = 0; m < 7; ++m) row.emplace_back(static_cast<std::int64_t>(rng() % 5));
    std::vector<Rational> method_max = {Rational(9), Rational(4), Rational(2), Rational(6),
                                        Rational(5), Rational(4), Rational(5)};
    const MethodScoreMatrix matrix(rows, Rational(4), method_max);
    for (auto _ : state) {
        auto scaled = scale_methodwise(matrix);
        benchmark::DoNotOptimize(scaled);
    }
}
BENCHMARK(BM_ScaleMethodwise)->Arg(100)->Arg(1000);

}  // namespace
