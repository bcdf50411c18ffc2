#include <benchmark/benchmark.h>

#include <random>

#include "gradekit/rubric.hpp"

namespace {

using namespace gradekit;
using nlohmann::json;

json deep_tree(std::mt19937_64& rng, int depth, int fanout) {
    json node = json::object();
    for (int i = 0; i < fanout; ++i) {
        const std::string key = "k" + std::to_string(depth) + "_" + std::to_string(i);
        if (depth == 0) node[key] = {{"Marks", static_cast<int>(rng() % 5)}, {"Feedback", "f"}};
        else node[key] = deep_tree(rng, depth - 1, fanout);
    }
    return node;
}

void BM_AggregateMarks(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const json tree = deep_tree(rng, static_cast<int>(state.range(0)), 4);
    for (auto _ : state) {
        auto total = aggregate_marks(tree);
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_AggregateMarks)->Arg(3)->Arg(5);

void BM_ValidateRubric(benchmark::State& state) {
    RubricNode root;
    root.label = "Problem";
    root.max_marks = Rational(0);
    for (int m = 0; m < static_cast<int>(state.range(0)); ++m) {
        RubricNode method;
        method.label = "Method " + std::to_string(m);
        method.max_marks = Rational(9);
        for (int s = 0; s < 9; ++s) {
            RubricNode leaf;
            leaf.label = "Step " + std::to_string(s);
            leaf.max_marks = Rational(1);
            method.children.push_back(std::move(leaf));
        }
        root.max_marks += method.max_marks;
        root.children.push_back(std::move(method));
    }
    for (auto _ : state) {
        auto violations = validate_rubric(root);
        benchmark::DoNotOptimize(violations);
    }
}
BENCHMARK(BM_ValidateRubric)->Arg(7)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
