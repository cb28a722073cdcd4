#include "ares/dataset.hpp"
#include "ares/rng.hpp"
#include "ares/transform.hpp"

#include <benchmark/benchmark.h>

namespace {

ares::Dataset uniform_data(std::size_t n, std::size_t d) {
    ares::Rng rng(42);
    std::vector<double> v(n * d);
    for (auto& x : v) x = rng.uniform();
    return ares::Dataset(ares::Dataset::default_column_names(d), std::move(v));
}

void BM_AresFitApplyRows(benchmark::State& state) {
    const auto data = uniform_data(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        const auto model = ares::ares_fit(data, {16, 50, 1});
        benchmark::DoNotOptimize(ares::ares_apply(model, data));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AresFitApplyRows)->RangeMultiplier(2)->Range(1 << 12, 1 << 17)->Complexity();

void BM_AresApplyPsi(benchmark::State& state) {
    const auto data = uniform_data(20000, 2);
    const auto model = ares::ares_fit(data, {static_cast<std::size_t>(state.range(0)), 50, 1});
    for (auto _ : state) {
        benchmark::DoNotOptimize(ares::ares_apply(model, data));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AresApplyPsi)->RangeMultiplier(4)->Range(4, 1024)->Complexity(benchmark::oLogN);

void BM_RankTransform(benchmark::State& state) {
    const auto data = uniform_data(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ares::rank_transform(data));
    }
}
BENCHMARK(BM_RankTransform)->Range(1 << 12, 1 << 16);

} // namespace
