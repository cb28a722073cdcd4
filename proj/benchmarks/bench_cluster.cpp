#include "ares/cluster.hpp"
#include "ares/dataset.hpp"

#include <benchmark/benchmark.h>

namespace {

ares::Dataset blobs(std::size_t n) {
    return ares::generate_blobs(3, 3, n / 3, 2, 1.0, 0.3).data;
}

void BM_DistanceMatrix(benchmark::State& state) {
    const auto data = blobs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ares::DistanceMatrix(data));
    }
}
BENCHMARK(BM_DistanceMatrix)->Range(256, 4096);

void BM_Dbscan(benchmark::State& state) {
    const auto data = blobs(static_cast<std::size_t>(state.range(0)));
    const ares::DistanceMatrix m(data);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ares::dbscan_run(data, {0.1, 4}, &m));
    }
}
BENCHMARK(BM_Dbscan)->Range(256, 4096);

void BM_DensityPeaks(benchmark::State& state) {
    const auto data = blobs(static_cast<std::size_t>(state.range(0)));
    const ares::DistanceMatrix m(data);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ares::dp_run(data, {3, 0.1}, &m));
    }
}
BENCHMARK(BM_DensityPeaks)->Range(256, 4096);

void BM_KMeans(benchmark::State& state) {
    const auto data = blobs(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ares::kmeans_run(data, {3, 100, 10, 1}));
    }
}
BENCHMARK(BM_KMeans)->Range(256, 4096);

} // namespace
