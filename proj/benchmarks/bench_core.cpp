#include <benchmark/benchmark.h>

#include <random>

#include "pa/complexity.hpp"
#include "pa/dataset.hpp"
#include "pa/kmeans.hpp"
#include "pa/potential.hpp"
#include "pa/resample.hpp"
#include "pa/rng.hpp"

namespace {

pa::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    pa::Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    pa::Matrix m(rows, cols);
    for (double& v : m.data()) v = normal(rng);
    return m;
}

pa::AnchorSet fixed_anchors(std::size_t k, std::size_t cols, std::uint64_t seed) {
    pa::AnchorSet a;
    a.points = random_matrix(k, cols, seed);
    a.k = k;
    a.requested_k = k;
    return a;
}

void bm_normalized_potential(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const pa::Matrix x = random_matrix(n, 4, 1);
    const pa::AnchorSet anchors = fixed_anchors(10, 4, 2);
    const pa::Gamma gamma(0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pa::normalized_potential(x, anchors, gamma));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_normalized_potential)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void bm_loss_gradient(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const pa::Matrix x = random_matrix(n, 4, 1);
    const pa::Matrix p = random_matrix(n / 2, 4, 2);
    const pa::Matrix p0 = random_matrix(n / 2, 4, 3);
    const pa::AnchorSet anchors = fixed_anchors(10, 4, 4);
    const pa::Gamma gamma(0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pa::loss_gradient(x, anchors, p, p0, gamma, 10.0));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_loss_gradient)->RangeMultiplier(4)->Range(64, 1024)->Complexity();

void bm_kmeans_anchors(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const pa::Matrix x = random_matrix(n, 4, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pa::kmeans_anchors(x, 10, 7));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_kmeans_anchors)->RangeMultiplier(4)->Range(128, 2048)->Complexity();

void bm_pa_resample(benchmark::State& state) {
    const auto n_maj = static_cast<std::size_t>(state.range(0));
    const pa::Matrix x_maj = random_matrix(n_maj, 4, 1);
    pa::Matrix x_min = random_matrix(n_maj / 8, 4, 2);
    for (double& v : x_min.data()) v += 2.0;
    pa::PaConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pa::pa_resample(x_maj, x_min, cfg));
    }
}
BENCHMARK(bm_pa_resample)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

void bm_difficulty_index(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    pa::Matrix features = random_matrix(n, 4, 1);
    std::vector<pa::ClassTag> labels(n, pa::ClassTag::majority);
    for (std::size_t i = 0; i < n / 8; ++i) labels[i * 8] = pa::ClassTag::minority;
    const pa::Dataset d = pa::make_dataset(std::move(features), std::move(labels));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pa::difficulty_index(d, 5));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_difficulty_index)->RangeMultiplier(4)->Range(128, 2048)->Complexity();

} // namespace

BENCHMARK_MAIN();
