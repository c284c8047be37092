#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wcluster/barycenter.hpp"
#include "wcluster/clustering.hpp"
#include "wcluster/geodesic.hpp"

namespace {

using namespace wcluster;

GaussianMeasure random_measure(std::mt19937_64& rng, Eigen::Index d, double shift = 0.0) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix g(d, d);
    Vector m(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        m(i) = n(rng) + shift;
        for (Eigen::Index j = 0; j < d; ++j) g(i, j) = n(rng);
    }
    return GaussianMeasure(m, SpdMatrix::from(g * g.transpose() + Matrix::Identity(d, d)));
}

MeasureCollection random_collection(std::size_t n, Eigen::Index d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<GaussianMeasure> ms;
    for (std::size_t i = 0; i < n; ++i) ms.push_back(random_measure(rng, d, 5.0 * static_cast<double>(i % 3)));
    return MeasureCollection(ms);
}

void BM_W2Distance(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto d = static_cast<Eigen::Index>(state.range(0));
    const auto a = random_measure(rng, d);
    const auto b = random_measure(rng, d);
    for (auto _ : state) benchmark::DoNotOptimize(w2_distance(a, b));
}
BENCHMARK(BM_W2Distance)->Arg(2)->Arg(10)->Arg(50);

void BM_Barycenter(benchmark::State& state) {
    const auto coll = random_collection(static_cast<std::size_t>(state.range(0)), 10, 2);
    const auto w = WeightVector::uniform(coll.size());
    for (auto _ : state) benchmark::DoNotOptimize(wasserstein_barycenter(coll, w).iterations);
}
BENCHMARK(BM_Barycenter)->Arg(8)->Arg(32);

void BM_Register(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const auto g = make_geodesic(random_measure(rng, 10), random_measure(rng, 10, 3.0));
    const auto mu = random_measure(rng, 10, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(register_measure(mu, g).tau);
}
BENCHMARK(BM_Register);

void BM_Kmeans(benchmark::State& state) {
    const auto coll = random_collection(static_cast<std::size_t>(state.range(0)), 10, 4);
    ClusteringConfig cfg;
    cfg.k = 3;
    cfg.reports = state.range(1) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(kmeans(coll, cfg).inertia);
}
BENCHMARK(BM_Kmeans)->Args({30, 0})->Args({30, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
