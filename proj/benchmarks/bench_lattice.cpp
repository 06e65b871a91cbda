#include <benchmark/benchmark.h>

#include <random>

#include "adelic/lattice.hpp"

using namespace adelic;

namespace {

MetrizedLattice random_lattice(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (true) {
        Eigen::MatrixXd g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = u(rng);
        const double det = std::abs(g.determinant());
        double hadamard = 1.0;
        for (int i = 0; i < n; ++i) hadamard *= g.row(i).norm();
        if (det < 0.05 * hadamard) continue;
        return MetrizedLattice::create(rationals(), n, g * std::pow(1.0 / det, 1.0 / n));
    }
}

}  // namespace

static void BM_EnumerateBall(benchmark::State& state) {
    const MetrizedLattice l = random_lattice(static_cast<int>(state.range(0)), 42);
    for (auto _ : state) {
        auto vs = enumerate_ball(l, 2.5);
        benchmark::DoNotOptimize(vs);
    }
}
BENCHMARK(BM_EnumerateBall)->DenseRange(2, 5);

static void BM_Theta(benchmark::State& state) {
    const MetrizedLattice l = random_lattice(static_cast<int>(state.range(0)), 43);
    for (auto _ : state) {
        ThetaValue t = theta(l, 1e-12);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_Theta)->DenseRange(1, 4);

static void BM_ThetaDense(benchmark::State& state) {
    // Covolume e^-range: the enumeration count grows as the lattice densifies.
    const MetrizedLattice l =
        bv_twist(random_lattice(2, 44), -0.5 * static_cast<double>(state.range(0)));
    for (auto _ : state) {
        ThetaValue t = theta(l, 1e-12);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_ThetaDense)->DenseRange(0, 4);

BENCHMARK_MAIN();
