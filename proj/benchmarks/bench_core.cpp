#include <benchmark/benchmark.h>

#include "gcorr/extremal.hpp"
#include "gcorr/gauss.hpp"
#include "gcorr/profile.hpp"
#include "gcorr/quadrature.hpp"
#include "gcorr/reduction.hpp"
#include "gcorr/rng.hpp"

using namespace gcorr;

static void BM_std_cdf(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(std_cdf(x));
        x = -x + 1e-6;
    }
}
BENCHMARK(BM_std_cdf);

static void BM_mills_tail(benchmark::State& state) {
    double x = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(mills(x));
}
BENCHMARK(BM_mills_tail)->Arg(1)->Arg(10)->Arg(50);

static void BM_std_cdf_inv(benchmark::State& state) {
    double p = 0.123;
    for (auto _ : state) {
        benchmark::DoNotOptimize(std_cdf_inv(p));
        p = (p < 0.9) ? p + 1e-7 : 0.123;
    }
}
BENCHMARK(BM_std_cdf_inv);

static void BM_integrate_gauss_halfplane(benchmark::State& state) {
    for (auto _ : state) {
        auto r = integrate_gauss(
            [](double x) { return std_cdf(0.7 * x - 0.3); }, -kInf, kInf,
            1e-10, {0.3 / 0.7});
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_integrate_gauss_halfplane);

static void BM_match_layer(benchmark::State& state) {
    for (auto _ : state) {
        Layer l = match_layer(0.3, 0.5, 1e-11);
        benchmark::DoNotOptimize(l.a);
    }
}
BENCHMARK(BM_match_layer);

static void BM_linearize_random(benchmark::State& state) {
    ConcaveProfile psi = random_profile(17, 4);
    for (auto _ : state) {
        auto r = linearize(psi, -1.1, 1.3, 1e-10);
        benchmark::DoNotOptimize(r.m0);
    }
}
BENCHMARK(BM_linearize_random);

static void BM_boundary_solve(benchmark::State& state) {
    for (auto _ : state) {
        double B = boundary_for_centroid(RegionKind::R1, 1.0, 0.0, -0.5, 1e-10);
        benchmark::DoNotOptimize(B);
    }
}
BENCHMARK(BM_boundary_solve);

static void BM_counter_normals(benchmark::State& state) {
    CounterRng rng(42, 0);
    std::uint64_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(rng.normal(i++));
}
BENCHMARK(BM_counter_normals);

static void BM_polygon_mass(benchmark::State& state) {
    ConvexPolygon poly({{-1.2, -0.8}, {0.9, -1.1}, {1.4, 0.3}, {0.2, 1.2}, {-1.0, 0.7}});
    for (auto _ : state) {
        auto m = polygon_moments(poly, 1e-9);
        benchmark::DoNotOptimize(m.mass);
    }
}
BENCHMARK(BM_polygon_mass);

BENCHMARK_MAIN();
