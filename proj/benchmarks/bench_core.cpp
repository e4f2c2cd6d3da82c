#include "starfode/scalar_solver.hpp"
#include "starfode/star.hpp"
#include "starfode/stein.hpp"
#include "starfode/system_solver.hpp"

#include <benchmark/benchmark.h>

#include <complex>
#include <random>

using namespace starfode;

namespace {

void bm_theta_matrix(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Basis b = make_basis(1.0, m);
    for (auto _ : state) benchmark::DoNotOptimize(theta_matrix(b));
}
BENCHMARK(bm_theta_matrix)->Arg(100)->Arg(500);

void bm_frac_power_schur(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const CoeffMatrix H = theta_matrix(make_basis(1.0, m));
    for (auto _ : state) benchmark::DoNotOptimize(frac_power(H, 0.5));
}
BENCHMARK(bm_frac_power_schur)->Arg(50)->Arg(100)->Arg(200);

void bm_frac_power_series(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const CoeffMatrix H = theta_matrix(make_basis(1.0, m));
    FracPowerConfig cfg;
    cfg.route = FracPowerRoute::series;
    for (auto _ : state) benchmark::DoNotOptimize(frac_power(H, 0.5, cfg));
}
BENCHMARK(bm_frac_power_series)->Arg(50)->Arg(100);

void bm_scalar_solve(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    ScalarProblem p;
    p.alpha = 0.7;
    p.f = [](double t) { return -1.0 - 0.1 * t; };
    p.y0 = 1.0;
    p.T = 2.0;
    for (auto _ : state) benchmark::DoNotOptimize(solve_scalar(p, m));
}
BENCHMARK(bm_scalar_solve)->Arg(50)->Arg(100)->Arg(200);

void bm_stein_solve(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int n = 50;
    const Basis b = make_basis(1.0, m);
    const Eigen::MatrixXd Ha = frac_power(theta_matrix(b), 0.5);
    const Eigen::VectorXd phi =
        frac_power(theta_matrix(b), 0.5) * eval_basis(b, 0.0);
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            M(i, j) = std::complex<double>(g(rng), g(rng)) * 0.1;
    Eigen::VectorXcd u0 = Eigen::VectorXcd::Ones(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_stein_autonomous(Ha, M, phi, u0));
}
BENCHMARK(bm_stein_solve)->Arg(50)->Arg(100);

} // namespace

BENCHMARK_MAIN();
