// Serial vs OpenMP per-mode kernels, plus one full step.

#include <benchmark/benchmark.h>

#include <random>

#include "evolution/integrator.hpp"
#include "spectral_ops/kernels.hpp"
#include "spectral_ops/spectral.hpp"

using namespace kqm;

namespace {

GridPtr grid_for(int nx) { return make_grid({.nx = nx, .lx = 25.6, .np = 32}); }

Eigen::MatrixXcd random_coeffs(const PhaseGrid& g) {
    std::mt19937 rng(1);
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd c(g.np(), g.n_modes());
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        const double a = nd(rng), b = nd(rng);
        c.data()[i] = cd(a, b);
    }
    return c;
}

template <Exec E>
void BM_synthesize(benchmark::State& st) {
    auto g = grid_for(int(st.range(0)));
    const auto c = random_coeffs(*g);
    Eigen::MatrixXcd out(g->n_pnodes(), g->nx());
    for (auto _ : st) {
        kernels::synthesize(*g, c, out, false, E);
        benchmark::DoNotOptimize(out.data());
    }
}

template <Exec E>
void BM_analyze(benchmark::State& st) {
    auto g = grid_for(int(st.range(0)));
    Eigen::MatrixXcd f(g->n_pnodes(), g->nx());
    kernels::synthesize(*g, random_coeffs(*g), f, false, Exec::serial);
    Eigen::MatrixXcd c;
    for (auto _ : st) {
        kernels::analyze(*g, f, c, E);
        benchmark::DoNotOptimize(c.data());
    }
}

void BM_full_step(benchmark::State& st) {
    auto g = grid_for(int(st.range(0)));
    const auto dp = DimensionlessParams::scaled(0.1, PotentialSpec::harmonic(1.0));
    FullIntegrator integ(g, dp, {.dt = 0.005, .t_end = 1.0});
    SpectralField sf(g);
    sf.coeffs = random_coeffs(*g) * 1e-3;
    for (auto _ : st) {
        integ.step(sf.coeffs);
        benchmark::DoNotOptimize(sf.coeffs.data());
    }
}

}  // namespace

BENCHMARK(BM_synthesize<Exec::serial>)->Arg(64)->Arg(128);
BENCHMARK(BM_synthesize<Exec::parallel>)->Arg(64)->Arg(128);
BENCHMARK(BM_analyze<Exec::serial>)->Arg(64)->Arg(128);
BENCHMARK(BM_analyze<Exec::parallel>)->Arg(64)->Arg(128);
BENCHMARK(BM_full_step)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
