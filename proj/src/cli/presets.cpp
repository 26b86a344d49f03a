#include "cli/presets.hpp"

#include <cmath>
#include <random>

#include "core/errors.hpp"
#include "evolution/schrodinger.hpp"

namespace kqm::cli {

ScenarioConfig default_config(Experiment e) {
    ScenarioConfig c;
    c.experiment = e;
    c.output.directory = "out-" + experiment_name(e);
    switch (e) {
        case Experiment::spectrum:
            c.grid = {.nx = 128, .lx = 25.6, .np = 64};
            break;
        case Experiment::relax:
            c.physical.epsilon = 0.0;
            c.grid = {.nx = 32, .lx = 12.0, .np = 24};
            c.integrator = {.dt = 0.05, .t_end = 5.0};
            break;
        case Experiment::generator_check:
            c.physical.rest_energy_ratio = 0.3;
            c.grid = {.nx = 128, .lx = 25.6, .np = 16};
            break;
        case Experiment::schrodinger_limit:
            c.physical.rest_energy_ratio = 0.4;
            c.grid = {.nx = 64, .lx = 16.0, .np = 16};
            c.integrator = {.dt = 0.02, .t_end = 1.0};
            c.initial = {.preset = "gaussian", .center = 1.0, .width = 0.8, .momentum = 0.3};
            break;
        case Experiment::density:
            c.grid = {.nx = 64, .lx = 20.0, .np = 24};
            c.initial = {.preset = "two-bump", .center = 0.0, .width = 0.6, .momentum = 0.0, .separation = 3.0};
            break;
        case Experiment::decohere:
            c.potential.kind = "gaussian-well";
            c.potential.depth = 6.0;
            c.potential.width = 1.0;
            c.grid = {.nx = 32, .lx = 12.0, .np = 20};
            c.integrator = {.dt = 0.05, .t_end = 1.0, .renormalize = true};
            c.initial = {.preset = "eigen-superposition", .indices = {0, 1}, .weights = {1.0, 1.0}};
            break;
        case Experiment::classical_limit:
            c.physical.epsilon = 1.0;
            c.grid = {.nx = 64, .lx = 20.0, .np = 20, .p_spacing = 0.125};
            c.integrator = {.dt = 0.005, .t_end = 6.283185307179586};
            c.initial = {.preset = "gaussian", .center = 1.0, .width = 0.7071067811865476};
            break;
        case Experiment::kramers_baseline:
            c.physical.epsilon = 1.0;
            c.grid = {.nx = 32, .lx = 16.0, .np = 32};
            c.integrator = {.dt = 0.005, .t_end = 30.0, .snapshot_stride = 100};
            c.initial = {.preset = "gaussian", .center = 2.0, .width = 0.5};
            break;
    }
    return c;
}

ConfigField gaussian_state(const GridPtr& g, double center, double width, double momentum) {
    ConfigField psi(g);
    for (int i = 0; i < g->nx(); ++i) {
        const double x = g->x(i) - center;
        psi.values(i) = std::exp(-x * x / (4 * width * width)) * std::exp(cd(0, momentum * x));
    }
    normalize(psi);
    return psi;
}

ConfigField two_bump_state(const GridPtr& g, double center, double separation, double width, double momentum) {
    ConfigField a = gaussian_state(g, center - 0.5 * separation, width, momentum);
    const ConfigField b = gaussian_state(g, center + 0.5 * separation, width, momentum);
    a.values += b.values;
    normalize(a);
    return a;
}

ConfigField plane_wave_state(const GridPtr& g, double s, double* snapped) {
    int best = 0;
    for (int j = 1; j < g->n_modes(); ++j)
        if (std::abs(g->wavenumber(j) - s) < std::abs(g->wavenumber(best) - s)) best = j;
    const double k = g->wavenumber(best);
    if (snapped) *snapped = k;
    ConfigField psi(g);
    for (int i = 0; i < g->nx(); ++i) psi.values(i) = std::exp(cd(0, k * g->x(i)));
    normalize(psi);
    return psi;
}

ConfigField hermite_state(const GridPtr& g, int n, double scale) {
    ConfigField psi(g);
    for (int i = 0; i < g->nx(); ++i) {
        const double q = g->x(i) / scale;
        double h0 = 1.0, h1 = 2 * q;
        double h = n == 0 ? h0 : h1;
        for (int k = 2; k <= n; ++k) {
            h = 2 * q * h1 - 2 * (k - 1) * h0;
            h0 = h1;
            h1 = h;
        }
        psi.values(i) = h * std::exp(-0.5 * q * q);
    }
    normalize(psi);
    return psi;
}

ConfigField random_state(const GridPtr& g, unsigned seed, double kwidth) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd hat = Eigen::VectorXcd::Zero(g->nx());
    for (int j = 0; j < g->n_modes(); ++j) {
        const double s = g->wavenumber(j);
        const double a = nd(rng), b = nd(rng);
        hat(g->fft_index(j)) = cd(a, b) * std::exp(-0.5 * s * s / (kwidth * kwidth));
    }
    g->fft_backward(hat);
    ConfigField psi(g);
    psi.values = hat;
    normalize(psi);
    return psi;
}

SpectralField random_field(const GridPtr& g, unsigned seed, double decay, double kwidth) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    SpectralField sf(g);
    for (int j = 0; j < g->n_modes(); ++j) {
        const double s = g->wavenumber(j);
        const double env = std::exp(-0.5 * s * s / (kwidth * kwidth));
        for (int n = 0; n < g->np(); ++n) {
            const double a = nd(rng), b = nd(rng);
            sf.coeffs(n, j) = cd(a, b) * env * std::pow(decay, n);
        }
    }
    return sf;
}

std::vector<NamedState> generator_suite(const GridPtr& g) {
    const int mid = g->n_modes() / 2;
    auto wave = [&](int off) {
        ConfigField psi(g);
        const double s = g->wavenumber(mid + off);
        for (int i = 0; i < g->nx(); ++i) psi.values(i) = std::exp(cd(0, s * g->x(i)));
        normalize(psi);
        return psi;
    };
    return {
        {"gaussian(0,1,0)", gaussian_state(g, 0.0, 1.0, 0.0)},
        {"gaussian(1.5,0.7,0.8)", gaussian_state(g, 1.5, 0.7, 0.8)},
        {"gaussian(-2,1.2,-1.1)", gaussian_state(g, -2.0, 1.2, -1.1)},
        {"gaussian(0.5,0.5,2)", gaussian_state(g, 0.5, 0.5, 2.0)},
        {"hermite(1,1)", hermite_state(g, 1, 1.0)},
        {"hermite(2,0.8)", hermite_state(g, 2, 0.8)},
        {"hermite(3,1.3)", hermite_state(g, 3, 1.3)},
        {"plane-wave(0)", wave(0)},
        {"plane-wave(+3)", wave(3)},
        {"plane-wave(-7)", wave(-7)},
    };
}

ConfigField initial_state(const ScenarioConfig& cfg, const GridPtr& g) {
    const auto& in = cfg.initial;
    if (in.preset == "gaussian") return gaussian_state(g, in.center, in.width, in.momentum);
    if (in.preset == "two-bump") return two_bump_state(g, in.center, in.separation, in.width, in.momentum);
    if (in.preset == "plane-wave") return plane_wave_state(g, in.wavenumber);
    if (in.preset == "random") return random_state(g, cfg.output.seed, in.kwidth);
    if (in.preset == "eigen-superposition") {
        int kmax = 0;
        for (int k : in.indices) kmax = std::max(kmax, k);
        const Eigenbasis eb = hamiltonian_eigenpairs(g, make_params(cfg), kmax + 1);
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(kmax + 1);
        for (size_t i = 0; i < in.indices.size(); ++i) c(in.indices[i]) += in.weights[i];
        if (c.norm() == 0.0) throw ConfigError("[initial] weights", "all weights are zero");
        ConfigField psi = eb.combine(c);
        normalize(psi);
        return psi;
    }
    throw ConfigError("[initial] preset", "unknown preset '" + in.preset + "'");
}

}  // namespace kqm::cli
