#include <doctest.h>

#include <cmath>
#include <numbers>

#include "analysis/analysis.hpp"
#include "analysis/decoherence.hpp"
#include "core/errors.hpp"
#include "projector/projector.hpp"
#include "spectral_ops/test_support.hpp"

using namespace kqm;
using kqm::testing::random_spectral;

namespace {

const double kPi = std::numbers::pi;

ConfigField gaussian(const GridPtr& g, double x0, double width, double k0) {
    ConfigField psi(g);
    for (int i = 0; i < g->nx(); ++i) {
        const double x = g->x(i) - x0;
        psi.values(i) = std::exp(-x * x / (4 * width * width)) * std::exp(cd(0, k0 * x));
    }
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

ConfigField plane_wave(const GridPtr& g, int mode) {
    ConfigField psi(g);
    const double s = g->wavenumber(mode);
    for (int i = 0; i < g->nx(); ++i) psi.values(i) = std::exp(cd(0, s * g->x(i)));
    normalize(psi);
    return psi;
}

}  // namespace

TEST_CASE("line and exponential fits") {
    std::vector<double> t, y;
    for (int i = 0; i < 20; ++i) {
        t.push_back(0.25 * i);
        y.push_back(3.0 * std::exp(-1.7 * t.back()));
    }
    auto f = fit_exponential(t, y, 0.5, 4.0);
    CHECK(f.rate == doctest::Approx(-1.7).epsilon(1e-12));
    CHECK(f.amplitude == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.t_start == doctest::Approx(0.5));
    CHECK(f.t_end == doctest::Approx(4.0));
    std::vector<double> tiny(20, 1e-12);
    CHECK_THROWS_AS(fit_exponential(t, tiny, 0.0, 5.0), InsufficientSignal);
    CHECK_THROWS_AS(fit_line({1.0, 2.0}, {1.0, 2.0}), InsufficientSignal);
    auto l = fit_line({0, 1, 2, 3}, {1, 3.1, 4.9, 7.0});
    CHECK(l.slope == doctest::Approx(1.98).epsilon(1e-12));
    CHECK(l.r_squared <= 1.0);
    CHECK(l.slope_stderr > 0.0);
}

TEST_CASE("relaxation rates") {
    auto g = make_grid({.nx = 32, .lx = 12.0, .np = 24});
    OUBasis ou(g->np());
    auto d0 = DimensionlessParams::scaled(0.0, PotentialSpec::harmonic(1.0));
    for (int m : {1, 2}) {
        SpectralField phi(g);
        phi.coeffs.col(3) = ou.eigenvector(m).cast<cd>();
        phi.coeffs.col(9) = 0.5 * ou.eigenvector(m).cast<cd>();
        auto tr = evolve_full(phi, d0, {.dt = 0.05, .t_end = 5.0});
        CHECK(relaxation_rate(tr).rate == doctest::Approx(-m).epsilon(0.01));
    }
    // low wavenumbers keep eps*s small so the O(eps) floor stays below the fit window
    auto generic = random_spectral(g, 11, 0.5, 0.5);
    generic.coeffs -= project_P0(generic).coeffs;
    auto d5 = DimensionlessParams::scaled(0.05, PotentialSpec::harmonic(1.0));
    auto tr = evolve_full(generic, d5, {.dt = 0.05, .t_end = 5.0});
    CHECK(relaxation_rate(tr).rate == doctest::Approx(-1.0).epsilon(0.05));

    SpectralField flat = project_P0(generic);
    auto tf = evolve_full(flat, d0, {.dt = 0.05, .t_end = 5.0});
    CHECK_THROWS_AS(relaxation_rate(tf), InsufficientSignal);
}

TEST_CASE("projected generator identity across states and potentials") {
    auto g = make_grid({.nx = 128, .lx = 25.6, .np = 16});
    std::vector<ConfigField> suite = {
        gaussian(g, 0.0, 1.0, 0.0),  gaussian(g, 1.5, 0.7, 0.8),    gaussian(g, -2.0, 1.2, -1.1),
        gaussian(g, 0.5, 0.5, 2.0),  hermite_state(g, 1, 1.0),      hermite_state(g, 2, 0.8),
        hermite_state(g, 3, 1.3),    plane_wave(g, g->n_modes() / 2), plane_wave(g, g->n_modes() / 2 + 3),
        plane_wave(g, g->n_modes() / 2 - 7)};
    std::vector<DimensionlessParams> pots = {DimensionlessParams::scaled(0.1, PotentialSpec::free_particle(), 0.3),
                                             DimensionlessParams::scaled(0.1, PotentialSpec::harmonic(0.8), 0.3),
                                             DimensionlessParams::scaled(0.1, PotentialSpec::double_well(0.05, 0.6))};
    for (const auto& dp : pots)
        for (const auto& psi : suite) {
            auto r = projected_generator_check(psi, dp);
            CHECK(r.residual <= 1e-6);
            // the +1/2 constant leaves a mismatch of exactly |psi|
            auto w = projected_generator_check(psi, dp, ZeroPointShift::plus_half);
            ConfigField d(g);
            d.values = w.lhs.values - w.rhs.values;
            CHECK(l2_norm(d) == doctest::Approx(1.0).epsilon(1e-6));
        }
}

TEST_CASE("projected generator on plane waves and constant shifts") {
    auto g = make_grid({.nx = 64, .lx = 16.0, .np = 16});
    auto dp = DimensionlessParams::scaled(0.1, PotentialSpec::free_particle());
    for (int j : {g->n_modes() / 2, g->n_modes() / 2 + 2, 3}) {
        auto psi = plane_wave(g, j);
        const double s = g->wavenumber(j);
        auto r = projected_generator_check(psi, dp);
        CHECK((r.lhs.values - cd(0, -1) * (0.5 * s * s - 0.5) * psi.values).cwiseAbs().maxCoeff() <= 1e-8);
    }
    auto dh = DimensionlessParams::scaled(0.1, PotentialSpec::harmonic(1.0));
    auto dhs = dh;
    dhs.potential = dh.potential.shifted(0.37);
    auto psi = gaussian(g, 0.5, 0.9, 0.4);
    auto a = projected_generator_check(psi, dh);
    auto b = projected_generator_check(psi, dhs);
    CHECK(b.residual <= 1e-6);
    CHECK((b.lhs.values - a.lhs.values - cd(0, -0.37) * psi.values).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("first-order eigenvalues of the projected generator") {
    auto g = make_grid({.nx = 64, .lx = 16.0, .np = 16});
    const double eps = 0.1, w = 1.2;
    auto dp = DimensionlessParams::scaled(eps, PotentialSpec::harmonic(w), 0.2);
    auto r = first_order_eigenvalues(g, dp, 5);
    CHECK(r.max_real_ratio <= 1e-8);
    CHECK(r.mismatch <= 1e-5);
    for (int k = 0; k + 1 < 5; ++k) CHECK(std::abs(r.eigenvalues(k + 1) - r.eigenvalues(k) - cd(0, -eps * w)) <= 1e-7);

    auto ds = dp;
    ds.potential = dp.potential.shifted(0.5);
    auto rs = first_order_eigenvalues(g, ds, 5);
    for (int k = 0; k < 5; ++k) CHECK(std::abs(rs.eigenvalues(k) - r.eigenvalues(k) - cd(0, -eps * 0.5)) <= 1e-10);

    auto df = DimensionlessParams::scaled(eps, PotentialSpec::free_particle(), 0.3);
    auto rf = first_order_eigenvalues(g, df, 1);
    CHECK(std::abs(rf.eigenvalues(0) - cd(0, -eps * (0.0 - 0.5 + 0.3))) <= 1e-12);

    auto rp = first_order_eigenvalues(g, dp, 5, ZeroPointShift::plus_half);
    CHECK(rp.mismatch > 1e-2);
}

TEST_CASE("Schrodinger limit: small errors and the stationary case") {
    auto g = make_grid({.nx = 32, .lx = 12.0, .np = 16});
    auto dp = DimensionlessParams::scaled(0.1, PotentialSpec::harmonic(1.0), 0.4);
    auto psi0 = gaussian(g, 1.0, 0.8, 0.3);
    SchrodingerLimitConfig cfg{.slow_time = 1.0, .n_samples = 4, .dt = 0.01};
    auto rep = schrodinger_limit_error(psi0, dp, {0.2, 0.1}, cfg);
    REQUIRE(rep.rows.size() == 2);
    for (const auto& row : rep.rows) {
        CHECK_FALSE(row.failed);
        REQUIRE(row.times.size() == 5);
        CHECK(row.errors.front() <= 1e-12);
        CHECK(row.max_error <= 5e-2);
    }
    auto eb = hamiltonian_eigenpairs(g, dp, 2);
    auto st = schrodinger_limit_error(eb.states[1], dp, {0.05}, cfg);
    CHECK(st.rows[0].max_error <= 1e-3);
}

TEST_CASE("decoherence: well with distinct rates, oscillator without") {
    auto g = make_grid({.nx = 32, .lx = 12.0, .np = 20});
    auto dp = DimensionlessParams::scaled(0.1, PotentialSpec::gaussian_well(6.0, 1.0));
    DecoherenceConfig cfg{.eps_list = {0.1, 0.05}, .basis_size = 4, .horizon = 0.4, .dt = 0.05, .sample_every = 1.0};
    Eigen::VectorXcd c0(2);
    c0 << 1.0, 1.0;
    auto rep = decoherence_experiment(g, c0, dp, cfg);
    CHECK_FALSE(rep.inconclusive);
    CHECK(rep.survivor == 0);
    for (const auto& r : rep.runs) {
        CHECK(r.bessel_excess <= 1e-8);
        CHECK(r.ratio_fit.rate < 0.0);
        CHECK(r.subdominant == 1);
        CHECK(r.modes.c.cols() == Eigen::Index(r.modes.times.size()));
    }
    // |rate| grows with eps
    CHECK(std::abs(rep.runs[0].ratio_fit.rate) > std::abs(rep.runs[1].ratio_fit.rate));
    CHECK(rep.rate_ratio > 1.0);

    // a global complex factor changes nothing
    auto rep2 = decoherence_experiment(g, cd(0.3, -2.0) * c0, dp, cfg);
    CHECK(rep2.survivor == rep.survivor);
    for (size_t k = 0; k < rep.runs.size(); ++k)
        CHECK(rep2.runs[k].ratio_fit.rate == doctest::Approx(rep.runs[k].ratio_fit.rate).epsilon(1e-9));

    auto dh = DimensionlessParams::scaled(0.1, PotentialSpec::harmonic(1.0));
    auto gh = make_grid({.nx = 32, .lx = 12.0, .np = 16});
    auto hrep = decoherence_experiment(gh, c0, dh, cfg);
    CHECK(hrep.inconclusive);

    Eigen::VectorXcd single(2);
    single << 1.0, 0.0;
    CHECK_THROWS_AS(decoherence_experiment(g, single, dp, cfg), InvalidParameter);
}

TEST_CASE("decoherence: a single eigenstate stays put") {
    auto g = make_grid({.nx = 32, .lx = 12.0, .np = 20});
    auto dp = DimensionlessParams::scaled(0.01, PotentialSpec::gaussian_well(6.0, 1.0));
    auto eb = hamiltonian_eigenpairs(g, dp, 4);
    IntegratorConfig ic{.dt = 0.05, .t_end = 20.0, .renormalize = true, .snapshot_stride = 20, .skip_energy = true};
    auto tr = evolve_full(lift_spectral(eb.states[0]), dp, ic);
    for (const auto& s : tr.snapshots) {
        auto r = restrict_to_config(s);
        normalize(r);
        auto c = eb.project(r);
        CHECK(std::abs(std::abs(c(0)) - 1.0) <= 1e-6);
        CHECK(c.squaredNorm() <= 1.0 + 1e-8);
    }
}

TEST_CASE("classical limit: transport-only run against the density solver") {
    auto g = make_grid({.nx = 64, .lx = 20.0, .np = 20, .p_spacing = 0.125});
    auto dp = DimensionlessParams::scaled(1.0, PotentialSpec::harmonic(1.0));
    ConfigField psi = gaussian(g, 1.0, std::sqrt(0.5), 0.0);
    PhaseField phi0 = lift(psi, LiftConvention::unit_norm);
    auto rep = classical_limit_error(phi0, dp, {.t_end = kPi / 2, .n_intervals = 2, .dt = 0.002});
    CHECK(rep.l1.front() <= 1e-12);
    CHECK(rep.max_l1 <= 1e-3);
    CHECK(rep.max_char_diff <= 1e-4);
    CHECK_FALSE(rep.mass_loss);

    auto df = DimensionlessParams::scaled(1.0, PotentialSpec::free_particle());
    auto fr = classical_limit_error(phi0, df, {.t_end = 0.5, .n_intervals = 1, .dt = 0.002});
    CHECK(fr.max_l1 <= 1e-3);
}
