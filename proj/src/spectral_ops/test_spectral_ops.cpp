#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "core/errors.hpp"
#include "core/hermite.hpp"
#include "spectral_ops/spectral.hpp"
#include "spectral_ops/test_support.hpp"

using namespace kqm;
using kqm::testing::fd_derivative;
using kqm::testing::random_spectral;

namespace {

const double kPi = std::numbers::pi;

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

PhaseField sample(const GridPtr& g, auto&& f) {
    PhaseField out(g);
    for (int i = 0; i < g->nx(); ++i)
        for (int k = 0; k < g->n_pnodes(); ++k) out.at(i, k) = f(g->x(i), g->p(k));
    return out;
}

}  // namespace

TEST_CASE("to_spectral: shifted Gaussian is a single basis element") {
    auto g = make_grid({.nx = 32, .lx = 12.0, .np = 16});
    const int j0 = g->n_modes() / 2 + 3;
    const double s0 = g->wavenumber(j0);
    auto phi = sample(g, [&](double x, double p) {
        return std::exp(cd(0, s0 * (x - g->x0()))) * std::exp(-0.5 * (p - s0) * (p - s0));
    });
    auto sf = to_spectral(phi);
    cd c = sf.coeffs(0, j0);
    CHECK(std::abs(c - std::pow(kPi, 0.25)) <= 1e-12);
    sf.coeffs(0, j0) = 0.0;
    CHECK(max_abs(sf.coeffs) <= 1e-12);

    PhaseField zero(g);
    CHECK(max_abs(to_spectral(zero).coeffs) == 0.0);
}

TEST_CASE("to_spectral matches direct quadrature of the transform integrals") {
    auto g = make_grid({.nx = 16, .lx = 10.0, .np = 12});
    auto phi = to_position(random_spectral(g, 3));
    // perturb off the span so the comparison is not trivially a round trip
    for (int i = 0; i < g->nx(); ++i)
        for (int k = 0; k < g->n_pnodes(); ++k) phi.at(i, k) += 0.1 * std::exp(-g->x(i) * g->x(i) - g->p(k) * g->p(k));
    auto sf = to_spectral(phi);
    double err = 0.0;
    for (int j = 0; j < g->n_modes(); ++j) {
        const double s = g->wavenumber(j);
        for (int n = 0; n < g->np(); ++n) {
            cd acc = 0.0;
            std::vector<double> hv(g->np());
            for (int i = 0; i < g->nx(); ++i)
                for (int k = 0; k < g->n_pnodes(); ++k) {
                    double q = g->p(k) - s;
                    if (std::abs(q) > g->q_halfwidth()) continue;
                    hermite_values(q, g->np(), hv.data());
                    acc += std::exp(cd(0, -s * (g->x(i) - g->x0()))) * hv[n] * phi.at(i, k);
                }
            acc *= g->dx() * g->p_spacing() / g->lx();
            err = std::max(err, std::abs(acc - sf.coeffs(n, j)));
        }
    }
    CHECK(err <= 1e-12);
}

TEST_CASE("round trip and Parseval for band-limited fields") {
    auto g = make_grid({.nx = 64, .lx = 16.0, .np = 32});
    for (unsigned seed : {1u, 2u, 3u}) {
        auto sf = random_spectral(g, seed, 0.8);
        auto phi = to_position(sf);
        auto back = to_spectral(phi);
        CHECK(max_abs(back.coeffs - sf.coeffs) <= 1e-10 * max_abs(sf.coeffs));
        CHECK(std::abs(l2_norm(sf) - l2_norm(phi)) <= 1e-10 * l2_norm(sf));
        auto phi2 = to_position(back);
        PhaseField diff(g);
        diff.values = phi2.values - phi.values;
        CHECK(l2_norm(diff) <= 1e-10 * l2_norm(phi));
    }
}

TEST_CASE("serial and parallel kernels agree; parallel bits independent of threads") {
    auto g = make_grid({.nx = 64, .lx = 16.0, .np = 24});
    auto sf = random_spectral(g, 11, 0.9);
    Eigen::MatrixXcd a, b;
    kernels::serial::synthesize(*g, sf.coeffs, a, false);
    kernels::parallel::synthesize(*g, sf.coeffs, b, false);
    CHECK(max_abs(a - b) <= 1e-13 * max_abs(a));
    kernels::serial::synthesize(*g, sf.coeffs, a, true);
    kernels::parallel::synthesize(*g, sf.coeffs, b, true);
    CHECK(max_abs(a - b) <= 1e-13 * max_abs(a));
    Eigen::MatrixXcd c1, c2;
    kernels::serial::analyze(*g, a, c1);
    kernels::parallel::analyze(*g, a, c2);
    CHECK(max_abs(c1 - c2) <= 1e-13 * max_abs(c1));

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    Eigen::MatrixXcd r1, q1;
    kernels::parallel::synthesize(*g, sf.coeffs, r1, false);
    kernels::parallel::analyze(*g, r1, q1);
    omp_set_num_threads(4);
    Eigen::MatrixXcd r4, q4;
    kernels::parallel::synthesize(*g, sf.coeffs, r4, false);
    kernels::parallel::analyze(*g, r4, q4);
    omp_set_num_threads(saved);
    CHECK(r1 == r4);
    CHECK(q1 == q4);
}

TEST_CASE("apply_A_prime: plane waves and constants without a potential") {
    auto g = make_grid({.nx = 32, .lx = 12.0, .np = 16});
    auto dp = DimensionlessParams::scaled(1.0, PotentialSpec::free_particle());
    const double s = g->wavenumber(g->n_modes() / 2 + 2);
    auto phi = sample(g, [&](double x, double p) { return std::exp(cd(0, s * x)) * std::exp(-0.3 * p * p) * (1.0 + 0.2 * p); });
    auto out = apply_A_prime(phi, dp);
    double err = 0.0;
    for (int i = 0; i < g->nx(); ++i)
        for (int k = 0; k < g->n_pnodes(); ++k) {
            double p = g->p(k);
            err = std::max(err, std::abs(out.at(i, k) - cd(0, 0.5 * p * p - s * p) * phi.at(i, k)));
        }
    CHECK(err <= 1e-10);

    PhaseField one(g);
    one.values.setConstant(1.0);
    auto o2 = apply_A_prime(one, dp);
    err = 0.0;
    for (int i = 0; i < g->nx(); ++i)
        for (int k = 0; k < g->n_pnodes(); ++k) err = std::max(err, std::abs(o2.at(i, k) - cd(0, 0.5 * g->p(k) * g->p(k))));
    CHECK(err <= 1e-10);
}

TEST_CASE("apply_A_prime: harmonic potential against a finite-difference oracle") {
    // full retained band so the sampled Gaussian is band-limited to 1e-7
    auto g = make_grid({.nx = 32, .lx = 16.0, .np = 32, .s_max = 2.0 * kPi});
    auto dp = DimensionlessParams::scaled(1.0, PotentialSpec::harmonic(1.0), 0.3);
    auto f = [](double x, double p) {
        return std::exp(cd(-(x - 0.5) * (x - 0.5) / 2.0 - (p - 0.4) * (p - 0.4) / 2.0, 0.3 * x));
    };
    auto phi = sample(g, f);
    auto out = apply_A_prime(phi, dp);
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < g->nx(); ++i)
        for (int k = 0; k < g->n_pnodes(); ++k) {
            double x = g->x(i), p = g->p(k);
            cd fx = fd_derivative([&](double y) { return f(y, p); }, x, 1e-2);
            cd fp = fd_derivative([&](double q) { return f(x, q); }, p, 1e-2);
            cd ref = dp.potential.gradient(x) * fp - p * fx - cd(0, 1) * (dp.mu() + dp.potential.value(x) - 0.5 * p * p) * f(x, p);
            err = std::max(err, std::abs(out.at(i, k) - ref));
            scale = std::max(scale, std::abs(ref));
        }
    CHECK(err <= 1e-6 * scale);
}

TEST_CASE("apply_A_prime is skew-Hermitian without potential") {
    auto g = make_grid({.nx = 32, .lx = 12.0, .np = 16});
    auto dp = DimensionlessParams::scaled(1.0, PotentialSpec::free_particle());
    std::mt19937 rng(5);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 5; ++trial) {
        PhaseField phi(g);
        Eigen::VectorXcd row(g->nx());
        for (int i = 0; i < g->nx(); ++i) row(i) = cd(nd(rng), nd(rng));
        for (int i = 0; i < g->nx(); ++i) phi.values.col(i).setConstant(row(i));
        auto a = apply_A_prime(phi, dp);
        CHECK(std::abs(inner_product(a, phi).real()) <= 1e-10 * std::pow(l2_norm(phi), 2));
    }
}

TEST_CASE("Galerkin A is skew-Hermitian with a potential") {
    auto g = make_grid({.nx = 64, .lx = 16.0, .np = 24});
    for (auto pot : {PotentialSpec::harmonic(1.0), PotentialSpec::gaussian_well(6.0, 1.0)}) {
        auto dp = DimensionlessParams::scaled(1.0, pot, 0.5);
        for (unsigned seed : {1u, 2u}) {
            auto sf = random_spectral(g, seed, 0.7);
            auto a = apply_A_spectral(sf, dp);
            CHECK(std::abs(inner_product(a, sf).real()) <= 1e-10 * std::pow(l2_norm(sf), 2) * 10.0);
        }
    }
}

TEST_CASE("apply_B_prime: stationary state, first excitation, finite differences") {
    auto g = make_grid({.nx = 32, .lx = 12.0, .np = 24});
    const double s0 = g->wavenumber(g->n_modes() / 2 - 2);
    auto phi0 = sample(g, [&](double x, double p) { return std::exp(cd(0, s0 * x)) * std::exp(-0.5 * (p - s0) * (p - s0)); });
    CHECK(l2_norm(apply_B_prime(phi0)) <= 1e-8 * l2_norm(phi0));

    auto phi1 = sample(g, [&](double, double p) { return cd(p * std::exp(-0.5 * p * p)); });
    auto b1 = apply_B_prime(phi1);
    PhaseField d(g);
    d.values = b1.values + phi1.values;
    CHECK(l2_norm(d) <= 1e-10 * l2_norm(phi1));

    // random combination of basis elements, analytic in x, FD in p
    auto g32 = make_grid({.nx = 32, .lx = 16.0, .np = 32});
    struct Term { int j, n; cd a; };
    std::vector<Term> terms = {{14, 0, {1.0, 0.2}}, {16, 1, {-0.4, 0.5}}, {17, 3, {0.3, 0.0}}, {19, 2, {0.0, -0.6}}};
    auto g_of = [](int n, double q) {
        std::vector<double> v(n + 1);
        hermite_values(q, n + 1, v.data());
        return v[n];
    };
    PhaseField phi(g32), ref(g32);
    for (int i = 0; i < g32->nx(); ++i)
        for (int k = 0; k < g32->n_pnodes(); ++k) {
            double x = g32->x(i), p = g32->p(k);
            cd v = 0.0, bv = 0.0;
            for (auto& t : terms) {
                double s = g32->wavenumber(t.j);
                cd e = t.a * std::exp(cd(0, s * (x - g32->x0())));
                v += e * g_of(t.n, p - s);
                // B = d/dp((p - s) g + dg/dp) on the mode s
                auto inner = [&](double pp) {
                    double gq = g_of(t.n, pp - s);
                    double dg = fd_derivative([&](double z) { return g_of(t.n, z - s); }, pp, 1e-2);
                    return (pp - s) * gq + dg;
                };
                bv += e * fd_derivative(inner, p, 1e-2);
            }
            phi.at(i, k) = v;
            ref.at(i, k) = bv;
        }
    auto out = apply_B_prime(phi);
    CHECK(max_abs(out.values - ref.values) <= 1e-6 * max_abs(ref.values));
}

TEST_CASE("ou_eigenvalues") {
    auto g = make_grid({.nx = 32, .lx = 12.0, .np = 16});
    auto e = ou_eigenvalues(*g, 0.0, 2);
    REQUIRE(e.size() == 3);
    for (int m = 0; m <= 2; ++m) CHECK(std::abs(e[m] + m) <= 1e-6);
    auto e3 = ou_eigenvalues(*g, 3.0, 2);
    for (int m = 0; m <= 2; ++m) CHECK(std::abs(e[m] - e3[m]) <= 1e-8);
    CHECK_THROWS_AS(ou_eigenvalues(*g, 0.0, 15), InvalidParameter);

    auto g64 = make_grid({.nx = 64, .lx = 16.0, .np = 64});
    for (double s : {0.0, 1.0, 5.0}) {
        auto ev = ou_eigenvalues(*g64, s, 10);
        for (int m = 0; m <= 10; ++m) CHECK(std::abs(ev[m] + m) <= 1e-6);
    }
}

TEST_CASE("exact_B_step") {
    auto g = make_grid({.nx = 16, .lx = 8.0, .np = 16});
    auto sf = random_spectral(g, 9, 0.9);
    CHECK(max_abs(exact_B_step(sf, 0.0).coeffs - sf.coeffs) == 0.0);

    SpectralField one(g);
    one.coeffs(1, 3) = cd(0.3, -0.2);
    auto r = exact_B_step(one, 1.0);
    CHECK(std::abs(r.coeffs(1, 3) - std::exp(-1.0) * one.coeffs(1, 3)) <= 1e-15);
    CHECK(max_abs(r.coeffs) == doctest::Approx(std::abs(std::exp(-1.0) * one.coeffs(1, 3))));

    OUBasis ou(g->np());
    for (int m : {2, 3, 6}) {
        SpectralField ev(g);
        ev.coeffs.col(2) = ou.eigenvector(m).cast<cd>();
        auto rr = exact_B_step(ev, 0.7);
        CHECK(max_abs(rr.coeffs - std::exp(-0.7 * m) * ev.coeffs) <= 1e-12);
    }

    auto ab = exact_B_step(exact_B_step(sf, 0.3), 0.45);
    auto c = exact_B_step(sf, 0.75);
    CHECK(max_abs(ab.coeffs - c.coeffs) <= 1e-12 * max_abs(sf.coeffs));

    Eigen::MatrixXd L = ou.generator();
    Eigen::MatrixXd E = (0.6 * L).exp();
    CHECK((E - ou.propagator(0.6)).cwiseAbs().maxCoeff() <= 1e-12);
}
