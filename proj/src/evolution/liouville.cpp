#include "evolution/liouville.hpp"

#include <cmath>
#include <fmt/format.h>

#include "core/errors.hpp"
#include "core/hermite.hpp"
#include "spectral_ops/spectral.hpp"

namespace kqm {

void LiouvilleConfig::validate() const {
    if (!(t_end >= 0.0)) throw InvalidParameter("liouville: t_end must be >= 0");
    if (n_intervals < 1) throw InvalidParameter("liouville: n_intervals must be >= 1");
    if (stencil != 4 && stencil != 6 && stencil != 8) throw InvalidParameter("liouville: stencil must be 4, 6 or 8");
    if (!(max_dtau > 0.0)) throw InvalidParameter("liouville: max_dtau must be positive");
}

CharacteristicFoot trace_characteristic(const PotentialSpec& v, double x, double p, double tau, double max_dtau,
                                        double x_lo, double period) {
    // Yoshida triple jump of the drift-kick leapfrog
    static const double cbrt2 = std::cbrt(2.0);
    static const double w1 = 1.0 / (2.0 - cbrt2), w0 = -cbrt2 / (2.0 - cbrt2);
    static const double c[4] = {0.5 * w1, 0.5 * (w0 + w1), 0.5 * (w0 + w1), 0.5 * w1};
    static const double d[3] = {w1, w0, w1};
    const long n = std::max(1L, std::lround(std::ceil(std::abs(tau) / max_dtau)));
    const double h = tau / n;
    double action = 0.0;
    const bool flat = v.is_flat();
    for (long s = 0; s < n; ++s) {
        for (int k = 0; k < 4; ++k) {
            x += c[k] * h * p;
            if (period > 0.0) x = x_lo + std::fmod(std::fmod(x - x_lo, period) + period, period);
            action += c[k] * h * p * p;
            if (k < 3 && !flat) p -= d[k] * h * v.gradient(x);
        }
    }
    return {x, p, action};
}

namespace {

void lagrange_weights(double u, int n, int& base, double* w) {
    // nodes base .. base+n-1 around u
    const int fl = int(std::floor(u));
    base = fl - (n / 2 - 1);
    for (int a = 0; a < n; ++a) {
        double num = 1.0, den = 1.0;
        for (int b = 0; b < n; ++b) {
            if (b == a) continue;
            num *= u - (base + b);
            den *= double(a - b);
        }
        w[a] = num / den;
    }
}

}  // namespace

double interpolate_density(const PhaseDensity& rho, double x, double p, int stencil, bool* outside) {
    const PhaseGrid& g = *rho.grid;
    const int nx = g.nx(), npn = g.n_pnodes();
    const double v = (p - g.p(0)) / g.p_spacing();
    if (v < 0.0 || v > npn - 1) {
        if (outside) *outside = true;
        return 0.0;
    }
    double u = std::fmod((x - g.x0()) / g.dx(), double(nx));
    if (u < 0) u += nx;
    double wx[8], wp[8];
    int bx, bp;
    lagrange_weights(u, stencil, bx, wx);
    lagrange_weights(v, stencil, bp, wp);
    double acc = 0.0;
    for (int a = 0; a < stencil; ++a) {
        const int ix = ((bx + a) % nx + nx) % nx;
        double col = 0.0;
        for (int b = 0; b < stencil; ++b) {
            const int kp = bp + b;
            if (kp < 0 || kp >= npn) continue;
            col += wp[b] * rho.values(kp, ix);
        }
        acc += wx[a] * col;
    }
    const int ix0 = int(std::floor(u)) % nx, ix1 = (ix0 + 1) % nx;
    const int k0 = std::min(int(std::floor(v)), npn - 1), k1 = std::min(k0 + 1, npn - 1);
    const double lo = std::min(std::min(rho.values(k0, ix0), rho.values(k1, ix0)),
                               std::min(rho.values(k0, ix1), rho.values(k1, ix1)));
    return std::max(acc, lo);
}

Trajectory<PhaseDensity> evolve_liouville(const PhaseDensity& rho0, const DimensionlessParams& dp,
                                          const LiouvilleConfig& cfg) {
    cfg.validate();
    if (!rho0.values.allFinite()) throw InvalidParameter("liouville: initial density is not finite");
    if (rho0.values.minCoeff() < 0.0) throw InvalidParameter("liouville: initial density must be nonnegative");
    const PhaseGrid& g = *rho0.grid;
    const double m0 = integral(rho0);
    Trajectory<PhaseDensity> tr;
    tr.record(0.0, m0, 0.0, 0.0);
    tr.snapshot(0.0, rho0);
    double worst = 0.0;
    for (int k = 1; k <= cfg.n_intervals; ++k) {
        const double t = cfg.t_end * k / cfg.n_intervals;
        const double t_from = cfg.chain ? tr.snapshot_times.back() : 0.0;
        const PhaseDensity& src = cfg.chain ? tr.snapshots.back() : rho0;
        const double tau = -dp.epsilon * (t - t_from);
        PhaseDensity out(rho0.grid);
        for (int i = 0; i < g.nx(); ++i)
            for (int kp = 0; kp < g.n_pnodes(); ++kp) {
                auto f = trace_characteristic(dp.potential, g.x(i), g.p(kp), tau, cfg.max_dtau, g.x0(), g.lx());
                out.values(kp, i) = interpolate_density(src, f.x, f.p, cfg.stencil);
            }
        const double m = integral(out);
        worst = std::max(worst, std::abs(m - m0) / std::max(m0, 1e-300));
        tr.record(t, m, 0.0, 0.0);
        tr.snapshot(t, std::move(out));
    }
    if (worst > 1e-6) tr.message = fmt::format("mass loss: relative change {:.3g}", worst);
    return tr;
}

PhaseField characteristics_solution(const PhaseField& phi0, const DimensionlessParams& dp, double t, double max_dtau) {
    const PhaseGrid& g = *phi0.grid;
    const SpectralField sf = to_spectral(phi0);
    const int np = g.np(), nm = g.n_modes();
    const double tau = dp.epsilon * t;
    PhaseField out(phi0.grid);
    std::vector<double> herm(size_t(np), 0.0);
    for (int i = 0; i < g.nx(); ++i)
        for (int kp = 0; kp < g.n_pnodes(); ++kp) {
            const double x = g.x(i), p = g.p(kp);
            auto f = trace_characteristic(dp.potential, x, p, -tau, max_dtau, g.x0(), g.lx());
            cd val = 0.0;
            for (int j = 0; j < nm; ++j) {
                const double s = g.wavenumber(j);
                if (std::abs(f.p - s) > g.q_halfwidth()) continue;
                hermite_values(f.p - s, np, herm.data());
                cd acc = 0.0;
                for (int n = 0; n < np; ++n) acc += sf.coeffs(n, j) * herm[size_t(n)];
                val += acc * std::exp(cd(0.0, s * (f.x - g.x0())));
            }
            // d phi / d tau = -i (mu + H - p^2) phi along the path
            const double H = 0.5 * p * p + dp.potential.value(x);
            const double phase = -(dp.mu() + H) * tau - f.action;
            out.at(i, kp) = val * std::exp(cd(0.0, phase));
        }
    return out;
}

}  // namespace kqm
