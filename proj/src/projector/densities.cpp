#include "projector/densities.hpp"

#include <cmath>
#include <numbers>

#include "core/fft.hpp"
#include "projector/projector.hpp"

namespace kqm {

namespace {
const double kPi = std::numbers::pi;
}

int density_refinement(const PhaseGrid& g) {
    const double pmax = std::abs(g.p(0));
    int r = int(std::ceil(g.dx() * (pmax + g.s_max() + 8.0) / kPi));
    return std::max(r, 2);
}

Eigen::VectorXcd upsample(const ConfigField& psi, int factor) {
    const PhaseGrid& g = *psi.grid;
    const int nx = g.nx(), nf = nx * factor;
    Eigen::VectorXcd hat = psi.values;
    g.fft_forward(hat);
    Eigen::VectorXcd fine = Eigen::VectorXcd::Zero(nf);
    for (int i = 0; i < nx; ++i) {
        if (i == nx / 2) {
            // split the Nyquist bin symmetrically
            fine(nx / 2) += 0.5 * hat(i);
            fine(nf - nx / 2) += 0.5 * hat(i);
        } else if (i < nx / 2) {
            fine(i) = hat(i);
        } else {
            fine(nf - (nx - i)) = hat(i);
        }
    }
    FftPlan plan(nf, 1, 1, nf, FftPlan::Direction::backward);
    plan.execute(fine.data());
    return fine;
}

PhaseDensity coherent_density(const ConfigField& psi, Exec exec) {
    const PhaseGrid& g = *psi.grid;
    const int R = density_refinement(g);
    const int nx = g.nx(), nf = nx * R;
    const double delta = g.dx() / R;
    const Eigen::VectorXcd f = upsample(psi, R);
    // e^{-a^2/4} < 1e-17 beyond |a| = 12.5. On short boxes the cut at Lx/2
    // leaves a kernel tail of e^{-Lx^2/16}, which bounds the negativity.
    const int amax = std::min(int(std::ceil(12.5 / delta)), nf / 2);
    const int na = 2 * amax + 1;
    auto wrap = [nf](long i) { return int(((i % nf) + nf) % nf); };

    // G(alpha, i) = sum over b of the Gaussian-weighted product, b spacing 2 delta
    Eigen::MatrixXcd G(na, nx);
    auto row = [&](int i) {
        const long I = long(i) * R;
        for (int ia = 0; ia < na; ++ia) {
            const int alpha = ia - amax;
            cd acc = 0.0;
            // b = beta delta with beta of the same parity as alpha
            const int start = -amax + (((amax + alpha) % 2) + 2) % 2;
            for (int beta = start; beta <= amax; beta += 2) {
                const double w = std::exp(-(double(alpha) * alpha + double(beta) * beta) * delta * delta / 4.0);
                acc += w * f(wrap(I + (beta - alpha) / 2)) * std::conj(f(wrap(I + (beta + alpha) / 2)));
            }
            G(ia, i) = 2.0 * delta * acc;
        }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < nx; ++i) row(i);
    } else {
        for (int i = 0; i < nx; ++i) row(i);
    }

    const int npn = g.n_pnodes();
    Eigen::MatrixXcd T(npn, na);
    for (int k = 0; k < npn; ++k)
        for (int ia = 0; ia < na; ++ia) T(k, ia) = std::exp(cd(0.0, (ia - amax) * delta * g.p(k)));
    const double c = delta / (2.0 * kPi * std::sqrt(4.0 * kPi));
    PhaseDensity rho(psi.grid);
    rho.values = c * (T * G).real();
    return rho;
}

PhaseDensity coherent_density_from_lift(const ConfigField& psi) {
    return abs_squared(lift(psi, LiftConvention::unit_norm));
}

PhaseDensity wigner(const ConfigField& psi, Exec exec) {
    const PhaseGrid& g = *psi.grid;
    const int R = density_refinement(g);
    const int nx = g.nx(), nf = nx * R;
    const double delta = g.dx() / R;
    const Eigen::VectorXcd f = upsample(psi, R);
    // separations up to Lx/2 only: longer ones pick up periodic images
    const int amax = nf / 4 - 1;
    const int na = 2 * amax + 1;
    auto wrap = [nf](long i) { return int(((i % nf) + nf) % nf); };

    // a = 2 alpha delta, da = 2 delta
    Eigen::MatrixXcd V(na, nx);
    auto col = [&](int i) {
        const long I = long(i) * R;
        for (int ia = 0; ia < na; ++ia) {
            const int alpha = ia - amax;
            V(ia, i) = f(wrap(I - alpha)) * std::conj(f(wrap(I + alpha)));
        }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < nx; ++i) col(i);
    } else {
        for (int i = 0; i < nx; ++i) col(i);
    }
    const int npn = g.n_pnodes();
    Eigen::MatrixXcd T(npn, na);
    for (int k = 0; k < npn; ++k)
        for (int ia = 0; ia < na; ++ia) T(k, ia) = std::exp(cd(0.0, 2.0 * (ia - amax) * delta * g.p(k)));
    PhaseDensity w(psi.grid);
    w.values = (2.0 * delta / (2.0 * kPi)) * (T * V).real();
    return w;
}

Eigen::VectorXd smoothed_config_density(const ConfigField& psi) {
    const PhaseGrid& g = *psi.grid;
    const int R = 4;
    const int nx = g.nx(), nf = nx * R;
    Eigen::VectorXcd f = upsample(psi, R);
    Eigen::VectorXcd d = f.cwiseAbs2().cast<cd>();
    FftPlan fwd(nf, 1, 1, nf, FftPlan::Direction::forward);
    FftPlan bwd(nf, 1, 1, nf, FftPlan::Direction::backward);
    fwd.execute(d.data());
    const double lf = g.lx();
    for (int i = 0; i < nf; ++i) {
        int m = i <= nf / 2 ? i : i - nf;
        double k = 2.0 * kPi * m / lf;
        d(i) *= std::exp(-k * k / 4.0) / nf;
    }
    bwd.execute(d.data());
    Eigen::VectorXd out(nx);
    for (int i = 0; i < nx; ++i) out(i) = d(i * R).real();
    return out;
}

Eigen::VectorXd p_marginal(const PhaseDensity& rho) {
    const PhaseGrid& g = *rho.grid;
    Eigen::VectorXd out(g.nx());
    for (int i = 0; i < g.nx(); ++i) {
        double acc = 0.0;
        for (int k = 0; k < g.n_pnodes(); ++k) acc += rho.values(k, i);
        out(i) = acc * g.p_spacing();
    }
    return out;
}

}  // namespace kqm
