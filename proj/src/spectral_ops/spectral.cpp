#include "spectral_ops/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "core/errors.hpp"
#include "core/hermite.hpp"

namespace kqm {

SpectralField::SpectralField(GridPtr g) : grid(std::move(g)) {
    coeffs = Eigen::MatrixXcd::Zero(grid->np(), grid->n_modes());
}

double l2_norm(const SpectralField& f) {
    const cd* p = f.coeffs.data();
    double s = 0.0;
    for (Eigen::Index i = 0; i < f.coeffs.size(); ++i) s += std::norm(p[i]);
    return std::sqrt(f.grid->lx() * s);
}

cd inner_product(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a.grid, b.grid);
    double re = 0.0, im = 0.0;
    for (Eigen::Index i = 0; i < a.coeffs.size(); ++i) {
        cd t = std::conj(a.coeffs.data()[i]) * b.coeffs.data()[i];
        re += t.real();
        im += t.imag();
    }
    return {a.grid->lx() * re, a.grid->lx() * im};
}

double tail_fraction(const SpectralField& f) {
    double total = f.coeffs.squaredNorm();
    if (total == 0.0) return 0.0;
    return f.coeffs.bottomRows(2).squaredNorm() / total;
}

SpectralField to_spectral(const PhaseField& field) {
    SpectralField sf(field.grid);
    Eigen::MatrixXcd f = field.values;
    field.grid->fft_x_forward(f);
    kernels::analyze(*field.grid, f, sf.coeffs, default_exec());
    return sf;
}

PhaseField to_position(const SpectralField& sf) {
    PhaseField out(sf.grid);
    kernels::synthesize(*sf.grid, sf.coeffs, out.values, false, default_exec());
    sf.grid->fft_x_backward(out.values);
    return out;
}

PhaseField to_position_dp(const SpectralField& sf) {
    PhaseField out(sf.grid);
    kernels::synthesize(*sf.grid, sf.coeffs, out.values, true, default_exec());
    sf.grid->fft_x_backward(out.values);
    return out;
}

Eigen::MatrixXd OUBasis::generator() const {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(np, np);
    for (int n = 0; n < np; ++n) {
        L(n, n) = -n;
        if (n + 2 < np) L(n, n + 2) = std::sqrt((n + 1.0) * (n + 2.0));
    }
    return L;
}

Eigen::MatrixXd OUBasis::propagator(double dt) const {
    if (!(dt >= 0.0)) throw InvalidParameter("propagator needs dt >= 0");
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(np, np);
    // E = e^{-dt N} exp(beta a^2), beta = (1 - e^{-2 dt}) / 2
    const double beta = -0.5 * std::expm1(-2.0 * dt);
    const double lb = beta > 0.0 ? std::log(beta) : 0.0;
    for (int n = 0; n < np; ++n) {
        E(n, n) = std::exp(-dt * n);
        if (beta == 0.0) continue;
        for (int j = 1; n + 2 * j < np; ++j) {
            double le = -dt * n + j * lb - std::lgamma(j + 1.0) +
                        0.5 * (std::lgamma(n + 2.0 * j + 1.0) - std::lgamma(n + 1.0));
            E(n, n + 2 * j) = std::exp(le);
        }
    }
    return E;
}

Eigen::VectorXd OUBasis::eigenvector(int m) const {
    if (m < 0 || m >= np) throw InvalidParameter("eigenvector index out of range");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(np);
    v(m) = 1.0;
    for (int n = m - 2; n >= 0; n -= 2) v(n) = std::sqrt((n + 1.0) * (n + 2.0)) * v(n + 2) / (n - m);
    return v.normalized();
}

Eigen::VectorXd OUBasis::eigenvalues() const {
    Eigen::VectorXd e(np);
    for (int n = 0; n < np; ++n) e(n) = -n;
    return e;
}

std::vector<double> ou_eigenvalues(const PhaseGrid& grid, double s, int K) {
    const int np = grid.np();
    if (K < 0 || K > np - 2) throw InvalidParameter("ou_eigenvalues: K must satisfy 0 <= K <= np-2 (truncation)");
    const double Q = grid.q_halfwidth();
    std::vector<double> qs;
    for (int k = 0; k < grid.n_pnodes(); ++k) {
        double q = grid.p(k) - s;
        if (std::abs(q) <= Q) qs.push_back(q);
    }
    Eigen::VectorXd q = Eigen::Map<Eigen::VectorXd>(qs.data(), Eigen::Index(qs.size()));
    Eigen::MatrixXd P = hermite_functions(q, np);
    Eigen::MatrixXd D = hermite_derivatives(q, np);
    // B psi_n = psi_n + q psi_n' + psi_n'',  psi_n'' = (q^2 - 2n - 1) psi_n
    Eigen::MatrixXd BP(q.size(), np);
    for (int n = 0; n < np; ++n)
        BP.col(n) = P.col(n).array() + q.array() * D.col(n).array() +
                    (q.array().square() - (2.0 * n + 1.0)) * P.col(n).array();
    Eigen::MatrixXd M = grid.p_spacing() * P.transpose() * BP;
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
    std::vector<double> ev;
    for (int i = 0; i < np; ++i) ev.push_back(es.eigenvalues()(i).real());
    std::sort(ev.begin(), ev.end(), std::greater<>());
    ev.resize(K + 1);
    return ev;
}

SpectralField exact_B_step(const SpectralField& sf, double dt) {
    SpectralField out(sf.grid);
    Eigen::MatrixXd E = OUBasis(sf.grid->np()).propagator(dt);
    out.coeffs.noalias() = E * sf.coeffs;
    return out;
}

SpectralField apply_B_spectral(const SpectralField& sf) {
    SpectralField out(sf.grid);
    Eigen::MatrixXd L = OUBasis(sf.grid->np()).generator();
    out.coeffs.noalias() = L * sf.coeffs;
    return out;
}

PhaseField apply_B_prime(const PhaseField& field) { return to_position(apply_B_spectral(to_spectral(field))); }

AOperator::AOperator(GridPtr grid, const DimensionlessParams& dp, Exec exec)
    : grid_(std::move(grid)), mu_(dp.mu()), exec_(exec) {
    const int nx = grid_->nx();
    v_.resize(nx);
    vx_.resize(nx);
    for (int i = 0; i < nx; ++i) {
        v_(i) = dp.potential.value(grid_->x(i));
        vx_(i) = dp.potential.gradient(grid_->x(i));
    }
    flat_ = dp.potential.is_flat();
    v_const_ = flat_ ? dp.potential.value(0.0) : 0.0;
}

double AOperator::stiffness_scale() const {
    const double qmax = std::sqrt(2.0 * grid_->np() + 1.0);
    const double pmax = grid_->s_max() + qmax;
    return std::max(grid_->s_max() * pmax, vx_.cwiseAbs().maxCoeff() * qmax);
}

void AOperator::apply(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) {
    const PhaseGrid& g = *grid_;
    const int np = g.np(), nm = g.n_modes();
    if (!flat_) {
        kernels::synthesize(g, in, f_, false, exec_);
        kernels::synthesize(g, in, g_, true, exec_);
        g.fft_x_backward(f_);
        g.fft_x_backward(g_);
        const int npn = g.n_pnodes();
        tmp_.resize(npn, g.nx());
        for (int i = 0; i < g.nx(); ++i) {
            const cd mv(0.0, -v_(i));
            tmp_.col(i) = vx_(i) * g_.col(i) + mv * f_.col(i);
        }
        g.fft_x_forward(tmp_);
        kernels::analyze(g, tmp_, out, exec_);
    } else {
        out.setZero(np, nm);
    }
    // mode-local part: i((q^2 - s^2)/2 - mu - V0)
    for (int j = 0; j < nm; ++j) {
        const double s = g.wavenumber(j);
        const double shift = 0.5 * s * s + mu_ + v_const_;
        for (int n = 0; n < np; ++n) {
            cd q2 = (n + 0.5) * in(n, j);
            if (n >= 2) q2 += 0.5 * std::sqrt(n * (n - 1.0)) * in(n - 2, j);
            if (n + 2 < np) q2 += 0.5 * std::sqrt((n + 1.0) * (n + 2.0)) * in(n + 2, j);
            out(n, j) += cd(0.0, 1.0) * (0.5 * q2 - shift * in(n, j));
        }
    }
}

SpectralField apply_A_spectral(const SpectralField& sf, const DimensionlessParams& dp) {
    AOperator op(sf.grid, dp);
    SpectralField out(sf.grid);
    op.apply(sf.coeffs, out.coeffs);
    return out;
}

PhaseField apply_A_prime(const PhaseField& field, const DimensionlessParams& dp) {
    const PhaseGrid& g = *field.grid;
    const int nx = g.nx(), npn = g.n_pnodes();
    Eigen::MatrixXcd fx = field.values;
    g.fft_x_forward(fx);
    for (int i = 0; i < nx; ++i) {
        double k = (i == nx / 2) ? 0.0 : g.fft_wavenumber(i);
        fx.col(i) *= cd(0.0, k);
    }
    g.fft_x_backward(fx);

    PhaseField out(field.grid);
    const bool flat = dp.potential.is_flat();
    Eigen::MatrixXcd fp;
    if (!flat) fp = to_position_dp(to_spectral(field)).values;
    for (int i = 0; i < nx; ++i) {
        const double x = g.x(i);
        const double v = dp.potential.value(x), vx = dp.potential.gradient(x);
        for (int k = 0; k < npn; ++k) {
            const double p = g.p(k);
            cd r = -p * fx(k, i) - cd(0.0, 1.0) * (dp.mu() + v - 0.5 * p * p) * field.values(k, i);
            if (!flat) r += vx * fp(k, i);
            out.values(k, i) = r;
        }
    }
    return out;
}

}  // namespace kqm
