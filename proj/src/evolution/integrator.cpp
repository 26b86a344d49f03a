#include "evolution/integrator.hpp"

#include <cmath>
#include <limits>
#include <fmt/format.h>

#include "core/errors.hpp"
#include "evolution/schrodinger.hpp"
#include "projector/projector.hpp"

namespace kqm {

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("integrator: dt must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidParameter("integrator: t_end must be >= 0");
    if (snapshot_stride < 0) throw InvalidParameter("integrator: snapshot_stride must be >= 0");
}

namespace {
// same bound as AOperator::stiffness_scale, without building the operator
double stiffness(const PhaseGrid& g, const DimensionlessParams& dp) {
    const double qmax = std::sqrt(2.0 * g.np() + 1.0);
    double vx = 0.0;
    for (int i = 0; i < g.nx(); ++i) vx = std::max(vx, std::abs(dp.potential.gradient(g.x(i))));
    return std::max(g.s_max() * (g.s_max() + qmax), vx * qmax);
}
}  // namespace

double max_stable_dt(const PhaseGrid& g, const DimensionlessParams& dp) {
    const double scale = dp.epsilon * stiffness(g, dp);
    return scale > 0.0 ? 0.5 / scale : std::numeric_limits<double>::infinity();
}

double default_dt(const PhaseGrid& g, const DimensionlessParams& dp) {
    return 0.01 / std::max(1.0, dp.epsilon * stiffness(g, dp));
}

FullIntegrator::FullIntegrator(GridPtr grid, const DimensionlessParams& dp, const IntegratorConfig& cfg)
    : grid_(grid), dp_(dp), cfg_(cfg), A_(grid, dp) {
    cfg_.validate();
    const double scale = dp.epsilon * A_.stiffness_scale();
    if (cfg_.dt * scale > 0.5)
        throw InvalidParameter(fmt::format("integrator: dt = {:.6g} violates the step bound eps*dt*{:.6g} <= 0.5 "
                                           "(largest stable dt = {:.6g})",
                                           cfg_.dt, A_.stiffness_scale(), 0.5 / scale));
    E_ = OUBasis(grid_->np()).propagator(cfg_.dt);
}

void FullIntegrator::rk4(Eigen::MatrixXcd& c, double h) {
    const double eh = dp_.epsilon * h;
    A_.apply(c, k1_);
    y_ = c + (0.5 * eh) * k1_;
    A_.apply(y_, k2_);
    y_ = c + (0.5 * eh) * k2_;
    A_.apply(y_, k3_);
    y_ = c + eh * k3_;
    A_.apply(y_, k4_);
    c += (eh / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
}

void FullIntegrator::step(Eigen::MatrixXcd& c) {
    const bool has_A = dp_.epsilon != 0.0;
    if (has_A) rk4(c, 0.5 * cfg_.dt);
    if (cfg_.include_B) c = E_ * c;
    if (has_A) rk4(c, 0.5 * cfg_.dt);
    if (cfg_.renormalize) {
        const double n = std::sqrt(grid_->lx()) * c.norm();
        if (n > 0.0) c /= n;
    }
}

double residual_norm(const SpectralField& sf) {
    SpectralField d = project_P0(sf);
    d.coeffs = sf.coeffs - d.coeffs;
    return l2_norm(d);
}

double restricted_energy(const SpectralField& sf, const DimensionlessParams& dp) {
    ConfigField psi = restrict_to_config(sf);
    const double n2 = std::norm(l2_norm(psi));
    if (n2 == 0.0) return 0.0;
    ConfigField h = apply_hamiltonian(psi, dp, ZeroPointShift::minus_half);
    return inner_product(psi, h).real() / n2;
}

Trajectory<SpectralField> evolve_full(const SpectralField& phi0, const DimensionlessParams& dp,
                                      const IntegratorConfig& cfg, const SnapshotSink<SpectralField>& sink) {
    if (!phi0.coeffs.allFinite()) throw InvalidParameter("evolve_full: initial field is not finite");
    FullIntegrator integ(phi0.grid, dp, cfg);
    Trajectory<SpectralField> tr;
    SpectralField cur = phi0;
    if (cfg.renormalize) {
        const double n = l2_norm(cur);
        if (n == 0.0) throw InvalidParameter("evolve_full: cannot renormalize a zero field");
        cur.coeffs /= n;
    }
    auto record = [&](double t) {
        tr.record(t, l2_norm(cur), residual_norm(cur), cfg.skip_energy ? 0.0 : restricted_energy(cur, dp));
    };
    auto snap = [&](double t) {
        if (cfg.keep_snapshots || t == 0.0) tr.snapshot(t, cur);
        if (sink) sink(t, cur);
    };
    const long nsteps = std::lround(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    record(0.0);
    snap(0.0);
    Eigen::MatrixXcd last_good;
    for (long s = 1; s <= nsteps; ++s) {
        last_good = cur.coeffs;
        integ.step(cur.coeffs);
        const double t = s * cfg.dt;
        if (!cur.coeffs.allFinite()) {
            cur.coeffs = last_good;
            const double tg = (s - 1) * cfg.dt;
            if (tr.snapshot_times.back() != tg) tr.snapshot(tg, cur);
            tr.failed = true;
            tr.message = fmt::format("non-finite values at t' = {:.6g}", t);
            return tr;
        }
        record(t);
        if ((cfg.snapshot_stride > 0 && s % cfg.snapshot_stride == 0) || s == nsteps) snap(t);
    }
    if (!cfg.keep_snapshots && nsteps > 0) tr.snapshot(nsteps * cfg.dt, cur);
    return tr;
}

Trajectory<SpectralField> evolve_full(const PhaseField& phi0, const DimensionlessParams& dp,
                                      const IntegratorConfig& cfg, const SnapshotSink<SpectralField>& sink) {
    if (!all_finite(phi0)) throw InvalidParameter("evolve_full: initial field is not finite");
    return evolve_full(to_spectral(phi0), dp, cfg, sink);
}

Eigen::MatrixXcd assemble_generator(const GridPtr& grid, const DimensionlessParams& dp, bool include_B) {
    const int np = grid->np(), nm = grid->n_modes(), dim = np * nm;
    AOperator A(grid, dp, Exec::serial);
    Eigen::MatrixXcd G(dim, dim);
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(np, nm), out;
    for (int col = 0; col < dim; ++col) {
        e(col % np, col / np) = 1.0;
        A.apply(e, out);
        G.col(col) = dp.epsilon * out.reshaped();
        e(col % np, col / np) = 0.0;
    }
    if (include_B) {
        const Eigen::MatrixXd L = OUBasis(np).generator();
        for (int j = 0; j < nm; ++j) G.block(j * np, j * np, np, np) += L;
    }
    return G;
}

}  // namespace kqm
