#include "evolution/kramers.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "core/errors.hpp"
#include "core/fft.hpp"
#include "core/hermite.hpp"
#include "spectral_ops/spectral.hpp"

namespace kqm {

namespace {

class KramersStepper {
  public:
    KramersStepper(const GridPtr& g, const DimensionlessParams& dp, double dt)
        : g_(g),
          eps_(dp.epsilon),
          np_(g->np()),
          nx_(g->nx()),
          fwd_(nx_, np_, np_, 1, FftPlan::Direction::forward),
          bwd_(nx_, np_, np_, 1, FftPlan::Direction::backward) {
        vx_.resize(nx_);
        for (int i = 0; i < nx_; ++i) vx_(i) = dp.potential.gradient(g->x(i));
        E_ = OUBasis(np_).propagator(dt);
        k_.resize(nx_);
        for (int i = 0; i < nx_; ++i) k_(i) = (2 * i == nx_) ? 0.0 : g->fft_wavenumber(i);
        up_.resize(np_);
        for (int n = 0; n < np_; ++n) up_(n) = std::sqrt(0.5 * n);
    }

    // T a = V'_x (df/dp)_n - (p df/dx)_n
    void transport(const Eigen::MatrixXd& a, Eigen::MatrixXd& out) {
        work_ = a.cast<cd>();
        fwd_.execute(work_.data());
        for (int i = 0; i < nx_; ++i) work_.col(i) *= cd(0.0, k_(i) / nx_);
        bwd_.execute(work_.data());
        const Eigen::MatrixXd ax = work_.real();
        out.setZero(np_, nx_);
        for (int n = 0; n < np_; ++n) {
            // (p g)_n = sqrt(n/2) g_{n-1} + sqrt((n+1)/2) g_{n+1}
            // (g')_n  = sqrt((n+1)/2) g_{n+1} - sqrt(n/2) g_{n-1}
            if (n > 0) out.row(n) -= up_(n) * (ax.row(n - 1) + vx_.transpose().cwiseProduct(a.row(n - 1)));
            if (n + 1 < np_)
                out.row(n) += up_(n + 1) * (vx_.transpose().cwiseProduct(a.row(n + 1)) - ax.row(n + 1));
        }
    }

    void rk4(Eigen::MatrixXd& a, double h) {
        const double eh = eps_ * h;
        transport(a, k1_);
        y_ = a + 0.5 * eh * k1_;
        transport(y_, k2_);
        y_ = a + 0.5 * eh * k2_;
        transport(y_, k3_);
        y_ = a + eh * k3_;
        transport(y_, k4_);
        a += (eh / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

    void step(Eigen::MatrixXd& a, double dt, bool include_B) {
        if (eps_ != 0.0) rk4(a, 0.5 * dt);
        if (include_B) a = E_ * a;
        if (eps_ != 0.0) rk4(a, 0.5 * dt);
    }

  private:
    GridPtr g_;
    double eps_;
    int np_, nx_;
    FftPlan fwd_, bwd_;
    Eigen::VectorXd vx_, k_, up_;
    Eigen::MatrixXd E_, k1_, k2_, k3_, k4_, y_;
    Eigen::MatrixXcd work_;
};

double stiffness(const PhaseGrid& g, const DimensionlessParams& dp) {
    const double qmax = std::sqrt(2.0 * g.np() + 1.0);
    double vx = 0.0;
    for (int i = 0; i < g.nx(); ++i) vx = std::max(vx, std::abs(dp.potential.gradient(g.x(i))));
    return std::max(std::numbers::pi / g.dx() * qmax, vx * qmax);
}

}  // namespace

double kramers_max_dt(const PhaseGrid& g, const DimensionlessParams& dp) {
    const double s = dp.epsilon * stiffness(g, dp);
    return s > 0.0 ? 0.5 / s : std::numeric_limits<double>::infinity();
}

PhaseDensity gibbs_density(const GridPtr& grid, const DimensionlessParams& dp) {
    const PhaseGrid& g = *grid;
    const double pi = std::numbers::pi;
    double z;
    if (dp.potential.kind() == PotentialSpec::Kind::harmonic && dp.potential.omega() > 0.0) {
        z = 2.0 * pi / dp.potential.omega() * std::exp(-dp.potential.offset());
    } else {
        double acc = 0.0;
        for (int i = 0; i < g.nx(); ++i) acc += std::exp(-dp.potential.value(g.x(i)));
        z = std::sqrt(2.0 * pi) * acc * g.dx();
    }
    PhaseDensity f(grid);
    for (int i = 0; i < g.nx(); ++i) {
        const double ev = std::exp(-dp.potential.value(g.x(i)));
        for (int k = 0; k < g.n_pnodes(); ++k) f.values(k, i) = std::exp(-0.5 * g.p(k) * g.p(k)) * ev / z;
    }
    return f;
}

Trajectory<PhaseDensity> evolve_classical_kramers(const PhaseDensity& f0, const DimensionlessParams& dp,
                                                  const IntegratorConfig& cfg) {
    cfg.validate();
    if (!f0.values.allFinite()) throw InvalidParameter("kramers: initial density is not finite");
    const GridPtr& grid = f0.grid;
    const PhaseGrid& g = *grid;
    const double smax = dp.epsilon * stiffness(g, dp);
    if (cfg.dt * smax > 0.5)
        throw InvalidParameter(fmt::format("kramers: dt = {:.6g} exceeds the step bound {:.6g}", cfg.dt, 0.5 / smax));
    const int np = g.np(), nx = g.nx();
    const Eigen::MatrixXd psi = hermite_functions(g.ps(), np);  // (n_pnodes x np)
    Eigen::VectorXd I(np), m2(np);
    for (int n = 0; n < np; ++n) I(n) = hermite_integral(n);
    // integral of p^2 psi_n from the recurrences
    for (int n = 0; n < np; ++n) {
        double v = (n + 0.5) * I(n);
        if (n >= 2) v += 0.5 * std::sqrt(n * (n - 1.0)) * I(n - 2);
        if (n + 2 < np) v += 0.5 * std::sqrt((n + 1.0) * (n + 2.0)) * I(n + 2);
        m2(n) = v;
    }
    Eigen::VectorXd vpot(nx);
    for (int i = 0; i < nx; ++i) vpot(i) = dp.potential.value(g.x(i));

    Eigen::MatrixXd a = g.p_spacing() * psi.transpose() * f0.values;  // (np x nx)
    auto mass = [&] { return g.dx() * (I.transpose() * a).sum(); };
    auto energy = [&] {
        const Eigen::RowVectorXd rho = I.transpose() * a;
        const Eigen::RowVectorXd kin = 0.5 * m2.transpose() * a;
        const double m = rho.sum();
        return m != 0.0 ? (kin.sum() + rho.dot(vpot.transpose())) / m : 0.0;
    };
    auto field = [&] {
        PhaseDensity f(grid);
        f.values = psi * a;
        return f;
    };
    const double m0 = mass();
    KramersStepper st(grid, dp, cfg.dt);
    Trajectory<PhaseDensity> tr;
    tr.record(0.0, m0, 0.0, energy());
    tr.snapshot(0.0, field());
    const long nsteps = std::lround(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    for (long s = 1; s <= nsteps; ++s) {
        Eigen::MatrixXd last = a;
        st.step(a, cfg.dt, cfg.include_B);
        if (!a.allFinite()) {
            a = last;
            tr.snapshot((s - 1) * cfg.dt, field());
            tr.failed = true;
            tr.message = fmt::format("non-finite values at t' = {:.6g}", s * cfg.dt);
            return tr;
        }
        if (cfg.renormalize && m0 != 0.0) a *= m0 / mass();
        const double t = s * cfg.dt;
        tr.record(t, mass(), 0.0, energy());
        if ((cfg.snapshot_stride > 0 && s % cfg.snapshot_stride == 0) || s == nsteps) tr.snapshot(t, field());
    }
    return tr;
}

Trajectory<PhaseDensity> evolve_classical_kramers(const PhaseDensity& f0, const PhysicalParams& params,
                                                  PhysicalTime t_end, double dt) {
    const DimensionlessParams dp = nondimensionalize(params);
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.t_end = dp.to_scaled_t(t_end);
    return evolve_classical_kramers(f0, dp, cfg);
}

}  // namespace kqm
