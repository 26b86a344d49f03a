#include "analysis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "core/errors.hpp"
#include "evolution/liouville.hpp"
#include "projector/projector.hpp"

namespace kqm {

DecayFit relaxation_rate(const Trajectory<SpectralField>& traj, double t_start, double t_end) {
    return fit_exponential(traj.times, traj.residual, t_start, t_end, 1e-10);
}

GeneratorCheck projected_generator_check(const ConfigField& psi, const DimensionlessParams& dp, ZeroPointShift z) {
    const PhaseGrid& g = *psi.grid;
    GeneratorCheck out;
    out.lhs = restrict_to_config(apply_A_prime(lift(psi), dp));

    Eigen::VectorXcd d2 = psi.values;
    g.fft_forward(d2);
    for (int i = 0; i < g.nx(); ++i) {
        const double k = 2 * i == g.nx() ? 0.0 : g.fft_wavenumber(i);
        d2(i) *= -k * k;
    }
    g.fft_backward(d2);
    out.rhs = ConfigField(psi.grid);
    const double c = dp.mu() + zero_point_value(z);
    for (int i = 0; i < g.nx(); ++i) {
        const cd h = -0.5 * d2(i) + (dp.potential.value(g.x(i)) + c) * psi.values(i);
        out.rhs.values(i) = cd(0.0, -1.0) * h;
    }
    ConfigField d(psi.grid);
    d.values = out.lhs.values - out.rhs.values;
    const double nr = l2_norm(out.rhs);
    out.residual = nr > 0.0 ? l2_norm(d) / nr : l2_norm(d);
    return out;
}

SchrodingerLimitReport schrodinger_limit_error(const ConfigField& psi0, const DimensionlessParams& dp,
                                               const std::vector<double>& eps_list,
                                               const SchrodingerLimitConfig& cfg) {
    if (cfg.n_samples < 1 || !(cfg.slow_time > 0.0) || !(cfg.dt > 0.0))
        throw InvalidParameter("schrodinger_limit: invalid configuration");
    const GridPtr& grid = psi0.grid;
    ConfigField start = psi0;
    normalize(start);
    const SpectralField phi0 = lift_spectral(start);
    SchrodingerLimitReport rep;
    for (double eps : eps_list) {
        if (!(eps > 0.0)) throw InvalidParameter("schrodinger_limit: epsilon must be positive");
        SchrodingerLimitRow row;
        row.epsilon = eps;
        const DimensionlessParams de = dp.with_epsilon(eps);
        DimensionlessParams dref = de;
        dref.rest_energy_ratio = 0.0;
        const SchrodingerPropagator ref(grid, dref, ZeroPointShift::none);

        const double t_end = cfg.slow_time / eps;
        const long per = std::max(1L, std::lround(std::ceil(t_end / (cfg.n_samples * cfg.dt))));
        IntegratorConfig ic;
        ic.dt = t_end / double(per * cfg.n_samples);
        ic.t_end = t_end;
        ic.snapshot_stride = int(per);
        ic.skip_energy = true;
        ic.keep_snapshots = false;
        auto sink = [&](double t, const SpectralField& sf) {
            ConfigField a = restrict_to_config(sf);
            a.values *= std::exp(cd(0.0, eps * (de.mu() - 0.5) * t));
            normalize(a);
            ConfigField b = ref.state_at(start, t);
            normalize(b);
            a.values -= b.values;
            row.times.push_back(t);
            row.errors.push_back(l2_norm(a));
        };
        auto tr = evolve_full(phi0, de, ic, sink);
        if (tr.failed) {
            row.failed = true;
            row.message = tr.message;
        }
        row.max_error = row.errors.empty() ? 0.0 : *std::max_element(row.errors.begin(), row.errors.end());
        rep.rows.push_back(std::move(row));
    }
    // monotone: error shrinks as eps shrinks
    for (size_t a = 0; a < rep.rows.size(); ++a)
        for (size_t b = 0; b < rep.rows.size(); ++b)
            if (rep.rows[a].epsilon < rep.rows[b].epsilon && !(rep.rows[a].max_error < rep.rows[b].max_error))
                rep.monotone = false;
    return rep;
}

FirstOrderReport first_order_eigenvalues(const GridPtr& grid, const DimensionlessParams& dp, int K, ZeroPointShift z) {
    const Eigenbasis eb = hamiltonian_eigenpairs(grid, dp, K, z);
    AOperator A(grid, dp);
    Eigen::MatrixXcd M(K, K);
    Eigen::MatrixXcd out;
    for (int l = 0; l < K; ++l) {
        SpectralField sf = lift_spectral(eb.states[size_t(l)]);
        A.apply(sf.coeffs, out);
        sf.coeffs = out;
        const ConfigField r = restrict_to_config(sf);
        for (int k = 0; k < K; ++k) M(k, l) = dp.epsilon * inner_product(eb.states[size_t(k)], r);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
    if (es.info() != Eigen::Success) throw NumericFailure("first_order_eigenvalues: eigensolver failed");
    std::vector<cd> ev(es.eigenvalues().data(), es.eigenvalues().data() + K);
    std::sort(ev.begin(), ev.end(), [](cd a, cd b) { return a.imag() > b.imag(); });
    FirstOrderReport rep;
    rep.eigenvalues = Eigen::Map<Eigen::VectorXcd>(ev.data(), K);
    rep.expected.resize(K);
    for (int k = 0; k < K; ++k) rep.expected(k) = cd(0.0, -dp.epsilon * eb.energies(k));
    const double im = rep.eigenvalues.imag().cwiseAbs().maxCoeff();
    rep.max_real_ratio = im > 0.0 ? rep.eigenvalues.real().cwiseAbs().maxCoeff() / im : 0.0;
    const double ex = rep.expected.cwiseAbs().maxCoeff();
    rep.mismatch = (rep.eigenvalues - rep.expected).cwiseAbs().maxCoeff() / (ex > 0.0 ? ex : 1.0);
    return rep;
}

ClassicalLimitReport classical_limit_error(const PhaseField& phi0, const DimensionlessParams& dp,
                                           const ClassicalLimitConfig& cfg) {
    if (cfg.n_intervals < 1 || !(cfg.t_end > 0.0) || !(cfg.dt > 0.0))
        throw InvalidParameter("classical_limit: invalid configuration");
    const long per = std::max(1L, std::lround(std::ceil(cfg.t_end / (cfg.n_intervals * cfg.dt))));
    IntegratorConfig ic;
    ic.dt = cfg.t_end / double(per * cfg.n_intervals);
    ic.t_end = cfg.t_end;
    ic.snapshot_stride = int(per);
    ic.include_B = false;
    ic.skip_energy = true;
    auto full = evolve_full(phi0, dp, ic);
    if (full.failed) throw NumericFailure("classical_limit: " + full.message);

    LiouvilleConfig lc;
    lc.t_end = cfg.t_end;
    lc.n_intervals = cfg.n_intervals;
    lc.stencil = cfg.stencil;
    auto rho = evolve_liouville(abs_squared(phi0), dp, lc);

    ClassicalLimitReport rep;
    rep.mass_loss = !rho.message.empty();
    const double scale = phi0.values.cwiseAbs().maxCoeff();
    for (size_t k = 0; k < full.snapshots.size(); ++k) {
        const double t = full.snapshot_times[k];
        const PhaseField f = to_position(full.snapshots[k]);
        const PhaseDensity a = abs_squared(f);
        const PhaseDensity& b = rho.snapshots[k];
        const PhaseField c = characteristics_solution(phi0, dp, t);
        rep.times.push_back(t);
        rep.l1.push_back(l1_distance(a, b));
        rep.max_abs.push_back((a.values - b.values).cwiseAbs().maxCoeff());
        rep.char_diff.push_back((c.values - f.values).cwiseAbs().maxCoeff() / scale);
    }
    rep.max_l1 = *std::max_element(rep.l1.begin(), rep.l1.end());
    rep.max_pointwise = *std::max_element(rep.max_abs.begin(), rep.max_abs.end());
    rep.max_char_diff = *std::max_element(rep.char_diff.begin(), rep.char_diff.end());
    return rep;
}

}  // namespace kqm
