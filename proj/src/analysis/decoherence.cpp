#include "analysis/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "core/errors.hpp"
#include "evolution/integrator.hpp"
#include "projector/projector.hpp"

namespace kqm {

namespace {

DecoherenceRun run_one(const Eigenbasis& eb, const Eigen::VectorXcd& c0, const DimensionlessParams& dp, double eps,
                       const DecoherenceConfig& cfg) {
    DecoherenceRun run;
    run.epsilon = eps;
    const DimensionlessParams de = dp.with_epsilon(eps);
    const int K = int(eb.states.size());

    ConfigField psi0 = eb.combine(c0);
    normalize(psi0);
    const SpectralField phi0 = lift_spectral(psi0);

    const double t_end = eps > 0.0 ? cfg.horizon / (eps * eps) : cfg.horizon;
    const long per = std::max(1L, std::lround(std::ceil(cfg.sample_every / cfg.dt)));
    IntegratorConfig ic;
    ic.dt = cfg.sample_every / double(per);
    ic.t_end = t_end;
    ic.renormalize = true;
    ic.snapshot_stride = int(per);
    ic.skip_energy = true;
    ic.keep_snapshots = false;

    std::vector<Eigen::VectorXcd> cols;
    auto sink = [&](double t, const SpectralField& sf) {
        ConfigField r = restrict_to_config(sf);
        normalize(r);
        Eigen::VectorXcd c = eb.project(r);
        run.bessel_excess = std::max(run.bessel_excess, c.squaredNorm() - 1.0);
        run.modes.times.push_back(t);
        cols.push_back(c);
    };
    auto tr = evolve_full(phi0, de, ic, sink);
    const int nt = int(cols.size());
    run.modes.c.resize(K, nt);
    for (int s = 0; s < nt; ++s) run.modes.c.col(s) = cols[size_t(s)];
    if (tr.failed || nt == 0) {
        run.failed = true;
        run.message = tr.failed ? tr.message : "no samples recorded";
        return run;
    }

    const Eigen::VectorXd last = run.modes.c.col(nt - 1).cwiseAbs2();
    run.final_purity = last.maxCoeff() / last.sum();

    // significant components of the initial state
    const double cmax = c0.cwiseAbs().maxCoeff();
    for (int k = 0; k < c0.size(); ++k)
        if (std::abs(c0(k)) > 1e-3 * cmax) run.components.push_back(k);
    if (run.components.size() < 2) return run;

    std::vector<double> mag(static_cast<size_t>(nt));
    double best = -1e300;
    for (int k : run.components) {
        for (int s = 0; s < nt; ++s) mag[size_t(s)] = std::abs(run.modes.c(k, s));
        DecayFit f = fit_exponential(run.modes.times, mag, cfg.fit_start, t_end, 1e-12);
        run.mode_fits.push_back(f);
        if (f.rate > best) {
            best = f.rate;
            run.survivor = k;
        }
    }
    // the subdominant component is the strongest competitor of the survivor
    double second = -1e300;
    for (size_t a = 0; a < run.components.size(); ++a)
        if (run.components[a] != run.survivor && run.mode_fits[a].rate > second) {
            second = run.mode_fits[a].rate;
            run.subdominant = run.components[a];
        }
    for (int s = 0; s < nt; ++s)
        mag[size_t(s)] = std::abs(run.modes.c(run.subdominant, s)) / std::abs(run.modes.c(run.survivor, s));
    run.ratio_fit = fit_exponential(run.modes.times, mag, cfg.fit_start, t_end, 1e-12);
    return run;
}

}  // namespace

DecoherenceReport decoherence_experiment(const GridPtr& grid, const Eigen::VectorXcd& c0,
                                         const DimensionlessParams& dp, const DecoherenceConfig& cfg) {
    if (cfg.eps_list.empty()) throw InvalidParameter("decoherence: empty eps list");
    if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0) || !(cfg.sample_every > 0.0))
        throw InvalidParameter("decoherence: invalid configuration");
    if (c0.size() > cfg.basis_size) throw InvalidParameter("decoherence: more coefficients than basis states");
    int significant = 0;
    for (Eigen::Index k = 0; k < c0.size(); ++k)
        if (std::abs(c0(k)) > 1e-3 * c0.cwiseAbs().maxCoeff()) ++significant;
    if (significant < 2) throw InvalidParameter("decoherence: need at least two significant components");

    const Eigenbasis eb = hamiltonian_eigenpairs(grid, dp, cfg.basis_size);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(cfg.basis_size);
    c.head(c0.size()) = c0;

    DecoherenceReport rep;
    for (double eps : cfg.eps_list) rep.runs.push_back(run_one(eb, c, dp, eps, cfg));

    rep.survivor = rep.runs.front().survivor;
    for (const auto& r : rep.runs) {
        if (r.failed) {
            rep.inconclusive = true;
            rep.reason = fmt::format("run at eps = {} failed: {}", r.epsilon, r.message);
        }
        if (r.survivor != rep.survivor) rep.survivor = -1;
        const double floor = std::max(3.0 * r.ratio_fit.rate_stderr, 1e-3 * r.epsilon * r.epsilon);
        if (!(std::abs(r.ratio_fit.rate) > floor) && !rep.inconclusive) {
            rep.inconclusive = true;
            rep.reason = fmt::format("eps = {}: fitted rate {:.3g} indistinguishable from 0 (floor {:.3g})",
                                     r.epsilon, r.ratio_fit.rate, floor);
        }
    }
    if (rep.runs.size() >= 2) {
        const auto& a = rep.runs[0].ratio_fit;
        const auto& b = rep.runs[1].ratio_fit;
        rep.rate_ratio = b.rate != 0.0 ? a.rate / b.rate : 0.0;
        std::vector<double> le, lr;
        for (const auto& r : rep.runs) {
            le.push_back(std::log(r.epsilon));
            lr.push_back(std::log(std::max(std::abs(r.ratio_fit.rate), 1e-300)));
        }
        if (le.size() >= 3) {
            rep.loglog_slope = fit_line(le, lr).slope;
        } else {
            rep.loglog_slope = (lr[1] - lr[0]) / (le[1] - le[0]);
        }
    }
    return rep;
}

}  // namespace kqm
