#include "cli/runner.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <memory>

#include "analysis/analysis.hpp"
#include "analysis/decoherence.hpp"
#include "cli/csv.hpp"
#include "cli/lock.hpp"
#include "cli/presets.hpp"
#include "cli/svg.hpp"
#include "core/errors.hpp"
#include "evolution/integrator.hpp"
#include "evolution/kramers.hpp"
#include "evolution/schrodinger.hpp"
#include "projector/densities.hpp"
#include "projector/projector.hpp"

#ifndef KQM_VERSION
#define KQM_VERSION "dev"
#endif

namespace kqm::cli {

namespace fs = std::filesystem;

bool RunResult::has(const std::string& key) const {
    for (const auto& [k, v] : metrics)
        if (k == key) return true;
    return false;
}

double RunResult::metric(const std::string& key) const {
    for (const auto& [k, v] : metrics)
        if (k == key) return v;
    return std::numeric_limits<double>::quiet_NaN();
}

std::string code_version() { return KQM_VERSION; }

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }
std::string eps_tag(double e) { return fmt::format("{:g}", e); }

ZeroPointShift zero_point_of(const std::string& s) {
    if (s == "plus-half") return ZeroPointShift::plus_half;
    if (s == "none") return ZeroPointShift::none;
    return ZeroPointShift::minus_half;
}

// Collects what an experiment produced; the manifest is written from it
// whatever the outcome.
struct Context {
    const ScenarioConfig& cfg;
    fs::path dir;
    bool quiet;
    RunResult& res;
    std::vector<std::pair<std::string, std::string>> derived, tolerances, checks;

    std::string path(const std::string& name) {
        res.files.push_back(name);
        return (dir / name).string();
    }
    void metric(const std::string& k, double v) { res.metrics.emplace_back(k, v); }
    void tol(const std::string& k, double v) { tolerances.emplace_back(k, num(v)); }
    void check(const std::string& k, bool ok) { checks.emplace_back(k, ok ? "pass" : "fail"); }
    void svg(const std::string& name, const std::string& text) {
        if (cfg.output.emit_svg) write_text_file(path(name), text);
    }
    void say(const std::string& s) const {
        if (!quiet) std::fprintf(stderr, "%s\n", s.c_str());
    }
};

// Turns a failed trajectory into a numeric failure.
template <class T>
void require_ok(const Trajectory<T>& tr) {
    if (tr.failed) throw NumericFailure(tr.message);
}

IntegratorConfig integrator_of(const ScenarioConfig& c) {
    IntegratorConfig ic;
    ic.dt = c.integrator.dt;
    ic.t_end = c.integrator.t_end;
    ic.renormalize = c.integrator.renormalize;
    ic.snapshot_stride = c.integrator.snapshot_stride;
    return ic;
}

void grid_info(Context& cx, const PhaseGrid& g) {
    cx.derived.emplace_back("grid.retained_modes", std::to_string(g.n_modes()));
    cx.derived.emplace_back("grid.s_max", num(g.s_max()));
    cx.derived.emplace_back("grid.p_nodes", std::to_string(g.n_pnodes()));
    cx.derived.emplace_back("grid.p_spacing", num(g.p_spacing()));
    cx.derived.emplace_back("grid.dx", num(g.dx()));
}

// --- experiments -------------------------------------------------------------

void run_spectrum(Context& cx) {
    const auto& c = cx.cfg;
    auto g = make_grid(c.grid);
    grid_info(cx, *g);
    CsvWriter w(cx.path("series_spectrum.csv"),
                {"s' [-]", "m [-]", "eigenvalue [gamma']", "expected [gamma']", "deviation [gamma']"});
    LinePlot plot{"OU spectrum per Fourier mode", "index m", "eigenvalue", false, {}, {}};
    double worst = 0.0;
    for (double s : c.spectrum.s_values) {
        const auto ev = ou_eigenvalues(*g, s, c.spectrum.count - 1);
        LineSeries ls{fmt::format("s' = {:g}", s), {}, {}};
        for (int m = 0; m < int(ev.size()); ++m) {
            const double d = std::abs(ev[size_t(m)] + m);
            worst = std::max(worst, d);
            w.row({s, (long long)m, ev[size_t(m)], double(-m), d});
            ls.x.push_back(m);
            ls.y.push_back(ev[size_t(m)]);
        }
        plot.series.push_back(std::move(ls));
    }
    w.close();
    cx.metric("max_deviation", worst);
    cx.tol("spectrum.tolerance", c.spectrum.tolerance);
    cx.check("eigenvalues are 0, -1, -2, ...", worst <= c.spectrum.tolerance);
    plot.notes.push_back(fmt::format("max deviation {:.3g}", worst));
    cx.svg("plot_spectrum.svg", line_plot_svg(plot));
    cx.say(fmt::format("spectrum: max deviation from -m = {:.3g}", worst));
}

void run_relax(Context& cx) {
    const auto& c = cx.cfg;
    auto g = make_grid(c.grid);
    grid_info(cx, *g);
    const auto dp = make_params(c);
    const SpectralField phi0 = random_field(g, c.output.seed, c.relax.decay, c.relax.kwidth);
    auto tr = evolve_full(phi0, dp, integrator_of(c));
    {
        CsvWriter w(cx.path("series_relax.csv"),
                    {"t' [1/gamma]", "residual ||phi - P0 phi|| [-]", "norm [-]", "energy [kT]"});
        for (size_t i = 0; i < tr.times.size(); ++i) w.row({tr.times[i], tr.residual[i], tr.norm[i], tr.energy[i]});
        w.close();
    }
    require_ok(tr);
    const DecayFit f = relaxation_rate(tr, c.relax.fit_start, c.relax.fit_end);
    cx.metric("rate", f.rate);
    cx.metric("rate_stderr", f.rate_stderr);
    cx.metric("r_squared", f.r_squared);
    cx.metric("fit_points", double(f.n));
    if (dp.epsilon == 0.0) cx.check("rate = -1 within 1%", std::abs(f.rate + 1.0) <= 0.01);
    LinePlot plot{"Relaxation to the stationary subspace", "t'", "||phi - P0 phi||", true,
                  {{"residual", tr.times, tr.residual}}, {fmt::format("fitted rate {:.6f}", f.rate)}};
    cx.svg("plot_relax.svg", line_plot_svg(plot));
    cx.say(fmt::format("relax: fitted rate {:.6f} +- {:.2g}", f.rate, f.rate_stderr));
}

void run_generator_check(Context& cx) {
    const auto& c = cx.cfg;
    auto g = make_grid(c.grid);
    grid_info(cx, *g);
    const auto dp = make_params(c);
    const ZeroPointShift z = zero_point_of(c.generator.zero_point);
    const auto suite = generator_suite(g);
    double worst = 0.0, worst_m = 0.0, worst_p = 0.0;
    LinePlot plot{"Projected generator residual", "state", "relative residual", true, {}, {}};
    LineSeries sz{"configured", {}, {}}, sm{"-1/2", {}, {}}, sp{"+1/2", {}, {}};
    {
        CsvWriter w(cx.path("series_generator.csv"),
                    {"state", "residual configured [-]", "residual minus-half [-]", "residual plus-half [-]"});
        for (size_t i = 0; i < suite.size(); ++i) {
            const double r = projected_generator_check(suite[i].psi, dp, z).residual;
            const double rm = projected_generator_check(suite[i].psi, dp, ZeroPointShift::minus_half).residual;
            const double rp = projected_generator_check(suite[i].psi, dp, ZeroPointShift::plus_half).residual;
            worst = std::max(worst, r);
            worst_m = std::max(worst_m, rm);
            worst_p = std::max(worst_p, rp);
            w.row({suite[i].name, r, rm, rp});
            sz.x.push_back(double(i));
            sz.y.push_back(r);
            sm.x.push_back(double(i));
            sm.y.push_back(rm);
            sp.x.push_back(double(i));
            sp.y.push_back(rp);
        }
        w.close();
    }
    cx.metric("max_residual", worst);
    cx.metric("max_residual_minus_half", worst_m);
    cx.metric("max_residual_plus_half", worst_p);

    const FirstOrderReport fo = first_order_eigenvalues(g, dp, c.generator.eigen_count, z);
    {
        CsvWriter w(cx.path("series_first_order.csv"), {"k [-]", "Re lambda [gamma']", "Im lambda [gamma']",
                                                         "Im expected [gamma']", "|lambda - expected| [gamma']"});
        for (int k = 0; k < int(fo.eigenvalues.size()); ++k)
            w.row({(long long)k, fo.eigenvalues(k).real(), fo.eigenvalues(k).imag(), fo.expected(k).imag(),
                   std::abs(fo.eigenvalues(k) - fo.expected(k))});
        w.close();
    }
    cx.metric("first_order_real_ratio", fo.max_real_ratio);
    cx.metric("first_order_mismatch", fo.mismatch);
    cx.tol("generator-check.tolerance", c.generator.tolerance);
    cx.tol("first_order.real_ratio", 1e-8);
    cx.tol("first_order.mismatch", 1e-5);
    cx.tol("eigenpair.residual", 1e-9);
    cx.check("generator residual", worst <= c.generator.tolerance);
    cx.check("first-order eigenvalues imaginary", fo.max_real_ratio <= 1e-8);
    cx.check("first-order eigenvalues match", fo.mismatch <= 1e-5);
    plot.series = {sz, sm, sp};
    plot.notes.push_back("zero point: " + c.generator.zero_point);
    cx.svg("plot_generator.svg", line_plot_svg(plot));
    cx.say(fmt::format("generator-check: max residual {:.3g} ({}), first-order mismatch {:.3g}", worst,
                       c.generator.zero_point, fo.mismatch));
}

void run_schrodinger_limit(Context& cx) {
    const auto& c = cx.cfg;
    auto g = make_grid(c.grid);
    grid_info(cx, *g);
    const auto dp = make_params(c);
    const ConfigField psi0 = initial_state(c, g);
    SchrodingerLimitConfig sc{c.schrodinger.slow_time, c.schrodinger.n_samples, c.integrator.dt};
    const auto rep = schrodinger_limit_error(psi0, dp, c.schrodinger.eps_list, sc);
    LinePlot plot{"Restricted full dynamics vs Schrodinger", "eps t'", "L2 error", true, {}, {}};
    {
        CsvWriter w(cx.path("series_schrodinger_limit.csv"), {"epsilon [-]", "t' [1/gamma]", "eps t' [-]", "L2 error [-]"});
        for (const auto& row : rep.rows) {
            LineSeries ls{fmt::format("eps = {:g}", row.epsilon), {}, {}};
            for (size_t i = 0; i < row.times.size(); ++i) {
                w.row({row.epsilon, row.times[i], row.epsilon * row.times[i], row.errors[i]});
                ls.x.push_back(row.epsilon * row.times[i]);
                ls.y.push_back(row.errors[i]);
            }
            plot.series.push_back(std::move(ls));
        }
        w.close();
    }
    for (const auto& row : rep.rows)
        if (row.failed) throw NumericFailure(fmt::format("eps {:g}: {}", row.epsilon, row.message));
    for (const auto& row : rep.rows) cx.metric("max_error@" + eps_tag(row.epsilon), row.max_error);
    for (size_t i = 1; i < rep.rows.size(); ++i)
        cx.metric(fmt::format("error_ratio@{}/{}", eps_tag(rep.rows[i].epsilon), eps_tag(rep.rows[i - 1].epsilon)),
                  rep.rows[i - 1].max_error > 0 ? rep.rows[i].max_error / rep.rows[i - 1].max_error : 0.0);
    cx.metric("monotone", rep.monotone ? 1.0 : 0.0);
    cx.check("error decreases with eps", rep.monotone);
    cx.svg("plot_schrodinger_limit.svg", line_plot_svg(plot));
    for (const auto& row : rep.rows)
        cx.say(fmt::format("schrodinger-limit: eps {:g} max error {:.4g}", row.epsilon, row.max_error));
}

void run_density(Context& cx) {
    const auto& c = cx.cfg;
    auto g = make_grid(c.grid);
    grid_info(cx, *g);
    const ConfigField psi = initial_state(c, g);
    const PhaseDensity rho = coherent_density(psi);
    const PhaseDensity w = wigner(psi);
    const PhaseDensity rl = coherent_density_from_lift(psi);
    const Eigen::VectorXd pm = p_marginal(rho);
    const Eigen::VectorXd sm = smoothed_config_density(psi);
    write_field_csv(cx.path("field_coherent.csv"), rho, "rho [-]");
    write_field_csv(cx.path("field_wigner.csv"), w, "W [-]");
    {
        CsvWriter out(cx.path("series_density_marginal.csv"),
                      {"x' [-]", "|psi|^2 [-]", "p-marginal of rho [-]", "smoothed |psi|^2 [-]"});
        for (int i = 0; i < g->nx(); ++i) out.row({g->x(i), std::norm(psi.values(i)), pm(i), sm(i)});
        out.close();
    }
    const double rmin = rho.values.minCoeff(), wmin = w.values.minCoeff();
    const double scale = rho.values.cwiseAbs().maxCoeff();
    const double lift_diff = (rho.values - rl.values).cwiseAbs().maxCoeff() / scale;
    const double marg_diff = (pm - sm).cwiseAbs().maxCoeff();
    cx.metric("coherent_min", rmin);
    cx.metric("wigner_min", wmin);
    cx.metric("coherent_integral", integral(rho));
    cx.metric("wigner_integral", integral(w));
    cx.metric("direct_vs_lift", lift_diff);
    cx.metric("marginal_vs_smoothed", marg_diff);
    cx.derived.emplace_back("density.refinement", std::to_string(density_refinement(*g)));
    cx.tol("coherent.min", -1e-12);
    cx.tol("direct_vs_lift", 1e-8);
    cx.tol("marginal_vs_smoothed", 1e-8);
    cx.check("coherent density >= 0", rmin >= -1e-12);
    cx.check("direct quadrature = |lift|^2", lift_diff <= 1e-8);
    cx.check("p-marginal = smoothed |psi|^2", marg_diff <= 1e-8);

    auto heat = [&](const std::string& title, const PhaseDensity& d, const std::string& note) {
        return HeatMap{title, "x'", "p'", g->x(0), g->x(g->nx() - 1), g->p(0), g->p(g->n_pnodes() - 1), d.values,
                       {fmt::format("min = {:.3g}", d.values.minCoeff()), note}};
    };
    cx.svg("plot_density.svg",
           heat_maps_svg({heat("coherent-state density", rho, rmin >= -1e-12 ? "min >= 0" : "NEGATIVE minimum"),
                          heat("Wigner function", w, wmin < 0 ? "negative minimum" : "no negative values")}));
    cx.say(fmt::format("density: min rho {:.3g}, min W {:.3g}", rmin, wmin));
}

void run_decohere(Context& cx) {
    const auto& c = cx.cfg;
    if (c.initial.preset != "eigen-superposition")
        throw ConfigError("[initial] preset", "decohere needs preset = eigen-superposition");
    auto g = make_grid(c.grid);
    grid_info(cx, *g);
    const auto dp = make_params(c);
    Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(c.decohere.basis_size);
    for (size_t i = 0; i < c.initial.indices.size(); ++i) c0(c.initial.indices[i]) += c.initial.weights[i];
    DecoherenceConfig dc;
    dc.eps_list = c.decohere.eps_list;
    dc.basis_size = c.decohere.basis_size;
    dc.horizon = c.decohere.horizon;
    dc.dt = c.integrator.dt;
    dc.sample_every = c.decohere.sample_every;
    dc.fit_start = c.decohere.fit_start;
    DecoherenceReport rep;
    try {
        rep = decoherence_experiment(g, c0, dp, dc);
    } catch (const InvalidParameter& e) {
        throw ConfigError("[initial] weights", e.what());
    }
    const int K = c.decohere.basis_size;
    for (size_t r = 0; r < rep.runs.size(); ++r) {
        const auto& run = rep.runs[r];
        std::vector<std::string> head{"t' [1/gamma]", "eps^2 t' [-]"};
        for (int k = 0; k < K; ++k) head.push_back(fmt::format("|c_{}| [-]", k));
        head.push_back("purity [-]");
        CsvWriter w(cx.path(fmt::format("series_decohere_{}.csv", r)), head);
        LinePlot plot{fmt::format("Eigenstate populations, eps = {:g}", run.epsilon), "eps^2 t'", "|c_k|", true, {}, {}};
        for (int k = 0; k < K; ++k) plot.series.push_back({fmt::format("|c_{}|", k), {}, {}});
        for (size_t s = 0; s < run.modes.times.size(); ++s) {
            const double t = run.modes.times[s];
            std::vector<CsvCell> cells{t, run.epsilon * run.epsilon * t};
            double tot = 0, top = 0;
            for (int k = 0; k < K; ++k) {
                const double a = std::abs(run.modes.c(k, Eigen::Index(s)));
                cells.push_back(a);
                tot += a * a;
                top = std::max(top, a * a);
                plot.series[size_t(k)].x.push_back(run.epsilon * run.epsilon * t);
                plot.series[size_t(k)].y.push_back(a);
            }
            cells.push_back(tot > 0 ? top / tot : 0.0);
            w.row(cells);
        }
        w.close();
        cx.svg(fmt::format("plot_decohere_{}.svg", r), line_plot_svg(plot));
    }
    {
        CsvWriter w(cx.path("series_decohere_rates.csv"),
                    {"epsilon [-]", "quantity", "rate [gamma']", "rate stderr [gamma']", "r^2 [-]", "final purity [-]"});
        for (const auto& run : rep.runs) {
            for (size_t i = 0; i < run.components.size(); ++i) {
                const auto& f = run.mode_fits[i];
                w.row({run.epsilon, fmt::format("|c_{}|", run.components[i]), f.rate, f.rate_stderr, f.r_squared,
                       run.final_purity});
            }
            w.row({run.epsilon, fmt::format("|c_{}/c_{}|", run.subdominant, run.survivor), run.ratio_fit.rate,
                   run.ratio_fit.rate_stderr, run.ratio_fit.r_squared, run.final_purity});
        }
        w.close();
    }
    for (const auto& run : rep.runs)
        if (run.failed) throw NumericFailure(fmt::format("eps {:g}: {}", run.epsilon, run.message));
    double bessel = 0.0, purity = 1.0;
    for (const auto& run : rep.runs) {
        cx.metric("rate@" + eps_tag(run.epsilon), run.ratio_fit.rate);
        cx.metric("rate_stderr@" + eps_tag(run.epsilon), run.ratio_fit.rate_stderr);
        cx.metric("final_purity@" + eps_tag(run.epsilon), run.final_purity);
        bessel = std::max(bessel, run.bessel_excess);
        purity = std::min(purity, run.final_purity);
    }
    cx.metric("rate_ratio", rep.rate_ratio);
    cx.metric("loglog_slope", rep.loglog_slope);
    cx.metric("survivor", rep.survivor);
    cx.metric("inconclusive", rep.inconclusive ? 1.0 : 0.0);
    cx.metric("min_final_purity", purity);
    cx.metric("bessel_excess", bessel);
    if (rep.inconclusive) cx.derived.emplace_back("decohere.reason", rep.reason);
    cx.tol("decohere.inconclusive_rate", 1e-3);
    cx.tol("eigenpair.residual", 1e-9);
    cx.check("ratio 4 +- 20% per halving", std::abs(rep.rate_ratio - 4.0) <= 0.8);
    cx.check("final purity >= 0.99", purity >= 0.99);
    cx.say(fmt::format("decohere: rate ratio {:.4f}, slope {:.4f}, survivor {}{}", rep.rate_ratio, rep.loglog_slope,
                       rep.survivor, rep.inconclusive ? " (inconclusive)" : ""));
}

void run_classical_limit(Context& cx) {
    const auto& c = cx.cfg;
    auto g = make_grid(c.grid);
    grid_info(cx, *g);
    const auto dp = make_params(c);
    const PhaseField phi0 = lift(initial_state(c, g), LiftConvention::unit_norm);
    ClassicalLimitConfig cc{c.integrator.t_end, c.classical.n_intervals, c.integrator.dt, c.classical.stencil};
    const auto rep = classical_limit_error(phi0, dp, cc);
    {
        CsvWriter w(cx.path("series_classical_limit.csv"),
                    {"t' [1/gamma]", "L1 |phi|^2 vs Liouville [-]", "max abs diff [-]", "characteristics vs full [-]"});
        for (size_t i = 0; i < rep.times.size(); ++i) w.row({rep.times[i], rep.l1[i], rep.max_abs[i], rep.char_diff[i]});
        w.close();
    }
    cx.metric("max_l1", rep.max_l1);
    cx.metric("max_pointwise", rep.max_pointwise);
    cx.metric("max_char_diff", rep.max_char_diff);
    cx.metric("mass_loss", rep.mass_loss ? 1.0 : 0.0);
    cx.tol("classical.l1", 1e-3);
    cx.tol("classical.characteristics", 1e-4);
    cx.tol("liouville.mass", 1e-6);
    cx.check("L1 <= 1e-3", rep.max_l1 <= 1e-3);
    cx.check("characteristics agree", rep.max_char_diff <= 1e-4);
    LinePlot plot{"Transport-only dynamics vs Liouville", "t'", "difference", true,
                  {{"L1", rep.times, rep.l1}, {"characteristics", rep.times, rep.char_diff}}, {}};
    cx.svg("plot_classical_limit.svg", line_plot_svg(plot));
    cx.say(fmt::format("classical-limit: max L1 {:.3g}, characteristics {:.3g}", rep.max_l1, rep.max_char_diff));
    if (rep.mass_loss) throw NumericFailure("Liouville solver lost mass beyond 1e-6");
}

void run_kramers(Context& cx) {
    const auto& c = cx.cfg;
    auto g = make_grid(c.grid);
    grid_info(cx, *g);
    const auto dp = make_params(c);
    PhaseDensity f0 = coherent_density_from_lift(initial_state(c, g));
    f0.values /= integral(f0);
    IntegratorConfig ic = integrator_of(c);
    const PhaseDensity gibbs = gibbs_density(g, dp);
    auto tr = evolve_classical_kramers(f0, dp, ic);
    {
        CsvWriter w(cx.path("series_kramers.csv"), {"t' [1/gamma]", "mass [-]", "energy [kT]"});
        for (size_t i = 0; i < tr.times.size(); ++i) w.row({tr.times[i], tr.norm[i], tr.energy[i]});
        w.close();
    }
    std::vector<double> l1;
    {
        CsvWriter w(cx.path("series_kramers_gibbs.csv"), {"t' [1/gamma]", "L1 to Gibbs [-]"});
        for (size_t i = 0; i < tr.snapshots.size(); ++i) {
            l1.push_back(l1_distance(tr.snapshots[i], gibbs));
            w.row({tr.snapshot_times[i], l1.back()});
        }
        w.close();
    }
    require_ok(tr);
    write_field_csv(cx.path("field_kramers_final.csv"), tr.snapshots.back(), "f [-]");
    write_field_csv(cx.path("field_gibbs.csv"), gibbs, "f [-]");
    double drift = 0.0;
    for (double m : tr.norm) drift = std::max(drift, std::abs(m - tr.norm.front()));
    cx.metric("final_l1", l1.back());
    cx.metric("mass_drift", drift);
    cx.metric("final_energy", tr.energy.back());
    cx.derived.emplace_back("kramers.max_dt", num(kramers_max_dt(*g, dp)));
    cx.tol("kramers.l1", 1e-3);
    cx.check("L1 to Gibbs <= 1e-3", l1.back() <= 1e-3);
    cx.svg("plot_kramers.svg", line_plot_svg({"Classical Kramers relaxation", "t'", "L1 to Gibbs", true,
                                              {{"L1", tr.snapshot_times, l1}}, {}}));
    auto heat = [&](const std::string& title, const PhaseDensity& d) {
        return HeatMap{title, "x'", "p'", g->x(0), g->x(g->nx() - 1), g->p(0), g->p(g->n_pnodes() - 1), d.values,
                       {fmt::format("min = {:.3g}", d.values.minCoeff())}};
    };
    cx.svg("plot_kramers_final.svg", heat_maps_svg({heat("final density", tr.snapshots.back()), heat("Gibbs", gibbs)}));
    cx.say(fmt::format("kramers-baseline: L1 to Gibbs {:.3g} at t' = {:g}", l1.back(), tr.snapshot_times.back()));
}

void write_manifest(const Context& cx, const std::string& status) {
    const auto& c = cx.cfg;
    std::string m = "# kramers-qm run manifest\n";
    m += fmt::format("version = {}\nexperiment = {}\nstatus = {}\n", code_version(), experiment_name(c.experiment),
                     status);
    if (!cx.res.message.empty()) m += fmt::format("message = {}\n", cx.res.message);
    m += "\n[derived]\n";
    try {
        const auto dp = make_params(c);
        m += fmt::format("epsilon = {}\nrest_energy_ratio = {}\nscale_t = {}\nscale_x = {}\nscale_p = {}\n",
                         num(dp.epsilon), num(dp.rest_energy_ratio), num(dp.scale_t), num(dp.scale_x),
                         num(dp.scale_p));
        m += fmt::format("potential = {}\n", dp.potential.describe());
    } catch (const std::exception& e) {
        m += fmt::format("epsilon = unavailable ({})\n", e.what());
    }
    m += fmt::format("grid.nx = {}\ngrid.np = {}\ngrid.lx = {}\n", c.grid.nx, c.grid.np, num(c.grid.lx));
    for (const auto& [k, v] : cx.derived) m += fmt::format("{} = {}\n", k, v);
    m += "\n[tolerances]\n";
    m += fmt::format("integrator.dt = {}\nfit.floor = 1e-10\n", num(c.integrator.dt));
    for (const auto& [k, v] : cx.tolerances) m += fmt::format("{} = {}\n", k, v);
    m += "\n[results]\n";
    for (const auto& [k, v] : cx.res.metrics) m += fmt::format("{} = {}\n", k, num(v));
    m += "\n[checks]\n";
    for (const auto& [k, v] : cx.checks) m += fmt::format("{} = {}\n", k, v);
    m += "\n[files]\n";
    for (const auto& f : cx.res.files) m += f + "\n";
    m += "\n# resolved configuration, defaults included\n";
    m += serialize(c);
    write_text_file((cx.dir / "manifest.txt").string(), m);
}

}  // namespace

RunResult run(const ScenarioConfig& cfg, const RunOptions& opt) {
    RunResult res;
    res.out_dir = opt.out_dir.empty() ? cfg.output.directory : opt.out_dir;
    try {
        validate(cfg);
    } catch (const ConfigError& e) {
        res.exit_code = kExitConfig;
        res.message = e.what();
        return res;
    }
    std::error_code ec;
    fs::create_directories(res.out_dir, ec);
    if (ec || !fs::is_directory(res.out_dir)) {
        res.exit_code = kExitConfig;
        res.message = "[output] directory: cannot create " + res.out_dir;
        return res;
    }
    std::unique_ptr<DirectoryLock> lock;
    try {
        lock = std::make_unique<DirectoryLock>(res.out_dir);
    } catch (const std::exception& e) {
        res.exit_code = kExitConfig;
        res.message = std::string("[output] directory: ") + e.what();
        return res;
    }
    fs::remove(fs::path(res.out_dir) / "FAILED", ec);

    Context cx{cfg, fs::path(res.out_dir), opt.quiet, res, {}, {}, {}};
    std::string status = "OK";
    try {
        switch (cfg.experiment) {
            case Experiment::spectrum: run_spectrum(cx); break;
            case Experiment::relax: run_relax(cx); break;
            case Experiment::generator_check: run_generator_check(cx); break;
            case Experiment::schrodinger_limit: run_schrodinger_limit(cx); break;
            case Experiment::density: run_density(cx); break;
            case Experiment::decohere: run_decohere(cx); break;
            case Experiment::classical_limit: run_classical_limit(cx); break;
            case Experiment::kramers_baseline: run_kramers(cx); break;
        }
    } catch (const ConfigError& e) {
        res.exit_code = kExitConfig;
        res.message = e.what();
        status = "CONFIG ERROR";
    } catch (const InvalidParameter& e) {
        // step bounds and grid limits are properties of the configuration
        res.exit_code = kExitConfig;
        res.message = e.what();
        status = "CONFIG ERROR";
    } catch (const std::exception& e) {
        res.exit_code = kExitNumeric;
        res.message = e.what();
        status = "FAILED";
    }
    try {
        write_manifest(cx, status);
        if (status == "FAILED") write_text_file((cx.dir / "FAILED").string(), res.message + "\n");
    } catch (const std::exception& e) {
        if (res.exit_code == kExitOk) res.exit_code = kExitNumeric;
        if (res.message.empty()) res.message = e.what();
    }
    return res;
}

}  // namespace kqm::cli
