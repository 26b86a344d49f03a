// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed here.
//   acceptance [--strict] [--workdir DIR] [--keep]
// Exits 0 once every criterion was evaluated; --strict makes any FAIL fatal.

#include <fmt/format.h>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <unistd.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "analysis/analysis.hpp"
#include "cli/config.hpp"
#include "cli/presets.hpp"
#include "cli/runner.hpp"
#include "evolution/integrator.hpp"
#include "projector/projector.hpp"
#include "spectral_ops/spectral.hpp"

using namespace kqm;
using namespace kqm::cli;
namespace fs = std::filesystem;

namespace {

// pinned tolerances
constexpr double kSpectrumTol = 1e-6;
constexpr double kIdempotentTol = 1e-10;
constexpr double kKernelTol = 1e-8;
constexpr double kRestrictLiftTol = 1e-10;
constexpr double kRateTol = 0.01;
constexpr double kGeneratorTol = 1e-6;
constexpr double kLimitRatio = 0.7;
constexpr double kLimitAbs = 5e-2;
constexpr double kDensityMin = -1e-12;
constexpr double kDensityMatch = 1e-8;
constexpr double kDecoRatio = 4.0, kDecoRatioRel = 0.2, kDecoSlope = 2.0, kDecoSlopeTol = 0.2, kPurity = 0.99;
constexpr double kRealRatio = 1e-8, kEigenMatch = 1e-5;
constexpr double kClassicalL1 = 1e-3, kCharacteristics = 1e-4;
constexpr double kOracleTol = 1e-6;
constexpr double kGibbsL1 = 1e-3;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double rel_norm(const PhaseField& a, const PhaseField& b, double scale) {
    PhaseField d(a.grid);
    d.values = a.values - b.values;
    return l2_norm(d) / scale;
}

struct PresetRuns {
    std::map<Experiment, RunResult> one, four;
};

PresetRuns run_presets(const fs::path& work) {
    PresetRuns pr;
    for (int threads : {1, 4}) {
        omp_set_num_threads(threads);
        for (auto e : all_experiments()) {
            const auto t0 = std::chrono::steady_clock::now();
            const fs::path dir = work / fmt::format("threads{}", threads) / experiment_name(e);
            fs::remove_all(dir);
            auto r = run(default_config(e), {dir.string(), true});
            const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::fprintf(stderr, "  preset %-18s threads=%d exit=%d %.1fs\n", experiment_name(e).c_str(), threads,
                         r.exit_code, sec);
            (threads == 1 ? pr.one : pr.four)[e] = std::move(r);
        }
    }
    omp_set_num_threads(1);
    return pr;
}

Outcome need_ok(const RunResult& r) {
    if (r.exit_code != kExitOk) return {false, fmt::format("preset run exited {}: {}", r.exit_code, r.message)};
    return {true, ""};
}

// 1
Outcome ou_spectrum(const PresetRuns& pr) {
    const auto& r = pr.one.at(Experiment::spectrum);
    if (auto o = need_ok(r); !o.pass) return o;
    const auto cfg = default_config(Experiment::spectrum);
    const bool setup = cfg.grid.np == 64 && cfg.spectrum.s_values == std::vector<double>{0.0, 1.0, 5.0} &&
                       cfg.spectrum.count == 11;
    const double d = r.metric("max_deviation");
    return {setup && d <= kSpectrumTol, fmt::format("Np=64, s' in {{0,1,5}}, 11 eigenvalues: max |lambda_m + m| = {:.3g} "
                                                    "(tol {:g})",
                                                    d, kSpectrumTol)};
}

// 2
Outcome projector_laws() {
    auto g = make_grid({.nx = 64, .lx = 16.0, .np = 24});
    double idem = 0, kern = 0, rl = 0;
    for (unsigned seed = 1; seed <= 20; ++seed) {
        const PhaseField phi = to_position(random_field(g, seed, 0.8, 1.5));
        const double n = l2_norm(phi);
        const PhaseField p1 = project_P0(phi);
        const PhaseField p2 = project_P0(p1);
        idem = std::max(idem, rel_norm(p2, p1, n));
        kern = std::max(kern, l2_norm(apply_B_prime(p1)) / n);
        const ConfigField psi = random_state(g, 100 + seed, 1.0);
        const ConfigField back = restrict_to_config(lift(psi));
        rl = std::max(rl, (back.values - psi.values).cwiseAbs().maxCoeff() / psi.values.cwiseAbs().maxCoeff());
    }
    return {idem <= kIdempotentTol && kern <= kKernelTol && rl <= kRestrictLiftTol,
            fmt::format("20 random fields: ||P0^2 - P0|| = {:.2g} (tol {:g}), ||B' P0|| = {:.2g} (tol {:g}), "
                        "restrict(lift) - id = {:.2g} (tol {:g})",
                        idem, kIdempotentTol, kern, kKernelTol, rl, kRestrictLiftTol)};
}

// 3
Outcome relaxation(const PresetRuns& pr, const fs::path& work) {
    const auto& r1 = pr.one.at(Experiment::relax);
    if (auto o = need_ok(r1); !o.pass) return o;
    std::vector<double> rates{r1.metric("rate")};
    for (unsigned seed = 2; seed <= 5; ++seed) {
        auto cfg = default_config(Experiment::relax);
        cfg.output.seed = seed;
        const auto r = run(cfg, {(work / fmt::format("relax-seed{}", seed)).string(), true});
        if (auto o = need_ok(r); !o.pass) return o;
        rates.push_back(r.metric("rate"));
    }
    double worst = 0;
    std::string list;
    for (double v : rates) {
        worst = std::max(worst, std::abs(v + 1.0));
        list += fmt::format("{}{:.5f}", list.empty() ? "" : ", ", v);
    }
    const bool eps0 = default_config(Experiment::relax).physical.epsilon == 0.0;
    return {eps0 && worst <= kRateTol,
            fmt::format("eps=0, 5 random starts, fit t' in [0.5,5]: rates {} (tol -1 +- {:g})", list, kRateTol)};
}

// 4
Outcome generator_identity() {
    auto g = make_grid({.nx = 128, .lx = 25.6, .np = 16});
    const auto suite = generator_suite(g);
    const std::vector<DimensionlessParams> pots = {
        DimensionlessParams::scaled(0.1, PotentialSpec::free_particle(), 0.3),
        DimensionlessParams::scaled(0.1, PotentialSpec::harmonic(0.8), 0.3),
        DimensionlessParams::scaled(0.1, PotentialSpec::double_well(0.05, 0.6))};
    double plus = 0, minus = 0;
    for (const auto& dp : pots)
        for (const auto& s : suite) {
            plus = std::max(plus, projected_generator_check(s.psi, dp, ZeroPointShift::plus_half).residual);
            minus = std::max(minus, projected_generator_check(s.psi, dp, ZeroPointShift::minus_half).residual);
        }
    return {plus <= kGeneratorTol,
            fmt::format("10 states x free/harmonic/double-well, constant +1/2: max residual {:.3g} (tol {:g}); "
                        "with -1/2: {:.3g}",
                        plus, kGeneratorTol, minus)};
}

// 5
Outcome schrodinger_limit(const PresetRuns& pr) {
    const auto& r = pr.one.at(Experiment::schrodinger_limit);
    if (auto o = need_ok(r); !o.pass) return o;
    const double e1 = r.metric("max_error@0.1"), e2 = r.metric("max_error@0.05");
    const double ratio = e2 / e1;
    return {ratio <= kLimitRatio && e2 <= kLimitAbs,
            fmt::format("harmonic, one slow period: error {:.3g} at eps=0.1, {:.3g} at eps=0.05; ratio {:.3f} "
                        "(tol {:g}), abs {:.3g} (tol {:g})",
                        e1, e2, ratio, kLimitRatio, e2, kLimitAbs)};
}

// 6
Outcome density(const PresetRuns& pr) {
    const auto& r = pr.one.at(Experiment::density);
    if (auto o = need_ok(r); !o.pass) return o;
    const double rmin = r.metric("coherent_min"), wmin = r.metric("wigner_min");
    const double dl = r.metric("direct_vs_lift"), ms = r.metric("marginal_vs_smoothed");
    const bool two_bump = default_config(Experiment::density).initial.preset == "two-bump";
    return {two_bump && rmin >= kDensityMin && wmin < 0.0 && dl <= kDensityMatch && ms <= kDensityMatch,
            fmt::format("two-bump state: min rho = {:.3g} (tol {:g}), min W = {:.3g} (< 0), direct vs |lift|^2 = "
                        "{:.3g}, p-marginal vs smoothed = {:.3g} (tol {:g})",
                        rmin, kDensityMin, wmin, dl, ms, kDensityMatch)};
}

// 7
Outcome decoherence(const PresetRuns& pr) {
    const auto& r = pr.one.at(Experiment::decohere);
    if (auto o = need_ok(r); !o.pass) return o;
    const double ratio = r.metric("rate_ratio"), slope = r.metric("loglog_slope"), pur = r.metric("min_final_purity");
    const bool conclusive = r.metric("inconclusive") == 0.0;
    const bool ok = conclusive && std::abs(ratio - kDecoRatio) <= kDecoRatioRel * kDecoRatio &&
                    std::abs(slope - kDecoSlope) <= kDecoSlopeTol && pur >= kPurity;
    return {ok, fmt::format("ground+first excited, eps 0.1 and 0.05: rates {:.4g}, {:.4g}; ratio {:.3f} (4 +- 20%), "
                            "slope {:.3f} (2 +- 0.2), final purity {:.4f} (>= {:g})",
                            r.metric("rate@0.1"), r.metric("rate@0.05"), ratio, slope, pur, kPurity)};
}

// 8
Outcome first_order() {
    const auto cfg = default_config(Experiment::generator_check);
    auto g = make_grid(cfg.grid);
    const auto dp = make_params(cfg);
    const auto lit = first_order_eigenvalues(g, dp, 5, ZeroPointShift::plus_half);
    const auto alt = first_order_eigenvalues(g, dp, 5, ZeroPointShift::minus_half);
    return {lit.max_real_ratio <= kRealRatio && lit.mismatch <= kEigenMatch,
            fmt::format("5 lowest modes, constant +1/2: real/imag = {:.2g} (tol {:g}), mismatch {:.3g} (tol {:g}); "
                        "with -1/2: mismatch {:.2g}",
                        lit.max_real_ratio, kRealRatio, lit.mismatch, kEigenMatch, alt.mismatch)};
}

// 9
Outcome classical_limit(const PresetRuns& pr) {
    const auto& r = pr.one.at(Experiment::classical_limit);
    if (auto o = need_ok(r); !o.pass) return o;
    const double l1 = r.metric("max_l1"), ch = r.metric("max_char_diff");
    return {l1 <= kClassicalL1 && ch <= kCharacteristics && r.metric("mass_loss") == 0.0,
            fmt::format("harmonic, one period, transport only: L1 {:.3g} (tol {:g}), characteristics {:.3g} (tol {:g})",
                        l1, kClassicalL1, ch, kCharacteristics)};
}

// 10
Outcome dense_oracle() {
    auto g = make_grid({.nx = 16, .lx = 8.0, .np = 16});
    const auto dp = DimensionlessParams::scaled(0.5, PotentialSpec::harmonic(1.0), 0.3);
    SpectralField phi0 = lift_spectral(gaussian_state(g, 0.5, 0.8, 0.4));
    phi0.coeffs += 0.2 * random_field(g, 5, 0.5, 1.0).coeffs;
    const double t = 0.5;
    const Eigen::MatrixXcd G = assemble_generator(g, dp);
    const Eigen::VectorXcd ref = (t * G).exp() * phi0.coeffs.reshaped();
    IntegratorConfig ic{.dt = 0.001, .t_end = t, .skip_energy = true};
    const auto a = evolve_full(phi0, dp, ic).snapshots.back();
    const double ea = (a.coeffs.reshaped() - ref).norm() / ref.norm();
    ic.renormalize = true;
    const auto b = evolve_full(phi0, dp, ic).snapshots.back();
    const Eigen::VectorXcd refn = ref / (std::sqrt(g->lx()) * ref.norm());
    const double eb = (b.coeffs.reshaped() - refn).norm() / refn.norm();
    return {ea <= kOracleTol && eb <= kOracleTol,
            fmt::format("16x16 grid, t'=0.5: relative error {:.3g} plain, {:.3g} renormalized (tol {:g})", ea, eb,
                        kOracleTol)};
}

// 11
Outcome kramers(const PresetRuns& pr) {
    const auto& r = pr.one.at(Experiment::kramers_baseline);
    if (auto o = need_ok(r); !o.pass) return o;
    const double l1 = r.metric("final_l1");
    return {l1 <= kGibbsL1, fmt::format("harmonic, t'=30: L1 to the Gibbs density {:.3g} (tol {:g}), mass drift {:.2g}",
                                        l1, kGibbsL1, r.metric("mass_drift"))};
}

// 12
Outcome determinism(const PresetRuns& pr) {
    int files = 0, diffs = 0;
    std::string first;
    for (auto e : all_experiments()) {
        const auto& a = pr.one.at(e);
        const auto& b = pr.four.at(e);
        if (a.exit_code != kExitOk || b.exit_code != kExitOk) return {false, experiment_name(e) + " preset failed"};
        if (a.files != b.files) return {false, experiment_name(e) + ": different file lists"};
        for (const auto& f : a.files) {
            if (f.size() < 4 || f.substr(f.size() - 4) != ".csv") continue;
            ++files;
            if (slurp(fs::path(a.out_dir) / f) != slurp(fs::path(b.out_dir) / f)) {
                ++diffs;
                if (first.empty()) first = experiment_name(e) + "/" + f;
            }
        }
    }
    return {diffs == 0 && files > 0, fmt::format("8 presets, 1 vs 4 threads: {} CSV files compared, {} differ{}", files,
                                                 diffs, first.empty() ? "" : " (first: " + first + ")")};
}

}  // namespace

int main(int argc, char** argv) {
    bool strict = false, keep = false;
    fs::path work = fs::temp_directory_path() / fmt::format("kqm-acceptance-{}", ::getpid());
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--strict"))
            strict = true;
        else if (!std::strcmp(argv[i], "--keep"))
            keep = true;
        else if (!std::strcmp(argv[i], "--workdir") && i + 1 < argc)
            work = argv[++i];
        else {
            std::fprintf(stderr, "usage: acceptance [--strict] [--workdir DIR] [--keep]\n");
            return 2;
        }
    }
    fs::create_directories(work);
    std::fprintf(stderr, "acceptance: preset runs in %s\n", work.c_str());
    const PresetRuns pr = run_presets(work);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"OU spectrum", [&] { return ou_spectrum(pr); }},
        {"projector laws", [] { return projector_laws(); }},
        {"relaxation rate", [&] { return relaxation(pr, work); }},
        {"projected generator identity", [] { return generator_identity(); }},
        {"Schrodinger limit", [&] { return schrodinger_limit(pr); }},
        {"nonnegative phase-space density", [&] { return density(pr); }},
        {"decoherence scaling", [&] { return decoherence(pr); }},
        {"first-order eigenvalues", [] { return first_order(); }},
        {"classical limit", [&] { return classical_limit(pr); }},
        {"dense-exponential oracle", [] { return dense_oracle(); }},
        {"classical Kramers baseline", [&] { return kramers(pr); }},
        {"determinism across threads", [&] { return determinism(pr); }},
    };
    int passed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        passed += o.pass;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %d/%zu pass\n", passed, criteria.size());
    if (!keep) fs::remove_all(work);
    return strict && passed != int(criteria.size()) ? 1 : 0;
}
