#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "analysis/fit.hpp"
#include "evolution/integrator.hpp"
#include "evolution/schrodinger.hpp"
#include "spectral_ops/spectral.hpp"

namespace kqm {

// Fit of log ||phi - P0 phi|| over [t_start, t_end].
DecayFit relaxation_rate(const Trajectory<SpectralField>& traj, double t_start = 0.5, double t_end = 5.0);

// restrict(A'(lift psi)) by collocation against -i H psi with the second
// derivative taken on the full FFT spectrum.
struct GeneratorCheck {
    double residual = 0.0;  // ||lhs - rhs|| / ||rhs||
    ConfigField lhs, rhs;
};
GeneratorCheck projected_generator_check(const ConfigField& psi, const DimensionlessParams& dp,
                                         ZeroPointShift z = ZeroPointShift::minus_half);

struct SchrodingerLimitConfig {
    double slow_time = 6.283185307179586;  // horizon in eps t'
    int n_samples = 16;
    double dt = 0.02;                       // upper bound on dt'
};
struct SchrodingerLimitRow {
    double epsilon = 0.0;
    double max_error = 0.0;
    std::vector<double> times, errors;
    bool failed = false;
    std::string message;
};
struct SchrodingerLimitReport {
    std::vector<SchrodingerLimitRow> rows;
    bool monotone = true;  // error decreases with eps
};
// Full dynamics from lift(psi0) against the Schrodinger reference, both
// unit-normalized, after removing the constant phase e^{-i eps (mu - 1/2) t'}.
SchrodingerLimitReport schrodinger_limit_error(const ConfigField& psi0, const DimensionlessParams& dp,
                                               const std::vector<double>& eps_list,
                                               const SchrodingerLimitConfig& cfg = {});

struct FirstOrderReport {
    Eigen::VectorXcd eigenvalues;  // of eps P0 A' in the eigenbasis, Im descending
    Eigen::VectorXcd expected;     // -i eps E_k
    double max_real_ratio = 0.0;   // max |Re| / max |Im|
    double mismatch = 0.0;         // max |lambda - expected| / max |expected|
};
FirstOrderReport first_order_eigenvalues(const GridPtr& grid, const DimensionlessParams& dp, int K,
                                         ZeroPointShift z = ZeroPointShift::minus_half);

struct ClassicalLimitConfig {
    double t_end = 6.283185307179586;
    int n_intervals = 4;
    double dt = 0.005;
    int stencil = 4;
};
struct ClassicalLimitReport {
    std::vector<double> times;
    std::vector<double> l1, max_abs;    // |phi|^2 against the density solver
    std::vector<double> char_diff;      // characteristics vs transport run, / max |phi0|
    double max_l1 = 0.0, max_pointwise = 0.0, max_char_diff = 0.0;
    bool mass_loss = false;
};
ClassicalLimitReport classical_limit_error(const PhaseField& phi0, const DimensionlessParams& dp,
                                           const ClassicalLimitConfig& cfg = {});

}  // namespace kqm
