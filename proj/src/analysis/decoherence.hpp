#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "analysis/fit.hpp"
#include "evolution/schrodinger.hpp"

namespace kqm {

struct DecoherenceConfig {
    std::vector<double> eps_list{0.1, 0.05};
    int basis_size = 6;        // eigenstates used for the projection
    double horizon = 3.5;      // run length eps^2 t'
    double dt = 0.05;          // upper bound on dt'
    double sample_every = 1.0; // t' between coefficient samples
    double fit_start = 3.0;    // skip the initial transient
};

// c_k(t') = <psi_k, psi(t')> for the unit-normalized restricted state.
struct ModeCoefficients {
    std::vector<double> times;
    Eigen::MatrixXcd c;  // (basis_size x n_times)
};

struct DecoherenceRun {
    double epsilon = 0.0;
    ModeCoefficients modes;
    std::vector<DecayFit> mode_fits;  // log |c_k|, significant components only
    std::vector<int> components;      // their indices
    DecayFit ratio_fit;               // log |c_sub / c_survivor|
    int survivor = -1;                // argmax of the fitted slopes
    int subdominant = -1;
    double final_purity = 0.0;        // max |c_k|^2 / sum |c_k|^2 at the end
    double bessel_excess = 0.0;       // max over samples of sum |c_k|^2 - 1
    bool failed = false;
    std::string message;
};

struct DecoherenceReport {
    std::vector<DecoherenceRun> runs;  // in eps_list order
    double rate_ratio = 0.0;           // rate(eps_0) / rate(eps_1)
    double loglog_slope = 0.0;         // d log|rate| / d log eps
    bool inconclusive = false;
    std::string reason;
    int survivor = -1;                 // common survivor, -1 if runs disagree
};

// lift(sum c0_k psi_k), renormalized full dynamics, projection of the
// restricted state onto the eigenbasis and decay fits per eps.
DecoherenceReport decoherence_experiment(const GridPtr& grid, const Eigen::VectorXcd& c0,
                                         const DimensionlessParams& dp, const DecoherenceConfig& cfg = {});

}  // namespace kqm
