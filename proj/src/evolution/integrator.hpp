#pragma once

#include <Eigen/Dense>

#include "evolution/trajectory.hpp"
#include "spectral_ops/spectral.hpp"

namespace kqm {

struct IntegratorConfig {
    double dt = 0.01;
    double t_end = 1.0;
    bool renormalize = false;
    // snapshot every n steps; 0 keeps only the initial and final states
    int snapshot_stride = 0;
    // false drops B' (pure transport regime)
    bool include_B = true;
    // true skips the energy series (it costs a restriction per step)
    bool skip_energy = false;
    // false: snapshots go to the sink only
    bool keep_snapshots = true;
    void validate() const;
};

// Largest dt' accepted for this grid and epsilon.
double max_stable_dt(const PhaseGrid& g, const DimensionlessParams& dp);
double default_dt(const PhaseGrid& g, const DimensionlessParams& dp);

// Strang step: RK4 half step of eps A', exact B' step, RK4 half step.
class FullIntegrator {
  public:
    FullIntegrator(GridPtr grid, const DimensionlessParams& dp, const IntegratorConfig& cfg);
    // advance coefficients in place by one dt
    void step(Eigen::MatrixXcd& c);
    const IntegratorConfig& config() const { return cfg_; }

  private:
    void rk4(Eigen::MatrixXcd& c, double h);

    GridPtr grid_;
    DimensionlessParams dp_;
    IntegratorConfig cfg_;
    AOperator A_;
    Eigen::MatrixXd E_;
    Eigen::MatrixXcd k1_, k2_, k3_, k4_, y_;
};

// Expectation of the dimensionless Hamiltonian (zero-point -1/2) in the
// restricted configuration field of sf.
double restricted_energy(const SpectralField& sf, const DimensionlessParams& dp);
double residual_norm(const SpectralField& sf);

Trajectory<SpectralField> evolve_full(const SpectralField& phi0, const DimensionlessParams& dp,
                                      const IntegratorConfig& cfg, const SnapshotSink<SpectralField>& sink = {});
Trajectory<SpectralField> evolve_full(const PhaseField& phi0, const DimensionlessParams& dp,
                                      const IntegratorConfig& cfg, const SnapshotSink<SpectralField>& sink = {});

// Dense matrix of eps A' + B' (or eps A' alone) on the vectorized
// coefficients, index n + np * mode.
Eigen::MatrixXcd assemble_generator(const GridPtr& grid, const DimensionlessParams& dp, bool include_B = true);

}  // namespace kqm
