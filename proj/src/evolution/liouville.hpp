#pragma once

#include "core/field.hpp"
#include "core/params.hpp"
#include "evolution/trajectory.hpp"

namespace kqm {

struct LiouvilleConfig {
    double t_end = 1.0;
    int n_intervals = 1;    // snapshots at k t_end / n_intervals
    int stencil = 4;        // Lagrange points per axis: 4, 6 or 8
    double max_dtau = 0.01; // characteristic substep in tau = eps t'
    // true: remap from the previous snapshot, false: every snapshot is
    // traced back to t' = 0 (one interpolation per snapshot)
    bool chain = false;
    void validate() const;
};

// End point of the characteristic x' = p, p' = -dV'/dx traced over tau
// (negative tau runs backwards), fourth-order symplectic composition.
// `action` accumulates the integral of p^2 over the traced path, signed
// by the direction of travel. With period > 0 the path lives on the
// periodic box [x_lo, x_lo + period), matching the spectral dynamics.
struct CharacteristicFoot {
    double x, p, action;
};
CharacteristicFoot trace_characteristic(const PotentialSpec& v, double x, double p, double tau, double max_dtau,
                                        double x_lo = 0.0, double period = 0.0);

// Semi-Lagrangian transport of a real density. Trajectory::norm holds the
// mass; `message` flags mass loss through the p boundary above 1e-6.
Trajectory<PhaseDensity> evolve_liouville(const PhaseDensity& rho0, const DimensionlessParams& dp,
                                          const LiouvilleConfig& cfg);

// B-free solution by characteristics: values of phi0 (evaluated from its
// spectral representation) at the feet, times the phase accumulated along
// the path.
PhaseField characteristics_solution(const PhaseField& phi0, const DimensionlessParams& dp, double t,
                                    double max_dtau = 0.01);

// Tensor Lagrange interpolation of rho at (x, p): periodic in x, zero
// outside the p nodes, bounded below by the smallest of the four nearest
// nodes. `outside` is set when p lies beyond the node range.
double interpolate_density(const PhaseDensity& rho, double x, double p, int stencil, bool* outside = nullptr);

}  // namespace kqm
