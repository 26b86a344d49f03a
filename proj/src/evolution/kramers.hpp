#pragma once

#include "core/field.hpp"
#include "core/params.hpp"
#include "evolution/integrator.hpp"
#include "evolution/trajectory.hpp"

namespace kqm {

// Classical Kramers equation in scaled form,
//   df/dt' = eps (V'_x df/dp - p df/dx) + d/dp (p f + df/dp),
// with f(x, .) expanded in Hermite functions centred at p' = 0 (np of the
// grid) and x handled by FFT. Same splitting as the full dynamics.
// Trajectory::norm holds the mass, energy the mean of p^2/2 + V'.
// IntegratorConfig::renormalize and include_B are honoured.
Trajectory<PhaseDensity> evolve_classical_kramers(const PhaseDensity& f0, const DimensionlessParams& dp,
                                                  const IntegratorConfig& cfg);
Trajectory<PhaseDensity> evolve_classical_kramers(const PhaseDensity& f0, const PhysicalParams& params,
                                                  PhysicalTime t_end, double dt);

// e^{-p^2/2 - V'(x)} / Z; Z = 2 pi / omega for the harmonic well, otherwise
// sqrt(2 pi) times the trapezoid integral of e^{-V'} over the box.
PhaseDensity gibbs_density(const GridPtr& grid, const DimensionlessParams& dp);

// Largest stable dt' for the Kramers transport on this grid.
double kramers_max_dt(const PhaseGrid& g, const DimensionlessParams& dp);

}  // namespace kqm
