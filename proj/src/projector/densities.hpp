#pragma once

#include <Eigen/Dense>

#include "core/field.hpp"
#include "spectral_ops/kernels.hpp"

namespace kqm {

// Nonnegative phase-space density of the normalized coherent lift,
// evaluated as the direct double integral
//   rho(x,p) = (2pi)^{-1} (4pi)^{-1/2} Int Int psi(x+(b-a)/2) psi*(x+(b+a)/2)
//              e^{-(a^2+b^2)/4} e^{iap} db da.
PhaseDensity coherent_density(const ConfigField& psi, Exec exec = default_exec());
// Same density as |lift(psi, unit_norm)|^2.
PhaseDensity coherent_density_from_lift(const ConfigField& psi);

// W(x,p) = (2pi)^{-1} Int psi(x - a/2) psi*(x + a/2) e^{iap} da
PhaseDensity wigner(const ConfigField& psi, Exec exec = default_exec());

// |psi|^2 convolved with the normal density of variance 1/2.
Eigen::VectorXd smoothed_config_density(const ConfigField& psi);

// Integral over p' at each x'.
Eigen::VectorXd p_marginal(const PhaseDensity& rho);

// Band-limited interpolation of psi onto a grid refined by `factor`.
Eigen::VectorXcd upsample(const ConfigField& psi, int factor);

// Refinement used by the density integrals for this grid.
int density_refinement(const PhaseGrid& g);

}  // namespace kqm
