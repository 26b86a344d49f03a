#pragma once

#include "core/field.hpp"
#include "spectral_ops/spectral.hpp"

namespace kqm {

// unit_marginal: restrict(lift(psi)) = psi; used by all dynamics.
// unit_norm: Gaussian window normalized so that ||lift(psi)|| = ||psi||.
enum class LiftConvention { unit_marginal, unit_norm };

// psi_0 coefficient produced per unit Fourier amplitude of psi.
double lift_factor(LiftConvention conv);

SpectralField lift_spectral(const ConfigField& psi, LiftConvention conv = LiftConvention::unit_marginal);
PhaseField lift(const ConfigField& psi, LiftConvention conv = LiftConvention::unit_marginal);

// Marginal over p' by the grid quadrature.
ConfigField restrict_to_config(const PhaseField& phi);
// Same marginal computed from coefficients with exact Hermite integrals.
ConfigField restrict_to_config(const SpectralField& sf);

PhaseField project_P0(const PhaseField& phi);
SpectralField project_P0(const SpectralField& sf);

// Fourier coefficients of psi on the retained modes (DFT convention, 1/nx).
Eigen::VectorXcd config_modes(const ConfigField& psi);
ConfigField config_from_modes(const GridPtr& g, const Eigen::VectorXcd& modes);

}  // namespace kqm
