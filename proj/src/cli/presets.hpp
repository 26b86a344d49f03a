#pragma once

#include <string>
#include <vector>

#include "cli/config.hpp"
#include "core/field.hpp"
#include "spectral_ops/spectral.hpp"

namespace kqm::cli {

struct NamedState {
    std::string name;
    ConfigField psi;
};

// Normalized psi with |psi|^2 of standard deviation `width`.
ConfigField gaussian_state(const GridPtr& g, double center, double width, double momentum);
// Equal-weight sum of two gaussians at center -+ separation/2.
ConfigField two_bump_state(const GridPtr& g, double center, double separation, double width, double momentum);
// e^{isx} for the retained mode nearest to s; `snapped` receives that wavenumber.
ConfigField plane_wave_state(const GridPtr& g, double s, double* snapped = nullptr);
// Hermite function of order n with length scale `scale`, centred at 0.
ConfigField hermite_state(const GridPtr& g, int n, double scale);
// Band-limited random psi, Gaussian envelope of width kwidth in s.
ConfigField random_state(const GridPtr& g, unsigned seed, double kwidth);
// Random phase-space field in the spectral basis, decay^n in the Hermite index.
SpectralField random_field(const GridPtr& g, unsigned seed, double decay, double kwidth);

// Ten fixed states used by the generator identity check.
std::vector<NamedState> generator_suite(const GridPtr& g);

// psi0 of the [initial] block; eigen-superposition uses eigenstates of the
// configured Hamiltonian.
ConfigField initial_state(const ScenarioConfig& cfg, const GridPtr& g);

}  // namespace kqm::cli
