#include "projector/projector.hpp"

#include <cmath>
#include <numbers>

#include "core/hermite.hpp"

namespace kqm {

double lift_factor(LiftConvention conv) {
    // e^{-q^2/2} / sqrt(2 pi) = pi^{1/4} / sqrt(2 pi) * psi_0(q)
    if (conv == LiftConvention::unit_marginal) return std::pow(std::numbers::pi, 0.25) / std::sqrt(2.0 * std::numbers::pi);
    return 1.0;
}

Eigen::VectorXcd config_modes(const ConfigField& psi) {
    const PhaseGrid& g = *psi.grid;
    Eigen::VectorXcd hat = psi.values;
    g.fft_forward(hat);
    Eigen::VectorXcd modes(g.n_modes());
    for (int j = 0; j < g.n_modes(); ++j) modes(j) = hat(g.fft_index(j));
    return modes;
}

ConfigField config_from_modes(const GridPtr& g, const Eigen::VectorXcd& modes) {
    Eigen::VectorXcd hat = Eigen::VectorXcd::Zero(g->nx());
    for (int j = 0; j < g->n_modes(); ++j) hat(g->fft_index(j)) = modes(j);
    g->fft_backward(hat);
    ConfigField psi(g);
    psi.values = hat;
    return psi;
}

SpectralField lift_spectral(const ConfigField& psi, LiftConvention conv) {
    SpectralField sf(psi.grid);
    sf.coeffs.row(0) = (lift_factor(conv) * config_modes(psi)).transpose();
    return sf;
}

PhaseField lift(const ConfigField& psi, LiftConvention conv) { return to_position(lift_spectral(psi, conv)); }

ConfigField restrict_to_config(const PhaseField& phi) {
    ConfigField psi(phi.grid);
    const double h = phi.grid->p_spacing();
    for (int i = 0; i < phi.grid->nx(); ++i) {
        cd acc = 0.0;
        for (int k = 0; k < phi.grid->n_pnodes(); ++k) acc += phi.values(k, i);
        psi.values(i) = h * acc;
    }
    return psi;
}

namespace {
Eigen::VectorXd hermite_integrals(int np) {
    Eigen::VectorXd I(np);
    for (int n = 0; n < np; ++n) I(n) = hermite_integral(n);
    return I;
}
}  // namespace

ConfigField restrict_to_config(const SpectralField& sf) {
    Eigen::VectorXd I = hermite_integrals(sf.grid->np());
    Eigen::VectorXcd modes = sf.coeffs.transpose() * I.cast<cd>();
    return config_from_modes(sf.grid, modes);
}

SpectralField project_P0(const SpectralField& sf) {
    Eigen::VectorXd I = hermite_integrals(sf.grid->np());
    SpectralField out(sf.grid);
    out.coeffs.row(0) = lift_factor(LiftConvention::unit_marginal) * (I.cast<cd>().transpose() * sf.coeffs);
    return out;
}

PhaseField project_P0(const PhaseField& phi) { return lift(restrict_to_config(phi)); }

}  // namespace kqm
