#pragma once

#include <Eigen/Dense>
#include <complex>

#include "core/grid.hpp"

namespace kqm {

using cd = std::complex<double>;

// Complex phi(x', p') sampled on the phase grid, (n_pnodes x nx).
struct PhaseField {
    GridPtr grid;
    Eigen::MatrixXcd values;

    PhaseField() = default;
    explicit PhaseField(GridPtr g);
    cd& at(int ix, int kp) { return values(kp, ix); }
    cd at(int ix, int kp) const { return values(kp, ix); }
};

// Complex psi(y') on the x grid.
struct ConfigField {
    GridPtr grid;
    Eigen::VectorXcd values;

    ConfigField() = default;
    explicit ConfigField(GridPtr g);
};

// Real function on the phase grid (densities), (n_pnodes x nx).
struct PhaseDensity {
    GridPtr grid;
    Eigen::MatrixXd values;

    PhaseDensity() = default;
    explicit PhaseDensity(GridPtr g);
    double at(int ix, int kp) const { return values(kp, ix); }
};

void require_same_grid(const GridPtr& a, const GridPtr& b);

cd inner_product(const PhaseField& a, const PhaseField& b);
double l2_norm(const PhaseField& f);
void normalize(PhaseField& f);

cd inner_product(const ConfigField& a, const ConfigField& b);
double l2_norm(const ConfigField& f);
void normalize(ConfigField& f);

double integral(const PhaseDensity& rho);
double l1_distance(const PhaseDensity& a, const PhaseDensity& b);
PhaseDensity abs_squared(const PhaseField& f);

bool all_finite(const PhaseField& f);

}  // namespace kqm
