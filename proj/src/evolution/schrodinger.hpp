#pragma once

#include <Eigen/Dense>
#include <vector>

#include "core/field.hpp"
#include "core/params.hpp"
#include "evolution/trajectory.hpp"

namespace kqm {

// Constant added to the dimensionless Hamiltonian on top of V' + mc^2/kT.
// minus_half is what the projected dynamics generates.
enum class ZeroPointShift { minus_half, plus_half, none };
double zero_point_value(ZeroPointShift z);

// Hamiltonian -1/2 d^2 + V' + mu + shift, Galerkin on the retained Fourier
// modes (coordinates are config_modes coefficients). Hermitian.
Eigen::MatrixXcd hamiltonian_matrix(const PhaseGrid& g, const DimensionlessParams& dp,
                                    ZeroPointShift z = ZeroPointShift::minus_half);
ConfigField apply_hamiltonian(const ConfigField& psi, const DimensionlessParams& dp,
                              ZeroPointShift z = ZeroPointShift::minus_half);

struct Eigenbasis {
    GridPtr grid;
    ZeroPointShift shift = ZeroPointShift::minus_half;
    Eigen::VectorXd energies;          // ascending
    std::vector<ConfigField> states;   // unit norm, phase fixed
    double max_residual = 0.0;         // max ||H v - E v||
    // coefficients <state_k, psi>
    Eigen::VectorXcd project(const ConfigField& psi) const;
    ConfigField combine(const Eigen::VectorXcd& c) const;
};

// Lowest K eigenpairs, K <= nx/4. Each state is rotated so that its
// largest sample (first one on ties) is real and positive.
Eigenbasis hamiltonian_eigenpairs(const GridPtr& grid, const DimensionlessParams& dp, int K,
                                  ZeroPointShift z = ZeroPointShift::minus_half);

// psi(t') = exp(-i eps H t') psi0 through the full eigendecomposition of
// the discrete Hamiltonian. Components outside the retained modes are
// dropped.
class SchrodingerPropagator {
  public:
    SchrodingerPropagator(GridPtr grid, const DimensionlessParams& dp, ZeroPointShift z = ZeroPointShift::minus_half);
    ConfigField state_at(const ConfigField& psi0, double t) const;
    const Eigen::VectorXd& energies() const { return energies_; }

  private:
    GridPtr grid_;
    double epsilon_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd vectors_;
};

// Snapshots at t' = k t_end / n_intervals, k = 0..n_intervals.
Trajectory<ConfigField> evolve_schrodinger(const ConfigField& psi0, const DimensionlessParams& dp, double t_end,
                                           int n_intervals = 1, ZeroPointShift z = ZeroPointShift::minus_half);
Trajectory<ConfigField> evolve_schrodinger(const ConfigField& psi0, const DimensionlessParams& dp, PhysicalTime t_end,
                                           int n_intervals = 1, ZeroPointShift z = ZeroPointShift::minus_half);

}  // namespace kqm
