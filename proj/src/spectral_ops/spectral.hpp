#pragma once

#include <Eigen/Dense>
#include <vector>

#include "core/field.hpp"
#include "core/params.hpp"
#include "spectral_ops/kernels.hpp"

namespace kqm {

// Coefficients of phi in (retained Fourier mode s') x (Hermite index n),
// basis functions e^{i s'(x'-x0)} psi_n(p' - s'). Stored (np x n_modes).
struct SpectralField {
    GridPtr grid;
    Eigen::MatrixXcd coeffs;

    SpectralField() = default;
    explicit SpectralField(GridPtr g);
};

double l2_norm(const SpectralField& f);
cd inner_product(const SpectralField& a, const SpectralField& b);
// Fraction of the squared norm carried by the last two Hermite indices.
double tail_fraction(const SpectralField& f);

SpectralField to_spectral(const PhaseField& field);
PhaseField to_position(const SpectralField& sf);
// d/dp' of the represented function, sampled on the grid.
PhaseField to_position_dp(const SpectralField& sf);

// Per-mode Ornstein-Uhlenbeck structure in the orthonormal Hermite basis.
// The generator is upper triangular with diagonal 0, -1, -2, ...
struct OUBasis {
    int np;

    explicit OUBasis(int np_) : np(np_) {}
    Eigen::MatrixXd generator() const;
    // exp(dt * generator), exact
    Eigen::MatrixXd propagator(double dt) const;
    // right eigenvector for eigenvalue -m, unit Euclidean norm
    Eigen::VectorXd eigenvector(int m) const;
    Eigen::VectorXd eigenvalues() const;
};

// First K+1 eigenvalues (descending) of the per-mode diffusion operator
// centred at s', assembled by quadrature on the grid's p nodes.
std::vector<double> ou_eigenvalues(const PhaseGrid& grid, double s, int K);

SpectralField exact_B_step(const SpectralField& sf, double dt);
SpectralField apply_B_spectral(const SpectralField& sf);
PhaseField apply_B_prime(const PhaseField& field);

// Galerkin form of A' acting on coefficients. Holds work buffers, so one
// instance per thread.
class AOperator {
  public:
    AOperator(GridPtr grid, const DimensionlessParams& dp, Exec exec = default_exec());
    void apply(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out);
    const GridPtr& grid() const { return grid_; }
    // Magnitude used by the step-size check.
    double stiffness_scale() const;

  private:
    GridPtr grid_;
    double mu_, v_const_;
    bool flat_;
    Exec exec_;
    Eigen::VectorXd v_, vx_;
    Eigen::MatrixXcd f_, g_, tmp_;
};

SpectralField apply_A_spectral(const SpectralField& sf, const DimensionlessParams& dp);

// Collocation form on grid samples: d/dx' spectral on the full FFT
// spectrum, d/dp' through the Hermite representation.
PhaseField apply_A_prime(const PhaseField& field, const DimensionlessParams& dp);

}  // namespace kqm
