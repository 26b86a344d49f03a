#pragma once

#include <Eigen/Dense>

#include "core/grid.hpp"

namespace kqm {

enum class Exec { serial, parallel };

// Kernel selection used by the operator layer. Parallel kernels give the
// same bits for any thread count: every mode writes a disjoint slice.
void set_default_exec(Exec e);
Exec default_exec();

namespace kernels {

// Per-mode Hermite synthesis into Fourier-space samples.
// coeffs: (np x n_modes). out: (n_pnodes x nx), bins of retained modes are
// overwritten inside their windows, everything else is set to zero.
void synthesize(const PhaseGrid& g, const Eigen::MatrixXcd& coeffs, Eigen::MatrixXcd& out, bool derivative,
                Exec exec);

// Per-mode Hermite analysis: coeffs(:, j) = h * basis(j)^T * F(window, bin_j).
void analyze(const PhaseGrid& g, const Eigen::MatrixXcd& fourier, Eigen::MatrixXcd& coeffs, Exec exec);

namespace serial {
void synthesize(const PhaseGrid& g, const Eigen::MatrixXcd& coeffs, Eigen::MatrixXcd& out, bool derivative);
void analyze(const PhaseGrid& g, const Eigen::MatrixXcd& fourier, Eigen::MatrixXcd& coeffs);
}  // namespace serial

namespace parallel {
void synthesize(const PhaseGrid& g, const Eigen::MatrixXcd& coeffs, Eigen::MatrixXcd& out, bool derivative);
void analyze(const PhaseGrid& g, const Eigen::MatrixXcd& fourier, Eigen::MatrixXcd& coeffs);
}  // namespace parallel

}  // namespace kernels
}  // namespace kqm
