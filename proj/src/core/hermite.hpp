#pragma once

#include <Eigen/Dense>

namespace kqm {

// Orthonormal Hermite functions psi_n(q) = (2^n n! sqrt(pi))^{-1/2} H_n(q) e^{-q^2/2}.
// Row i holds psi_0..psi_{count-1} at q(i).
Eigen::MatrixXd hermite_functions(const Eigen::VectorXd& q, int count);

// Same layout, derivatives psi_n'(q).
Eigen::MatrixXd hermite_derivatives(const Eigen::VectorXd& q, int count);

// psi_0..psi_{count-1} at a single point.
void hermite_values(double q, int count, double* out);

// Integral of psi_n over the real line.
double hermite_integral(int n);

}  // namespace kqm
