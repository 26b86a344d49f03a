#include "core/hermite.hpp"

#include <cmath>
#include <numbers>

namespace kqm {

void hermite_values(double q, int count, double* out) {
    if (count <= 0) return;
    out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * q * q);
    if (count > 1) out[1] = std::sqrt(2.0) * q * out[0];
    for (int n = 2; n < count; ++n)
        out[n] = std::sqrt(2.0 / n) * q * out[n - 1] - std::sqrt((n - 1.0) / n) * out[n - 2];
}

Eigen::MatrixXd hermite_functions(const Eigen::VectorXd& q, int count) {
    Eigen::MatrixXd out(q.size(), count);
    Eigen::VectorXd row(count);
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        hermite_values(q(i), count, row.data());
        out.row(i) = row.transpose();
    }
    return out;
}

Eigen::MatrixXd hermite_derivatives(const Eigen::VectorXd& q, int count) {
    Eigen::MatrixXd out(q.size(), count);
    Eigen::VectorXd row(count + 1);
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        hermite_values(q(i), count + 1, row.data());
        for (int n = 0; n < count; ++n) {
            double d = -std::sqrt((n + 1.0) / 2.0) * row(n + 1);
            if (n > 0) d += std::sqrt(n / 2.0) * row(n - 1);
            out(i, n) = d;
        }
    }
    return out;
}

double hermite_integral(int n) {
    if (n % 2) return 0.0;
    // I_{n+1} = sqrt(n/(n+1)) I_{n-1}
    double v = std::sqrt(2.0) * std::pow(std::numbers::pi, 0.25);
    for (int k = 2; k <= n; k += 2) v *= std::sqrt((k - 1.0) / k);
    return v;
}

}  // namespace kqm
