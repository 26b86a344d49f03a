#pragma once

#include <string>
#include <vector>

namespace kqm {

// Dimensionless external potential V'(x') and its gradient.
class PotentialSpec {
  public:
    enum class Kind { free, harmonic, double_well, polynomial, gaussian_well };

    static PotentialSpec free_particle();
    static PotentialSpec harmonic(double omega);
    // V = a x^4 - b x^2
    static PotentialSpec double_well(double a, double b);
    // V = sum_k c_k x^k
    static PotentialSpec polynomial(std::vector<double> coeffs);
    // V = -depth exp(-x^2 / (2 width^2))
    static PotentialSpec gaussian_well(double depth, double width);

    PotentialSpec shifted(double delta) const;

    double value(double x) const;
    double gradient(double x) const;

    Kind kind() const { return kind_; }
    double omega() const { return p0_; }
    double offset() const { return offset_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::string describe() const;
    // true when the gradient vanishes identically
    bool is_flat() const;

    bool operator==(const PotentialSpec&) const = default;

  private:
    Kind kind_ = Kind::free;
    double p0_ = 0.0, p1_ = 0.0;
    double offset_ = 0.0;
    std::vector<double> coeffs_;
};

}  // namespace kqm
