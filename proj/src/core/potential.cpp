#include "core/potential.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace kqm {

PotentialSpec PotentialSpec::free_particle() { return {}; }

PotentialSpec PotentialSpec::harmonic(double omega) {
    if (!(omega > 0.0)) throw InvalidParameter("harmonic potential needs omega > 0");
    PotentialSpec v;
    v.kind_ = Kind::harmonic;
    v.p0_ = omega;
    return v;
}

PotentialSpec PotentialSpec::double_well(double a, double b) {
    if (!(a > 0.0) || !(b >= 0.0)) throw InvalidParameter("double well needs a > 0, b >= 0");
    PotentialSpec v;
    v.kind_ = Kind::double_well;
    v.p0_ = a;
    v.p1_ = b;
    return v;
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> coeffs) {
    for (double c : coeffs)
        if (!std::isfinite(c)) throw InvalidParameter("polynomial coefficients must be finite");
    PotentialSpec v;
    v.kind_ = Kind::polynomial;
    v.coeffs_ = std::move(coeffs);
    return v;
}

PotentialSpec PotentialSpec::gaussian_well(double depth, double width) {
    if (!(width > 0.0) || !std::isfinite(depth)) throw InvalidParameter("gaussian well needs width > 0");
    PotentialSpec v;
    v.kind_ = Kind::gaussian_well;
    v.p0_ = depth;
    v.p1_ = width;
    return v;
}

PotentialSpec PotentialSpec::shifted(double delta) const {
    PotentialSpec v = *this;
    v.offset_ += delta;
    return v;
}

double PotentialSpec::value(double x) const {
    double v = offset_;
    switch (kind_) {
        case Kind::free: break;
        case Kind::harmonic: v += 0.5 * p0_ * p0_ * x * x; break;
        case Kind::double_well: v += p0_ * x * x * x * x - p1_ * x * x; break;
        case Kind::polynomial: {
            double acc = 0.0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
            v += acc;
            break;
        }
        case Kind::gaussian_well: v += -p0_ * std::exp(-x * x / (2.0 * p1_ * p1_)); break;
    }
    return v;
}

double PotentialSpec::gradient(double x) const {
    switch (kind_) {
        case Kind::free: return 0.0;
        case Kind::harmonic: return p0_ * p0_ * x;
        case Kind::double_well: return 4.0 * p0_ * x * x * x - 2.0 * p1_ * x;
        case Kind::polynomial: {
            double acc = 0.0;
            for (std::size_t k = coeffs_.size(); k-- > 1;) acc = acc * x + double(k) * coeffs_[k];
            return acc;
        }
        case Kind::gaussian_well: {
            double w2 = p1_ * p1_;
            return p0_ * x / w2 * std::exp(-x * x / (2.0 * w2));
        }
    }
    return 0.0;
}

bool PotentialSpec::is_flat() const {
    if (kind_ == Kind::free) return true;
    if (kind_ == Kind::polynomial) {
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            if (coeffs_[k] != 0.0) return false;
        return true;
    }
    if (kind_ == Kind::gaussian_well) return p0_ == 0.0;
    return false;
}

std::string PotentialSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case Kind::free: os << "free"; break;
        case Kind::harmonic: os << "harmonic(omega=" << p0_ << ")"; break;
        case Kind::double_well: os << "double_well(a=" << p0_ << ", b=" << p1_ << ")"; break;
        case Kind::polynomial: {
            os << "polynomial(";
            for (std::size_t k = 0; k < coeffs_.size(); ++k) os << (k ? ", " : "") << coeffs_[k];
            os << ")";
            break;
        }
        case Kind::gaussian_well: os << "gaussian_well(depth=" << p0_ << ", width=" << p1_ << ")"; break;
    }
    if (offset_ != 0.0) os << " + " << offset_;
    return os.str();
}

}  // namespace kqm
