#include "core/params.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace kqm {

void PhysicalParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidParameter(std::string(name) + " must be positive and finite");
    };
    positive(mass, "mass");
    positive(temperature, "temperature");
    positive(gamma, "gamma");
    if (!(light_speed >= 0.0) || !std::isfinite(light_speed))
        throw InvalidParameter("light_speed must be non-negative and finite");
}

DimensionlessParams DimensionlessParams::scaled(double epsilon, PotentialSpec pot, double rest_energy_ratio) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidParameter("epsilon must be finite and >= 0");
    if (!std::isfinite(rest_energy_ratio)) throw InvalidParameter("rest energy ratio must be finite");
    DimensionlessParams dp;
    dp.epsilon = epsilon;
    dp.rest_energy_ratio = rest_energy_ratio;
    dp.potential = std::move(pot);
    return dp;
}

DimensionlessParams DimensionlessParams::with_epsilon(double eps) const {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidParameter("epsilon must be finite and >= 0");
    DimensionlessParams dp = *this;
    dp.epsilon = eps;
    return dp;
}

DimensionlessParams nondimensionalize(const PhysicalParams& params) {
    params.validate();
    const double kT = kBoltzmann * params.temperature;
    DimensionlessParams dp;
    dp.epsilon = kT / (params.gamma * kHbar);
    if (!std::isfinite(dp.epsilon) || !(dp.epsilon > 0.0)) throw InvalidParameter("epsilon out of range");
    dp.rest_energy_ratio = params.mass * params.light_speed * params.light_speed / kT;
    dp.potential = params.potential;
    const double thermal_p = std::sqrt(kT * params.mass);
    dp.scale_t = params.gamma;
    dp.scale_p = 1.0 / thermal_p;
    dp.scale_x = thermal_p / kHbar;
    return dp;
}

}  // namespace kqm
