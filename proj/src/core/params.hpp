#pragma once

#include "core/potential.hpp"

namespace kqm {

inline constexpr double kBoltzmann = 1.380649e-23;   // J/K
inline constexpr double kHbar = 1.054571817e-34;     // J s

// SI parameters. The potential is given directly in units of kT on the
// scaled coordinate x'.
struct PhysicalParams {
    double mass = 1.0e-27;         // kg
    double temperature = 1.0;      // K
    double gamma = 1.309e11;       // 1/s, friction per unit mass
    double light_speed = 0.0;      // m/s; 0 drops the rest-energy phase
    PotentialSpec potential;

    void validate() const;
};

struct PhysicalTime {
    double seconds = 0.0;
};

struct DimensionlessParams {
    double epsilon = 0.0;            // kT/(gamma hbar)
    double rest_energy_ratio = 0.0;  // mc^2/kT
    PotentialSpec potential;
    double scale_t = 1.0;  // t' = scale_t * t
    double scale_p = 1.0;  // p' = scale_p * p
    double scale_x = 1.0;  // x' = scale_x * x

    // Parameters given directly in scaled form (unit scale factors).
    static DimensionlessParams scaled(double epsilon, PotentialSpec pot, double rest_energy_ratio = 0.0);

    DimensionlessParams with_epsilon(double eps) const;

    double to_scaled_x(double x) const { return x * scale_x; }
    double from_scaled_x(double xs) const { return xs / scale_x; }
    double to_scaled_p(double p) const { return p * scale_p; }
    double from_scaled_p(double ps) const { return ps / scale_p; }
    double to_scaled_t(PhysicalTime t) const { return t.seconds * scale_t; }
    PhysicalTime from_scaled_t(double ts) const { return {ts / scale_t}; }

    double mu() const { return rest_energy_ratio; }
};

DimensionlessParams nondimensionalize(const PhysicalParams& params);

}  // namespace kqm
