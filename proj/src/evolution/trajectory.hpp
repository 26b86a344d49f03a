#pragma once

#include <functional>
#include <string>
#include <vector>

namespace kqm {

// Time series produced by the solvers. The scalar series are sampled at
// every entry of `times`; snapshots at `snapshot_times`.
//   norm      L2 norm (mass for real densities)
//   residual  ||phi - P0 phi|| for the full dynamics, 0 for reference solvers
//   energy    <psi, H psi>/<psi, psi> of the configuration-space content
template <class Field>
struct Trajectory {
    std::vector<double> times;
    std::vector<double> norm, residual, energy;
    std::vector<double> snapshot_times;
    std::vector<Field> snapshots;
    bool failed = false;
    std::string message;

    void record(double t, double n, double r, double e) {
        times.push_back(t);
        norm.push_back(n);
        residual.push_back(r);
        energy.push_back(e);
    }
    void snapshot(double t, Field f) {
        snapshot_times.push_back(t);
        snapshots.push_back(std::move(f));
    }
};

template <class Field>
using SnapshotSink = std::function<void(double, const Field&)>;

}  // namespace kqm
