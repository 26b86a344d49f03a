#include "core/field.hpp"

#include "core/errors.hpp"

namespace kqm {

PhaseField::PhaseField(GridPtr g) : grid(std::move(g)) {
    values = Eigen::MatrixXcd::Zero(grid->n_pnodes(), grid->nx());
}

ConfigField::ConfigField(GridPtr g) : grid(std::move(g)) { values = Eigen::VectorXcd::Zero(grid->nx()); }

PhaseDensity::PhaseDensity(GridPtr g) : grid(std::move(g)) {
    values = Eigen::MatrixXd::Zero(grid->n_pnodes(), grid->nx());
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
    if (!a || !b) throw DimensionError("field without grid");
    if (a != b && !(a->spec() == b->spec())) throw DimensionError("fields live on different grids");
}

namespace {
// Fixed-order sum so reductions do not depend on vectorization or threads.
template <class F>
double ordered_sum(Eigen::Index n, F&& f) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc += f(i);
    return acc;
}
}  // namespace

cd inner_product(const PhaseField& a, const PhaseField& b) {
    require_same_grid(a.grid, b.grid);
    const auto n = a.values.size();
    const cd* pa = a.values.data();
    const cd* pb = b.values.data();
    double re = 0.0, im = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        cd t = std::conj(pa[i]) * pb[i];
        re += t.real();
        im += t.imag();
    }
    const double w = a.grid->dx() * a.grid->p_spacing();
    return {w * re, w * im};
}

double l2_norm(const PhaseField& f) {
    const cd* p = f.values.data();
    double s = ordered_sum(f.values.size(), [&](Eigen::Index i) { return std::norm(p[i]); });
    return std::sqrt(s * f.grid->dx() * f.grid->p_spacing());
}

void normalize(PhaseField& f) {
    double n = l2_norm(f);
    if (!(n > 0.0)) throw NumericFailure("cannot normalize a zero field");
    f.values /= n;
}

cd inner_product(const ConfigField& a, const ConfigField& b) {
    require_same_grid(a.grid, b.grid);
    double re = 0.0, im = 0.0;
    for (Eigen::Index i = 0; i < a.values.size(); ++i) {
        cd t = std::conj(a.values(i)) * b.values(i);
        re += t.real();
        im += t.imag();
    }
    return {a.grid->dx() * re, a.grid->dx() * im};
}

double l2_norm(const ConfigField& f) {
    double s = ordered_sum(f.values.size(), [&](Eigen::Index i) { return std::norm(f.values(i)); });
    return std::sqrt(s * f.grid->dx());
}

void normalize(ConfigField& f) {
    double n = l2_norm(f);
    if (!(n > 0.0)) throw NumericFailure("cannot normalize a zero field");
    f.values /= n;
}

double integral(const PhaseDensity& rho) {
    const double* p = rho.values.data();
    return ordered_sum(rho.values.size(), [&](Eigen::Index i) { return p[i]; }) * rho.grid->dx() *
           rho.grid->p_spacing();
}

double l1_distance(const PhaseDensity& a, const PhaseDensity& b) {
    require_same_grid(a.grid, b.grid);
    const double* pa = a.values.data();
    const double* pb = b.values.data();
    return ordered_sum(a.values.size(), [&](Eigen::Index i) { return std::abs(pa[i] - pb[i]); }) * a.grid->dx() *
           a.grid->p_spacing();
}

PhaseDensity abs_squared(const PhaseField& f) {
    PhaseDensity r(f.grid);
    r.values = f.values.cwiseAbs2();
    return r;
}

bool all_finite(const PhaseField& f) { return f.values.allFinite(); }

}  // namespace kqm
