#include "core/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "core/errors.hpp"
#include "core/hermite.hpp"

namespace kqm {

double default_p_spacing(int np) {
    return std::numbers::pi / (std::sqrt(4.0 * (np + 2) + 2.0) + 4.0);
}

PhaseGrid::PhaseGrid(const GridSpec& spec) : spec_(spec) {
    const int nx = spec.nx;
    if (nx < 4 || (nx & (nx - 1)) != 0) throw InvalidParameter("nx must be a power of two >= 4, got " + std::to_string(nx));
    if (!(spec.lx > 0.0) || !std::isfinite(spec.lx)) throw InvalidParameter("lx must be positive");
    if (spec.np < 8) throw InvalidParameter("np must be >= 8, got " + std::to_string(spec.np));
    dx_ = spec.lx / nx;
    const double nyquist = std::numbers::pi / dx_;
    s_max_ = spec.s_max > 0.0 ? spec.s_max : (2.0 / 3.0) * nyquist;
    if (s_max_ > nyquist * (1.0 + 1e-12)) throw InvalidParameter("s_max exceeds the Nyquist wavenumber");
    h_ = spec.p_spacing > 0.0 ? spec.p_spacing : default_p_spacing(spec.np);

    xs_.resize(nx);
    for (int i = 0; i < nx; ++i) xs_(i) = x(i);

    const double dk = 2.0 * std::numbers::pi / spec.lx;
    const int kmax = std::min(int(std::floor(s_max_ / dk + 1e-9)), nx / 2 - 1);
    bin_to_mode_.assign(nx, -1);
    for (int m = -kmax; m <= kmax; ++m) {
        int bin = (m + nx) % nx;
        bin_to_mode_[bin] = int(modes_.size());
        modes_.push_back(bin);
        wavenumbers_.push_back(m * dk);
    }

    q_half_ = std::sqrt(2.0 * spec.np + 7.0) + 7.0;
    const int nhalf = int(std::ceil((s_max_ + q_half_) / h_));
    ps_.resize(2 * nhalf + 1);
    for (int k = 0; k < ps_.size(); ++k) ps_(k) = (k - nhalf) * h_;

    const int nm = n_modes();
    win_begin_.resize(nm);
    win_size_.resize(nm);
    phi_.resize(nm);
    dphi_.resize(nm);
    for (int j = 0; j < nm; ++j) {
        const double s = wavenumbers_[j];
        int lo = int(std::ceil((s - q_half_) / h_)) + nhalf;
        int hi = int(std::floor((s + q_half_) / h_)) + nhalf;
        lo = std::max(lo, 0);
        hi = std::min(hi, int(ps_.size()) - 1);
        win_begin_[j] = lo;
        win_size_[j] = hi - lo + 1;
        Eigen::VectorXd q = ps_.segment(lo, hi - lo + 1).array() - s;
        phi_[j] = hermite_functions(q, spec.np);
        dphi_[j] = hermite_derivatives(q, spec.np);
    }

    const int npn = n_pnodes();
    using D = FftPlan::Direction;
    rows_fwd_ = std::make_unique<FftPlan>(nx, npn, npn, 1, D::forward);
    rows_bwd_ = std::make_unique<FftPlan>(nx, npn, npn, 1, D::backward);
    vec_fwd_ = std::make_unique<FftPlan>(nx, 1, 1, nx, D::forward);
    vec_bwd_ = std::make_unique<FftPlan>(nx, 1, 1, nx, D::backward);
}

double PhaseGrid::fft_wavenumber(int i) const {
    const int nx = spec_.nx;
    int m = i <= nx / 2 ? i : i - nx;
    if (i == nx / 2) m = nx / 2;
    return 2.0 * std::numbers::pi * m / spec_.lx;
}

void PhaseGrid::fft_x_forward(Eigen::MatrixXcd& values) const {
    rows_fwd_->execute(values.data());
    values *= 1.0 / spec_.nx;
}

void PhaseGrid::fft_x_backward(Eigen::MatrixXcd& values) const { rows_bwd_->execute(values.data()); }

void PhaseGrid::fft_forward(Eigen::VectorXcd& v) const {
    vec_fwd_->execute(v.data());
    v *= 1.0 / spec_.nx;
}

void PhaseGrid::fft_backward(Eigen::VectorXcd& v) const { vec_bwd_->execute(v.data()); }

GridPtr make_grid(const GridSpec& spec) { return std::make_shared<const PhaseGrid>(spec); }

}  // namespace kqm
