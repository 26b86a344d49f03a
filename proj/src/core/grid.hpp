#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "core/fft.hpp"

namespace kqm {

struct GridSpec {
    int nx = 128;
    double lx = 25.6;
    int np = 32;           // Hermite functions per Fourier mode
    double s_max = 0.0;    // 0: two thirds of the Nyquist wavenumber
    double p_spacing = 0.0;  // 0: chosen from np

    bool operator==(const GridSpec&) const = default;
};

// Periodic x' box, retained Fourier modes, per-mode shifted Hermite tables
// and the common uniform p' quadrature grid.
//
// Phase-space samples are stored as an (n_pnodes x nx) column-major matrix:
// column ix holds phi(x_ix, p_0..p_{n-1}).
class PhaseGrid {
  public:
    explicit PhaseGrid(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }

    int nx() const { return spec_.nx; }
    double lx() const { return spec_.lx; }
    double dx() const { return dx_; }
    double x0() const { return -0.5 * spec_.lx; }
    double x(int i) const { return x0() + i * dx_; }
    const Eigen::VectorXd& xs() const { return xs_; }
    // angular wavenumber of FFT bin i (signed)
    double fft_wavenumber(int i) const;

    int n_modes() const { return int(modes_.size()); }
    double s_max() const { return s_max_; }
    double wavenumber(int j) const { return wavenumbers_[j]; }
    int fft_index(int j) const { return modes_[j]; }
    // mode index of an FFT bin, -1 when the bin is not retained
    int mode_of_bin(int i) const { return bin_to_mode_[i]; }

    int np() const { return spec_.np; }
    int n_pnodes() const { return int(ps_.size()); }
    double p_spacing() const { return h_; }
    double p(int k) const { return ps_(k); }
    const Eigen::VectorXd& ps() const { return ps_; }
    double q_halfwidth() const { return q_half_; }

    int window_begin(int j) const { return win_begin_[j]; }
    int window_size(int j) const { return win_size_[j]; }
    // psi_n(p_k - s_j) for k in the window of mode j: (window_size x np)
    const Eigen::MatrixXd& basis(int j) const { return phi_[j]; }
    const Eigen::MatrixXd& basis_derivative(int j) const { return dphi_[j]; }

    // FFT along x of every p row of an (n_pnodes x nx) matrix.
    // forward includes the 1/nx factor.
    void fft_x_forward(Eigen::MatrixXcd& values) const;
    void fft_x_backward(Eigen::MatrixXcd& values) const;
    void fft_forward(Eigen::VectorXcd& v) const;
    void fft_backward(Eigen::VectorXcd& v) const;

  private:
    GridSpec spec_;
    double dx_, s_max_, h_, q_half_;
    Eigen::VectorXd xs_, ps_;
    std::vector<int> modes_, bin_to_mode_;
    std::vector<double> wavenumbers_;
    std::vector<int> win_begin_, win_size_;
    std::vector<Eigen::MatrixXd> phi_, dphi_;
    std::unique_ptr<FftPlan> rows_fwd_, rows_bwd_, vec_fwd_, vec_bwd_;
};

using GridPtr = std::shared_ptr<const PhaseGrid>;

GridPtr make_grid(const GridSpec& spec);

double default_p_spacing(int np);

}  // namespace kqm
