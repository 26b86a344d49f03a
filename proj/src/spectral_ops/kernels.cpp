#include "spectral_ops/kernels.hpp"

#include <atomic>
#include <complex>

namespace kqm {

namespace {
std::atomic<Exec> g_exec{Exec::parallel};
using cd = std::complex<double>;
}  // namespace

void set_default_exec(Exec e) { g_exec.store(e); }
Exec default_exec() { return g_exec.load(); }

namespace kernels {

void synthesize(const PhaseGrid& g, const Eigen::MatrixXcd& coeffs, Eigen::MatrixXcd& out, bool derivative,
                Exec exec) {
    if (exec == Exec::serial)
        serial::synthesize(g, coeffs, out, derivative);
    else
        parallel::synthesize(g, coeffs, out, derivative);
}

void analyze(const PhaseGrid& g, const Eigen::MatrixXcd& fourier, Eigen::MatrixXcd& coeffs, Exec exec) {
    if (exec == Exec::serial)
        serial::analyze(g, fourier, coeffs);
    else
        parallel::analyze(g, fourier, coeffs);
}

namespace serial {

void synthesize(const PhaseGrid& g, const Eigen::MatrixXcd& coeffs, Eigen::MatrixXcd& out, bool derivative) {
    out.setZero(g.n_pnodes(), g.nx());
    const int np = g.np();
    for (int j = 0; j < g.n_modes(); ++j) {
        const Eigen::MatrixXd& B = derivative ? g.basis_derivative(j) : g.basis(j);
        const int b = g.window_begin(j), w = g.window_size(j), bin = g.fft_index(j);
        for (int k = 0; k < w; ++k) {
            cd acc = 0.0;
            for (int n = 0; n < np; ++n) acc += B(k, n) * coeffs(n, j);
            out(b + k, bin) = acc;
        }
    }
}

void analyze(const PhaseGrid& g, const Eigen::MatrixXcd& fourier, Eigen::MatrixXcd& coeffs) {
    const int np = g.np();
    coeffs.resize(np, g.n_modes());
    const double h = g.p_spacing();
    for (int j = 0; j < g.n_modes(); ++j) {
        const Eigen::MatrixXd& B = g.basis(j);
        const int b = g.window_begin(j), w = g.window_size(j), bin = g.fft_index(j);
        for (int n = 0; n < np; ++n) {
            cd acc = 0.0;
            for (int k = 0; k < w; ++k) acc += B(k, n) * fourier(b + k, bin);
            coeffs(n, j) = h * acc;
        }
    }
}

}  // namespace serial

namespace parallel {

// Complex vectors are viewed as (2 x n) real matrices so the per-mode work
// is a real GEMM.
using RealMap = Eigen::Map<Eigen::MatrixXd>;
using ConstRealMap = Eigen::Map<const Eigen::MatrixXd>;

void synthesize(const PhaseGrid& g, const Eigen::MatrixXcd& coeffs, Eigen::MatrixXcd& out, bool derivative) {
    out.setZero(g.n_pnodes(), g.nx());
    const int np = g.np();
    const int nm = g.n_modes();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nm; ++j) {
        const Eigen::MatrixXd& B = derivative ? g.basis_derivative(j) : g.basis(j);
        const int b = g.window_begin(j), w = g.window_size(j), bin = g.fft_index(j);
        ConstRealMap c(reinterpret_cast<const double*>(coeffs.col(j).data()), 2, np);
        RealMap o(reinterpret_cast<double*>(out.col(bin).data() + b), 2, w);
        o.noalias() = c * B.transpose();
    }
}

void analyze(const PhaseGrid& g, const Eigen::MatrixXcd& fourier, Eigen::MatrixXcd& coeffs) {
    const int np = g.np();
    const int nm = g.n_modes();
    coeffs.resize(np, nm);
    const double h = g.p_spacing();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nm; ++j) {
        const Eigen::MatrixXd& B = g.basis(j);
        const int b = g.window_begin(j), w = g.window_size(j), bin = g.fft_index(j);
        ConstRealMap f(reinterpret_cast<const double*>(fourier.col(bin).data() + b), 2, w);
        RealMap c(reinterpret_cast<double*>(coeffs.col(j).data()), 2, np);
        c.noalias() = h * (f * B);
    }
}

}  // namespace parallel
}  // namespace kernels
}  // namespace kqm
