#include "evolution/schrodinger.hpp"

#include <cmath>
#include <fmt/format.h>

#include "core/errors.hpp"
#include "projector/projector.hpp"

namespace kqm {

double zero_point_value(ZeroPointShift z) {
    switch (z) {
        case ZeroPointShift::minus_half: return -0.5;
        case ZeroPointShift::plus_half: return 0.5;
        case ZeroPointShift::none: return 0.0;
    }
    return 0.0;
}

Eigen::MatrixXcd hamiltonian_matrix(const PhaseGrid& g, const DimensionlessParams& dp, ZeroPointShift z) {
    const int nx = g.nx(), nm = g.n_modes();
    Eigen::VectorXcd vhat(nx);
    for (int i = 0; i < nx; ++i) vhat(i) = dp.potential.value(g.x(i));
    g.fft_forward(vhat);
    Eigen::MatrixXcd H(nm, nm);
    const double c = dp.mu() + zero_point_value(z);
    for (int j = 0; j < nm; ++j)
        for (int k = 0; k < nm; ++k) {
            int d = ((g.fft_index(j) - g.fft_index(k)) % nx + nx) % nx;
            H(j, k) = vhat(d);
        }
    // exact hermitian symmetry (the potential is real)
    H = 0.5 * (H + H.adjoint()).eval();
    for (int j = 0; j < nm; ++j) {
        const double s = g.wavenumber(j);
        H(j, j) += 0.5 * s * s + c;
    }
    return H;
}

ConfigField apply_hamiltonian(const ConfigField& psi, const DimensionlessParams& dp, ZeroPointShift z) {
    Eigen::MatrixXcd H = hamiltonian_matrix(*psi.grid, dp, z);
    Eigen::VectorXcd m = H * config_modes(psi);
    return config_from_modes(psi.grid, m);
}

namespace {

ConfigField state_from_vector(const GridPtr& g, const Eigen::VectorXcd& v) {
    ConfigField s = config_from_modes(g, v / std::sqrt(g->lx()));
    const double amax = s.values.cwiseAbs().maxCoeff();
    int imax = 0;
    for (int i = 0; i < g->nx(); ++i)
        if (std::abs(s.values(i)) >= (1.0 - 1e-9) * amax) {
            imax = i;
            break;
        }
    const cd ph = std::conj(s.values(imax)) / std::abs(s.values(imax));
    s.values *= ph;
    return s;
}

}  // namespace

Eigenbasis hamiltonian_eigenpairs(const GridPtr& grid, const DimensionlessParams& dp, int K, ZeroPointShift z) {
    if (K < 1 || K > grid->nx() / 4)
        throw InvalidParameter(fmt::format("eigenpairs: K = {} outside 1..nx/4 = {}", K, grid->nx() / 4));
    if (K > grid->n_modes()) throw InvalidParameter("eigenpairs: K exceeds the retained modes");
    Eigen::MatrixXcd H = hamiltonian_matrix(*grid, dp, z);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw NumericFailure("eigenpairs: eigensolver did not converge");
    Eigenbasis eb;
    eb.grid = grid;
    eb.shift = z;
    eb.energies = es.eigenvalues().head(K);
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    for (int k = 0; k < K; ++k) {
        Eigen::VectorXcd v = es.eigenvectors().col(k);
        const double r = (H * v - eb.energies(k) * v).norm();
        eb.max_residual = std::max(eb.max_residual, r);
        if (r > 1e-9 * scale)
            throw NumericFailure(fmt::format("eigenpairs: residual {:.3g} for state {}", r, k));
        eb.states.push_back(state_from_vector(grid, v));
    }
    return eb;
}

Eigen::VectorXcd Eigenbasis::project(const ConfigField& psi) const {
    Eigen::VectorXcd c(states.size());
    for (size_t k = 0; k < states.size(); ++k) c(Eigen::Index(k)) = inner_product(states[k], psi);
    return c;
}

ConfigField Eigenbasis::combine(const Eigen::VectorXcd& c) const {
    if (c.size() > Eigen::Index(states.size())) throw InvalidParameter("eigenbasis: too many coefficients");
    ConfigField out(grid);
    for (Eigen::Index k = 0; k < c.size(); ++k) out.values += c(k) * states[size_t(k)].values;
    return out;
}

SchrodingerPropagator::SchrodingerPropagator(GridPtr grid, const DimensionlessParams& dp, ZeroPointShift z)
    : grid_(std::move(grid)), epsilon_(dp.epsilon) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian_matrix(*grid_, dp, z));
    if (es.info() != Eigen::Success) throw NumericFailure("schrodinger: eigensolver did not converge");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
}

ConfigField SchrodingerPropagator::state_at(const ConfigField& psi0, double t) const {
    require_same_grid(psi0.grid, grid_);
    Eigen::VectorXcd c = vectors_.adjoint() * config_modes(psi0);
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(cd(0.0, -epsilon_ * energies_(k) * t));
    return config_from_modes(grid_, vectors_ * c);
}

Trajectory<ConfigField> evolve_schrodinger(const ConfigField& psi0, const DimensionlessParams& dp, double t_end,
                                           int n_intervals, ZeroPointShift z) {
    if (!(t_end >= 0.0)) throw InvalidParameter("schrodinger: t_end must be >= 0");
    if (n_intervals < 1) throw InvalidParameter("schrodinger: n_intervals must be >= 1");
    if (!psi0.values.allFinite()) throw InvalidParameter("schrodinger: initial state is not finite");
    SchrodingerPropagator prop(psi0.grid, dp, z);
    Trajectory<ConfigField> tr;
    for (int k = 0; k <= n_intervals; ++k) {
        const double t = t_end * k / n_intervals;
        ConfigField psi = prop.state_at(psi0, t);
        const double n = l2_norm(psi);
        const double e = n > 0.0 ? inner_product(psi, apply_hamiltonian(psi, dp, z)).real() / (n * n) : 0.0;
        tr.record(t, n, 0.0, e);
        tr.snapshot(t, std::move(psi));
    }
    return tr;
}

Trajectory<ConfigField> evolve_schrodinger(const ConfigField& psi0, const DimensionlessParams& dp, PhysicalTime t_end,
                                           int n_intervals, ZeroPointShift z) {
    return evolve_schrodinger(psi0, dp, dp.to_scaled_t(t_end), n_intervals, z);
}

}  // namespace kqm
