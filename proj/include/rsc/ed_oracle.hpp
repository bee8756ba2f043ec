#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "rsc/common.hpp"
#include "rsc/disorder.hpp"
#include "rsc/fermion.hpp"

namespace rsc {

/// Dense ground state of the full spin Hamiltonian, restricted to the
/// total-Sz = 0 block (the AF ground state lives there for even L).
/// Amplitudes are indexed by the block basis below; sign convention: first
/// nonzero amplitude positive.
struct DenseGroundState {
    int length = 0;
    Boundary boundary = Boundary::open;
    std::vector<std::uint32_t> basis;  // bitmasks with L/2 set bits, ascending
    Eigen::VectorXd amplitudes;
    double energy = 0.0;
    double gap = 0.0;        // to the next distinct level seen by Lanczos
    bool degenerate = false; // two independent starts found orthogonal ground vectors
};

namespace detail {

inline std::vector<std::uint32_t> sz0_basis(int length) {
    std::vector<std::uint32_t> basis;
    const int half = length / 2;
    for (std::uint32_t m = 0; m < (1u << length); ++m)
        if (__builtin_popcount(m) == half) basis.push_back(m);
    return basis;
}

/// Sparse Sz=0 block of H = sum_i J_i (SxSx + SySy + Delta_i SzSz) in CSR form.
struct SpinBlockHamiltonian {
    std::vector<double> diag;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
        const int n = static_cast<int>(diag.size());
        for (int r = 0; r < n; ++r) {
            double acc = diag[r] * x(r);
            for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x(col[k]);
            y(r) = acc;
        }
    }
};

inline SpinBlockHamiltonian build_block(const ChainSpec& chain,
                                        const std::vector<std::uint32_t>& basis) {
    const int L = chain.length;
    const std::size_t nb = chain.bond_count();
    std::unordered_map<std::uint32_t, int> index;
    index.reserve(basis.size() * 2);
    for (int r = 0; r < static_cast<int>(basis.size()); ++r) index.emplace(basis[r], r);

    SpinBlockHamiltonian h;
    const int n = static_cast<int>(basis.size());
    h.diag.assign(n, 0.0);
    h.row_ptr.assign(n + 1, 0);

    for (int r = 0; r < n; ++r) {
        const std::uint32_t m = basis[r];
        h.row_ptr[r] = static_cast<int>(h.col.size());
        for (std::size_t b = 0; b < nb; ++b) {
            const int i = static_cast<int>(b);
            const int j = (i + 1) % L;
            const bool up_i = (m >> i) & 1u;
            const bool up_j = (m >> j) & 1u;
            const double j_b = chain.couplings[b];
            h.diag[r] += j_b * chain.deltas[b] * (up_i == up_j ? 0.25 : -0.25);
            if (up_i != up_j) {
                const std::uint32_t flipped = m ^ ((1u << i) | (1u << j));
                h.col.push_back(index.at(flipped));
                h.val.push_back(j_b / 2.0);  // (J/2)(S+S- + S-S+)
            }
        }
    }
    h.row_ptr[n] = static_cast<int>(h.col.size());
    return h;
}

struct LanczosResult {
    double e0 = 0.0;
    double e1 = 0.0;
    Eigen::VectorXd ground;
};

/// Lanczos with full reorthogonalization; exact for m = dim, converged far
/// earlier in practice. Residual-checked to 1e-10.
inline LanczosResult lanczos_ground(const SpinBlockHamiltonian& h, int dim,
                                    std::uint64_t start_seed) {
    std::mt19937_64 rng(start_seed);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(dim);
    for (int k = 0; k < dim; ++k) v(k) = gauss(rng);
    v.normalize();

    const int m_max = std::min(dim, 400);
    std::vector<Eigen::VectorXd> vecs;
    vecs.reserve(m_max);
    std::vector<double> alpha, beta;
    Eigen::VectorXd w(dim);

    auto solve_tridiag = [&](int m) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int k = 0; k < m; ++k) {
            t(k, k) = alpha[k];
            if (k + 1 < m) t(k, k + 1) = t(k + 1, k) = beta[k];
        }
        return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(t);
    };

    LanczosResult out;
    int m = 0;
    for (int it = 0; it < m_max; ++it) {
        vecs.push_back(v);
        h.apply(v, w);
        const double a = v.dot(w);
        alpha.push_back(a);
        w -= a * v;
        if (it > 0) w -= beta.back() * vecs[it - 1];
        for (const auto& u : vecs) w -= u.dot(w) * u;  // full reorthogonalization
        const double b = w.norm();
        m = it + 1;
        if (b < 1e-13) break;
        beta.push_back(b);
        v = w / b;
        if (m >= 20 && m % 10 == 0) {
            // residual estimate for the lowest Ritz pair: beta_m * |last component|
            auto es = solve_tridiag(m);
            if (b * std::abs(es.eigenvectors()(m - 1, 0)) < 1e-12) break;
        }
    }

    auto es = solve_tridiag(m);
    out.e0 = es.eigenvalues()(0);
    out.e1 = m > 1 ? es.eigenvalues()(1) : out.e0;
    out.ground = Eigen::VectorXd::Zero(dim);
    for (int k = 0; k < m; ++k) out.ground += es.eigenvectors()(k, 0) * vecs[k];
    out.ground.normalize();

    h.apply(out.ground, w);
    const double residual = (w - out.e0 * out.ground).norm();
    if (residual > 1e-9) throw Error("lanczos_ground: failed to converge");
    return out;
}

}  // namespace detail

/// Ground state of the full 2^L spin Hamiltonian, L <= 14, in the Sz=0 block.
/// Arbitrary Delta_i allowed (the oracle is more general than the fast
/// solver). Degeneracy is detected by running two independent Lanczos starts
/// and comparing ground vectors.
inline DenseGroundState dense_ground_state(const ChainSpec& chain) {
    chain.validate();
    if (chain.length > 14) throw TooLarge("dense_ground_state: L > 14");

    DenseGroundState gs;
    gs.length = chain.length;
    gs.boundary = chain.boundary;
    gs.basis = detail::sz0_basis(chain.length);
    const int dim = static_cast<int>(gs.basis.size());
    const auto h = detail::build_block(chain, gs.basis);

    const auto r1 = detail::lanczos_ground(h, dim, 0x1234abcdULL);
    const auto r2 = detail::lanczos_ground(h, dim, 0xfeed5678ULL);
    const double overlap = std::abs(r1.ground.dot(r2.ground));
    // the eigenvector is only accurate to ~eps*||H||/gap, so below a 1e-6 gap
    // the oracle cannot certify its own state to the 1e-8 comparisons it
    // backs; such realizations are reported as (near-)degenerate and skipped
    gs.degenerate = (std::abs(r1.e0 - r2.e0) < 1e-10 && overlap < 1.0 - 1e-8) ||
                    r1.e1 - r1.e0 < 1e-6;
    gs.energy = r1.e0;
    gs.gap = r1.e1 - r1.e0;
    gs.amplitudes = r1.ground;
    for (int k = 0; k < dim; ++k) {
        if (std::abs(gs.amplitudes(k)) > 1e-12) {
            if (gs.amplitudes(k) < 0.0) gs.amplitudes = -gs.amplitudes;
            break;
        }
    }
    return gs;
}

/// Reduced density matrix of sites (i, j) in the computational basis
/// (|++>, |+->, |-+>, |-->), by partial trace over the rest.
inline Eigen::Matrix4d exact_pair_state(const DenseGroundState& state, int i, int j) {
    if (i == j) throw Error("exact_pair_state: i and j must differ");
    if (i < 0 || j < 0 || i >= state.length || j >= state.length)
        throw Error("exact_pair_state: site out of range");

    // group amplitudes by the configuration of all other sites
    std::unordered_map<std::uint32_t, std::array<double, 4>> groups;
    const std::uint32_t mask_ij = (1u << i) | (1u << j);
    for (std::size_t k = 0; k < state.basis.size(); ++k) {
        const std::uint32_t m = state.basis[k];
        const int bi = (m >> i) & 1u;  // 1 = spin up = |+>
        const int bj = (m >> j) & 1u;
        const int local = (1 - bi) * 2 + (1 - bj);  // 0:++ 1:+- 2:-+ 3:--
        groups[m & ~mask_ij][local] += state.amplitudes(static_cast<int>(k));
    }
    Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();
    for (const auto& [rest, amp] : groups)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) rho(a, b) += amp[a] * amp[b];
    return rho;
}

/// Direct expectation values <S^x_i S^x_j> and <S^z_i S^z_j>.
inline CorrelationPair exact_correlations(const DenseGroundState& state, int i, int j) {
    if (i == j) throw Error("exact_correlations: i and j must differ");
    std::unordered_map<std::uint32_t, int> index;
    index.reserve(state.basis.size() * 2);
    for (int r = 0; r < static_cast<int>(state.basis.size()); ++r) index.emplace(state.basis[r], r);

    double sxx = 0.0;
    double szz = 0.0;
    const std::uint32_t flip = (1u << i) | (1u << j);
    for (std::size_t k = 0; k < state.basis.size(); ++k) {
        const std::uint32_t m = state.basis[k];
        const bool up_i = (m >> i) & 1u;
        const bool up_j = (m >> j) & 1u;
        const double a = state.amplitudes(static_cast<int>(k));
        szz += a * a * (up_i == up_j ? 0.25 : -0.25);
        if (up_i != up_j) sxx += 0.25 * a * state.amplitudes(index.at(m ^ flip));
    }
    return {i, j, sxx, szz};
}

}  // namespace rsc
