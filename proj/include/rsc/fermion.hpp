#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>

#include <Eigen/Dense>

#include "rsc/common.hpp"
#include "rsc/disorder.hpp"

namespace rsc {

/// Jordan-Wigner fermion-parity sector of a periodic chain. The boundary bond
/// picks up the string sign: -J/2 for even total fermion number, +J/2 for odd.
/// Open chains have no boundary bond; we label them `even` by convention.
enum class ParitySector { even, odd };

/// Ground-state one-body correlations G_ij = <c_i^dag c_j> of the Delta=0
/// chain. G is a real symmetric projector onto the occupied modes; at half
/// filling G_ii = 1/2.
struct CorrelationMatrix {
    Eigen::MatrixXd g;
    ParitySector sector = ParitySector::even;
    double ground_energy = 0.0;
};

struct CorrelationPair {
    int i = 0;
    int j = 0;
    double cxx = 0.0;
    double czz = 0.0;
};

/// Log-space cancellation threshold for detecting exact zero modes of the
/// hopping problem (see solve_sector).
inline constexpr double kDegeneracyCutoff = 1e-12;

/// Single-particle hopping matrix of the Jordan-Wigner fermions:
/// tridiagonal with J_i/2 off the diagonal, plus the sign-carrying corner
/// element for periodic chains.
inline Eigen::MatrixXd single_particle_matrix(const ChainSpec& chain, ParitySector sector) {
    chain.validate();
    if (!chain.free_fermion_point())
        throw Error("single_particle_matrix: exact solver requires all deltas = 0");
    const int L = chain.length;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(L, L);
    for (int i = 0; i + 1 < L; ++i) {
        t(i, i + 1) = chain.couplings[i] / 2.0;
        t(i + 1, i) = t(i, i + 1);
    }
    if (chain.boundary == Boundary::periodic) {
        const double sign = (sector == ParitySector::even) ? -1.0 : 1.0;
        t(L - 1, 0) = sign * chain.couplings[L - 1] / 2.0;
        t(0, L - 1) = t(L - 1, 0);
    }
    return t;
}

namespace detail {

struct SectorSolve {
    Eigen::MatrixXd g;
    double energy = 0.0;
    int n_occupied = 0;
    bool degenerate = false;
};

// The hopping matrix only connects the even and odd sublattices, so with
// B = T(even, odd) = U S V^T the spectrum is +-sigma_k and the filled sea is
// spanned by (u_k, -v_k)/sqrt(2). Building G from the SVD keeps the projector
// and half-filling invariants exact even when sigma_k is tiny, where a plain
// eigensolver would mix the +-sigma partners.
inline SectorSolve solve_sector(const ChainSpec& chain, ParitySector sector) {
    const Eigen::MatrixXd t = single_particle_matrix(chain, sector);
    const int L = chain.length;
    const int h = L / 2;
    Eigen::MatrixXd b(h, h);
    for (int a = 0; a < h; ++a)
        for (int c = 0; c < h; ++c) b(a, c) = t(2 * a, 2 * c + 1);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();

    SectorSolve out;
    out.n_occupied = h;
    for (int k = 0; k < h; ++k) out.energy -= sigma(k);

    // Zero modes exist iff det B = 0. B is lower bidiagonal plus the ring
    // corner, so det B = prod(even couplings) +- prod(odd couplings) up to a
    // 2^-h scale; it vanishes only when the corner sign cancels the products
    // (exact for uniform rings, measure-zero for continuous disorder). Testing
    // the cancellation in log space keeps absolutely tiny-but-resolved levels
    // - the long-distance singlets - from being misread as zero modes.
    if (chain.boundary == Boundary::periodic) {
        const bool corner_cancels = (sector == ParitySector::even) == (h % 2 == 1);
        if (corner_cancels) {
            double log_even = 0.0, log_odd = 0.0;
            for (int a = 0; a < h; ++a) {
                log_even += std::log(chain.couplings[2 * a]);
                log_odd += std::log(chain.couplings[2 * a + 1]);
            }
            if (std::abs(log_even - log_odd) < kDegeneracyCutoff) out.degenerate = true;
        }
    }
    const Eigen::MatrixXd uv = svd.matrixU() * svd.matrixV().transpose();
    out.g = Eigen::MatrixXd::Zero(L, L);
    for (int i = 0; i < L; ++i) out.g(i, i) = 0.5;
    for (int a = 0; a < h; ++a)
        for (int c = 0; c < h; ++c) {
            out.g(2 * a, 2 * c + 1) = -0.5 * uv(a, c);
            out.g(2 * c + 1, 2 * a) = -0.5 * uv(a, c);
        }
    return out;
}

inline bool parity_consistent(const SectorSolve& s, ParitySector sector) {
    const bool even_count = s.n_occupied % 2 == 0;
    return (sector == ParitySector::even) ? even_count : !even_count;
}

}  // namespace detail

/// Diagonalize the hopping problem and fill all negative-energy modes.
/// Periodic chains are solved in both parity sectors; the candidate whose
/// occupied-mode count matches its own sector and has the lower energy wins.
/// A sector with zero modes is discarded (ambiguous filling); if no
/// candidate survives, DegenerateSpectrum is thrown and the caller resamples
/// the realization.
inline CorrelationMatrix ground_correlation_matrix(const ChainSpec& chain) {
    chain.validate();
    if (!chain.free_fermion_point())
        throw Error("ground_correlation_matrix: exact solver requires all deltas = 0");

    std::optional<CorrelationMatrix> best;
    const bool periodic = chain.boundary == Boundary::periodic;
    for (ParitySector sector : {ParitySector::even, ParitySector::odd}) {
        if (!periodic && sector == ParitySector::odd) continue;
        auto s = detail::solve_sector(chain, sector);
        if (s.degenerate) continue;
        if (periodic && !detail::parity_consistent(s, sector)) continue;
        if (!best || s.energy < best->ground_energy)
            best = CorrelationMatrix{std::move(s.g), sector, s.energy};
    }
    if (!best) throw DegenerateSpectrum("ground_correlation_matrix: ambiguous filling");
    return *best;
}

/// <S^z_i S^z_j> by Wick contraction of (n_i - 1/2)(n_j - 1/2).
inline double czz(const CorrelationMatrix& gm, int i, int j) {
    if (i == j) throw Error("czz: i and j must differ");
    return (gm.g(i, i) - 0.5) * (gm.g(j, j) - 0.5) - gm.g(i, j) * gm.g(i, j);
}

/// <S^x_i S^x_j> via the string-correlator determinant: (1/4) det M with
/// M_{lm} = 2 G_{l,m} - delta_{lm}, rows l = i..j-1, columns m = i+1..j.
/// The Jordan-Wigner string runs along ascending indices, so this requires
/// i < j with no wrap; periodic pairs are handled by correlation_pair below.
inline double cxx(const CorrelationMatrix& gm, int i, int j) {
    if (!(i < j)) throw Error("cxx: requires i < j");
    const int d = j - i;
    Eigen::MatrixXd m(d, d);
    for (int l = 0; l < d; ++l)
        for (int c = 0; c < d; ++c) {
            const int row = i + l;
            const int col = i + 1 + c;
            m(l, c) = 2.0 * gm.g(row, col) - (row == col ? 1.0 : 0.0);
        }
    return 0.25 * m.partialPivLu().determinant();
}

/// Chordal pair distance: |j-i| for open chains, shorter arc for rings.
inline int site_distance(int i, int j, int length, Boundary boundary) {
    int d = std::abs(j - i);
    if (boundary == Boundary::periodic) d = std::min(d, length - d);
    return d;
}

/// Exact (cxx, czz) for one pair of a chain, including the one eigen-solve.
/// Periodic chains are relabeled so the pair sits on the ascending shorter
/// arc and the string never wraps.
inline CorrelationPair correlation_pair(const ChainSpec& chain, int i, int j) {
    if (i == j) throw Error("correlation_pair: i and j must differ");
    if (i > j) std::swap(i, j);
    const int L = chain.length;

    if (chain.boundary == Boundary::periodic && j - i > L - (j - i)) {
        // shorter arc wraps: rotate so old site j becomes site 0
        const ChainSpec rotated = rotate_chain(chain, j);
        const auto gm = ground_correlation_matrix(rotated);
        const int d = L - (j - i);
        return {i, j, cxx(gm, 0, d), czz(gm, 0, d)};
    }
    const auto gm = ground_correlation_matrix(chain);
    return {i, j, cxx(gm, i, j), czz(gm, i, j)};
}

}  // namespace rsc
