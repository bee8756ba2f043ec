#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "rsc/common.hpp"

namespace rsc {

/// Two-qubit state of a symmetric spin pair, diagonal in the Bell basis.
/// Weight order: |Psi->, |Psi+>, |Phi+>, |Phi->.
struct TwoQubitState {
    std::array<double, 4> bell_weights{};

    /// Density matrix in the computational basis (|++>, |+->, |-+>, |-->).
    Eigen::Matrix4d to_matrix() const {
        const double wm = bell_weights[0];  // |Psi->
        const double wp = bell_weights[1];  // |Psi+>
        const double fp = bell_weights[2];  // |Phi+>
        const double fm = bell_weights[3];  // |Phi->
        Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();
        rho(0, 0) = rho(3, 3) = (fp + fm) / 2.0;
        rho(0, 3) = rho(3, 0) = (fp - fm) / 2.0;
        rho(1, 1) = rho(2, 2) = (wp + wm) / 2.0;
        rho(1, 2) = rho(2, 1) = (wp - wm) / 2.0;
        return rho;
    }
};

/// Entanglement panel of one spin pair. All measures are functions of the
/// fidelity for this symmetry class; the redundancy is checked, not assumed.
struct PairEntanglement {
    double fidelity = 0.0;
    double negativity = 0.0;
    double log_negativity = 0.0;
    double concurrence = 0.0;
    double eof = 0.0;
};

inline constexpr double kFidelityClamp = 1e-9;
inline constexpr double kWeightFloor = -1e-10;

/// Singlet fidelity F = 1/4 - 2 Cxx - Czz. Excursions beyond [0,1] smaller
/// than 1e-9 are clamped; anything larger is a genuine bug upstream.
inline double fidelity(double cxx, double czz) {
    if (std::abs(cxx) > 0.25 + kFidelityClamp || std::abs(czz) > 0.25 + kFidelityClamp)
        throw InvalidCorrelation("fidelity: correlation outside the spin-1/2 bound");
    double f = 0.25 - 2.0 * cxx - czz;
    if (f < -kFidelityClamp || f > 1.0 + kFidelityClamp)
        throw InvalidCorrelation("fidelity: value outside [0,1] beyond clamp");
    return std::clamp(f, 0.0, 1.0);
}

/// Bell-basis weights (F, 4 Cxx + F, 1/4 + Czz, 1/4 + Czz). The weights sum
/// to 1 identically.
inline TwoQubitState reconstruct_state(double cxx, double czz) {
    const double f = fidelity(cxx, czz);
    TwoQubitState s{{f, 4.0 * cxx + f, 0.25 + czz, 0.25 + czz}};
    for (double w : s.bell_weights)
        if (w < kWeightFloor) throw NotPositive("reconstruct_state: negative Bell weight");
    return s;
}

inline double negativity(double f) {
    return f <= 0.5 ? 0.0 : 2.0 * f - 1.0;
}

inline double log_negativity(double f) {
    return f <= 0.5 ? 0.0 : std::log2(2.0 * f);
}

/// Wootters concurrence by the full eigenvalue route: square roots of the
/// eigenvalues of rho (sy x sy) rho* (sy x sy), in decreasing order. This is
/// deliberately not the Bell-diagonal shortcut, so it independently checks
/// C = N on every computed pair.
inline double concurrence_wootters(const TwoQubitState& state) {
    for (double w : state.bell_weights)
        if (w < kWeightFloor) throw NotPositive("concurrence_wootters: invalid state");
    const Eigen::Matrix4d rho = state.to_matrix();
    Eigen::Matrix4d yy = Eigen::Matrix4d::Zero();  // sigma_y x sigma_y (real)
    yy(0, 3) = yy(3, 0) = -1.0;
    yy(1, 2) = yy(2, 1) = 1.0;
    // rho is real, so rho* = rho and the usual lambda_i (square roots of the
    // eigenvalues of rho yy rho yy) equal the absolute eigenvalues of the real
    // symmetric matrix sqrt(rho) yy sqrt(rho); taking them directly avoids
    // squaring, which would wash out the small lambda_i in double precision
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> rho_es(rho);
    Eigen::Vector4d d = rho_es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4d sqrt_rho =
        rho_es.eigenvectors() * d.asDiagonal() * rho_es.eigenvectors().transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(sqrt_rho * yy * sqrt_rho);
    std::array<double, 4> lambda{};
    for (int k = 0; k < 4; ++k) lambda[k] = std::abs(es.eigenvalues()(k));
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

/// Entanglement of formation: binary entropy of x = 1/2 + sqrt(1 - C^2)/2.
inline double entanglement_of_formation(double c) {
    if (c < 0.0 || c > 1.0) throw Error("entanglement_of_formation: C outside [0,1]");
    const double x = 0.5 + std::sqrt(std::max(0.0, 1.0 - c * c)) / 2.0;
    auto h = [](double p) { return p <= 0.0 || p >= 1.0 ? 0.0 : -p * std::log2(p); };
    return h(x) + h(1.0 - x);
}

/// Full panel from one correlation pair.
inline PairEntanglement panel_from_correlations(double cxx, double czz) {
    PairEntanglement p;
    p.fidelity = fidelity(cxx, czz);
    p.negativity = negativity(p.fidelity);
    p.log_negativity = log_negativity(p.fidelity);
    p.concurrence = concurrence_wootters(reconstruct_state(cxx, czz));
    p.eof = entanglement_of_formation(p.concurrence);
    return p;
}

}  // namespace rsc
