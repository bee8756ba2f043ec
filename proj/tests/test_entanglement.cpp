#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rsc/disorder.hpp"
#include "rsc/ed_oracle.hpp"
#include "rsc/entanglement.hpp"
#include "rsc/fermion.hpp"
#include "rsc/rng.hpp"

using namespace rsc;

TEST_CASE("fidelity of reference states") {
    CHECK(fidelity(-0.25, -0.25) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fidelity(0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(fidelity(0.0, 0.25) == doctest::Approx(0.0));
    CHECK_THROWS_AS(fidelity(0.3, 0.0), InvalidCorrelation);
    CHECK_THROWS_AS(fidelity(-0.25, 0.3), InvalidCorrelation);
    // micro-clamping keeps tiny excursions, rejects real ones
    CHECK(fidelity(-0.25, -0.25 - 5e-10) == 1.0);
    CHECK_THROWS_AS(fidelity(-0.25 - 5e-9, -0.25 - 5e-9), InvalidCorrelation);
}

TEST_CASE("Bell-state reconstruction") {
    const auto singlet = reconstruct_state(-0.25, -0.25);
    CHECK(singlet.bell_weights[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(singlet.bell_weights[1] == doctest::Approx(0.0));
    CHECK(singlet.bell_weights[2] == doctest::Approx(0.0));

    const auto mixed = reconstruct_state(0.0, 0.0);
    for (double w : mixed.bell_weights) CHECK(w == doctest::Approx(0.25).epsilon(1e-14));

    CHECK_THROWS_AS(reconstruct_state(-0.2, 0.2), NotPositive);
}

TEST_CASE("negativity and log-negativity branches") {
    CHECK(negativity(1.0) == doctest::Approx(1.0));
    CHECK(negativity(0.5) == doctest::Approx(0.0));
    CHECK(negativity(0.75) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(log_negativity(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(log_negativity(0.5) == doctest::Approx(0.0));
    CHECK(log_negativity(0.75) == doctest::Approx(0.5849625007211562).epsilon(1e-14));
    // monotone on [0,1]
    double prev_n = -1.0, prev_e = -1.0;
    for (int k = 0; k <= 100; ++k) {
        const double f = k / 100.0;
        CHECK(negativity(f) >= prev_n);
        CHECK(log_negativity(f) >= prev_e);
        prev_n = negativity(f);
        prev_e = log_negativity(f);
    }
}

TEST_CASE("Wootters concurrence on reference states") {
    CHECK(concurrence_wootters(reconstruct_state(-0.25, -0.25)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(concurrence_wootters(reconstruct_state(0.0, 0.0)) == doctest::Approx(0.0));
}

TEST_CASE("entanglement of formation") {
    CHECK(entanglement_of_formation(0.0) == doctest::Approx(0.0));
    CHECK(entanglement_of_formation(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(entanglement_of_formation(0.5) == doctest::Approx(0.35457890266527003).epsilon(1e-13));
    // monotone in C
    double prev = -1.0;
    for (int k = 0; k <= 50; ++k) {
        const double e = entanglement_of_formation(k / 50.0);
        CHECK(e >= prev);
        prev = e;
    }
}

TEST_CASE("consistency chain on correlations from real chains") {
    // C (eigenvalue route) == N == max(0, 2F-1), E == log2(N+1), weights normalized
    int checked = 0;
    for (std::uint64_t r = 0; r < 25; ++r) {
        const auto chain = sample_chain({0.6, 1.0}, 16, Boundary::open, {55, r});
        const auto gm = ground_correlation_matrix(chain);
        for (int i = 0; i < 16; ++i)
            for (int j = i + 1; j < 16; ++j) {
                const double xx = cxx(gm, i, j);
                const double zz = czz(gm, i, j);
                const auto p = panel_from_correlations(xx, zz);
                CHECK(std::abs(p.negativity - std::max(0.0, 2.0 * p.fidelity - 1.0)) < 1e-10);
                CHECK(std::abs(p.concurrence - p.negativity) < 1e-10);
                CHECK(std::abs(p.log_negativity - std::log2(p.negativity + 1.0)) < 1e-10);
                CHECK((p.negativity > 0.0) == (p.fidelity > 0.5));
                const auto w = reconstruct_state(xx, zz).bell_weights;
                CHECK(std::abs(w[0] + w[1] + w[2] + w[3] - 1.0) < 1e-12);
                ++checked;
            }
    }
    CHECK(checked > 1000);
}

TEST_CASE("reconstructed state matches the traced-out oracle state") {
    for (std::uint64_t r = 0; r < 5; ++r) {
        const auto chain = sample_chain({0.3, 1.0}, 10, Boundary::periodic, {91, r});
        const auto gs = dense_ground_state(chain);
        if (gs.degenerate) continue;
        for (int i = 0; i < 10; ++i)
            for (int j = i + 1; j < 10; ++j) {
                const auto corr = correlation_pair(chain, i, j);
                const auto rho = reconstruct_state(corr.cxx, corr.czz).to_matrix();
                const auto rho_ed = exact_pair_state(gs, i, j);
                CHECK((rho - rho_ed).cwiseAbs().maxCoeff() < 1e-8);
            }
    }
}
