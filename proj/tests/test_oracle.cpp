#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "rsc/disorder.hpp"
#include "rsc/ed_oracle.hpp"

using namespace rsc;

namespace {

ChainSpec make_chain(int length, Boundary boundary, std::vector<double> j,
                     std::vector<double> d) {
    ChainSpec chain;
    chain.length = length;
    chain.boundary = boundary;
    chain.couplings = std::move(j);
    chain.deltas = std::move(d);
    return chain;
}

// dense Hamiltonian on the full 2^L space, for the block-restriction check
Eigen::MatrixXd full_hamiltonian(const ChainSpec& chain) {
    const int L = chain.length;
    const int dim = 1 << L;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t b = 0; b < chain.bond_count(); ++b) {
        const int i = static_cast<int>(b);
        const int j = (i + 1) % L;
        for (int m = 0; m < dim; ++m) {
            const bool up_i = (m >> i) & 1;
            const bool up_j = (m >> j) & 1;
            h(m, m) += chain.couplings[b] * chain.deltas[b] * (up_i == up_j ? 0.25 : -0.25);
            if (up_i != up_j) {
                const int flipped = m ^ ((1 << i) | (1 << j));
                h(flipped, m) += chain.couplings[b] / 2.0;
            }
        }
    }
    return h;
}

}  // namespace

TEST_CASE("two sites, XX point: singlet at -J/2") {
    const auto gs = dense_ground_state(make_chain(2, Boundary::open, {1.0}, {0.0}));
    CHECK(gs.energy == doctest::Approx(-0.5).epsilon(1e-12));
    const auto rho = exact_pair_state(gs, 0, 1);
    // pure singlet projector in the computational basis
    CHECK(rho(1, 1) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(rho(2, 2) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(rho(1, 2) == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(rho(0, 0) == doctest::Approx(0.0));
    const auto corr = exact_correlations(gs, 0, 1);
    CHECK(corr.cxx == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(corr.czz == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("two sites, Heisenberg point: -3J/4") {
    const auto gs = dense_ground_state(make_chain(2, Boundary::open, {1.0}, {1.0}));
    CHECK(gs.energy == doctest::Approx(-0.75).epsilon(1e-12));
}

TEST_CASE("normalization and pair-state sanity") {
    const auto chain = sample_chain({0.6, 1.0}, 10, Boundary::open, {23, 4});
    const auto gs = dense_ground_state(chain);
    CHECK(std::abs(gs.amplitudes.squaredNorm() - 1.0) < 1e-12);
    const auto rho = exact_pair_state(gs, 2, 7);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
    CHECK((rho - rho.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(rho);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("isotropy at the Heisenberg point: cxx == czz") {
    ChainSpec chain = clean_chain(12, Boundary::open);
    chain.deltas.assign(chain.deltas.size(), 1.0);
    const auto gs = dense_ground_state(chain);
    REQUIRE_FALSE(gs.degenerate);
    for (int i : {0, 3, 5}) {
        const auto corr = exact_correlations(gs, i, i + 1);
        CHECK(corr.cxx == doctest::Approx(corr.czz).epsilon(1e-9));
    }
}

TEST_CASE("reflection symmetry of the energy") {
    const auto chain = sample_chain({0.6, 1.0}, 10, Boundary::open, {47, 0});
    ChainSpec reflected = chain;
    std::reverse(reflected.couplings.begin(), reflected.couplings.end());
    std::reverse(reflected.deltas.begin(), reflected.deltas.end());
    CHECK(dense_ground_state(chain).energy ==
          doctest::Approx(dense_ground_state(reflected).energy).epsilon(1e-10));
}

TEST_CASE("Sz=0 block restriction loses nothing (L <= 8)") {
    for (std::uint64_t r = 0; r < 3; ++r) {
        const auto chain = sample_chain({0.3, 1.0}, 8, Boundary::periodic, {61, r});
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full_hamiltonian(chain));
        CHECK(dense_ground_state(chain).energy ==
              doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
    }
}

TEST_CASE("size cap") {
    CHECK_THROWS_AS(dense_ground_state(clean_chain(16, Boundary::open)), TooLarge);
}

TEST_CASE("deterministic sign convention") {
    const auto chain = sample_chain({0.6, 1.0}, 8, Boundary::open, {3, 3});
    const auto a = dense_ground_state(chain);
    const auto b = dense_ground_state(chain);
    CHECK((a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff() < 1e-12);
    for (int k = 0; k < a.amplitudes.size(); ++k)
        if (std::abs(a.amplitudes(k)) > 1e-12) {
            CHECK(a.amplitudes(k) > 0.0);
            break;
        }
}
