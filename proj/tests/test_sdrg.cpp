#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "rsc/disorder.hpp"
#include "rsc/sdrg.hpp"
#include "rsc/stats.hpp"

using namespace rsc;

namespace {

ChainSpec open4(std::vector<double> j, std::vector<double> d) {
    ChainSpec chain;
    chain.length = 4;
    chain.boundary = Boundary::open;
    chain.couplings = std::move(j);
    chain.deltas = std::move(d);
    return chain;
}

// circle interleaving check: bonds (a,b), (c,d) must be nested or disjoint
bool crossing(int a, int b, int c, int d, int L, Boundary boundary) {
    auto between = [&](int x, int lo, int hi) {
        if (boundary == Boundary::open || lo < hi) return lo < x && x < hi;
        return x > lo || x < hi;  // arc wrapping the seam
    };
    // on the circle, use the arc from a to b ascending
    const bool c_in = between(c, a, b);
    const bool d_in = between(d, a, b);
    return c_in != d_in;
}

void check_structure(const SdrgTrace& trace) {
    const int L = trace.chain.length;
    std::set<int> seen;
    double prev = 1e300;
    for (const auto& r : trace.records) {
        CHECK(r.j_eff > 0.0);
        CHECK(r.left != r.right);
        CHECK(seen.insert(r.left).second);
        CHECK(seen.insert(r.right).second);
        CHECK(pair_distance(r, L, trace.chain.boundary) % 2 == 1);
        CHECK(r.j_eff <= prev * (1.0 + 1e-12));
        prev = r.j_eff;
    }
    CHECK(static_cast<int>(seen.size()) == L);
    for (std::size_t a = 0; a < trace.records.size(); ++a)
        for (std::size_t b = a + 1; b < trace.records.size(); ++b)
            CHECK_FALSE(crossing(trace.records[a].left, trace.records[a].right,
                                 trace.records[b].left, trace.records[b].right, L,
                                 trace.chain.boundary));
}

}  // namespace

TEST_CASE("decimation rule arithmetic at Delta = 0") {
    const auto trace = decimate(open4({1.0, 5.0, 1.0}, {0.0, 0.0, 0.0}));
    REQUIRE(trace.records.size() == 2);
    CHECK(trace.records[0].left == 1);
    CHECK(trace.records[0].right == 2);
    CHECK(trace.records[0].j_eff == doctest::Approx(5.0));
    CHECK(trace.records[1].left == 0);
    CHECK(trace.records[1].right == 3);
    CHECK(trace.records[1].j_eff == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(last_pair(trace).step == 2);
}

TEST_CASE("decimation rule arithmetic with anisotropy flow") {
    const auto trace = decimate(open4({1.0, 5.0, 1.0}, {1.0, 1.0, 1.0}));
    REQUIRE(trace.records.size() == 2);
    CHECK(trace.records[1].j_eff == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(trace.records[1].delta_eff == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("two-site chain") {
    ChainSpec chain;
    chain.length = 2;
    chain.boundary = Boundary::open;
    chain.couplings = {0.7};
    chain.deltas = {0.0};
    const auto trace = decimate(chain);
    REQUIRE(trace.records.size() == 1);
    CHECK(trace.records[0].left == 0);
    CHECK(trace.records[0].right == 1);
    CHECK(trace.records[0].j_eff == doctest::Approx(0.7));
    CHECK(last_pair(trace).step == 1);
}

TEST_CASE("pair_distance") {
    CHECK(pair_distance({0, 3, 1.0, 0.0, 1}, 4, Boundary::open) == 3);
    CHECK(pair_distance({1, 95, 1.0, 0.0, 1}, 100, Boundary::periodic) == 6);
    CHECK(pair_distance({0, 50, 1.0, 0.0, 1}, 100, Boundary::periodic) == 50);
}

TEST_CASE("structural invariants on random traces") {
    for (auto boundary : {Boundary::open, Boundary::periodic}) {
        for (double alpha : {0.0, 0.6}) {
            for (std::uint64_t r = 0; r < 50; ++r) {
                const auto chain = sample_chain({alpha, 1.0}, 100, boundary, {13, r});
                check_structure(decimate(chain));
            }
        }
    }
}

TEST_CASE("longest pair selector") {
    const auto chain = sample_chain({0.6, 1.0}, 100, Boundary::periodic, {3, 1});
    const auto trace = decimate(chain);
    const auto& longest = longest_pair(trace);
    for (const auto& r : trace.records)
        CHECK(pair_distance(r, 100, Boundary::periodic) <=
              pair_distance(longest, 100, Boundary::periodic));
}

TEST_CASE("last pairs are long: ~70% land in [L/6, L/2]") {
    const int n = 2000;
    int in_window = 0;
    for (std::uint64_t r = 0; r < n; ++r) {
        const auto chain = sample_chain({0.6, 1.0}, 100, Boundary::periodic, {17, r});
        const int d = pair_distance(last_pair(decimate(chain)), 100, Boundary::periodic);
        if (d >= 100 / 6.0 && d <= 50) ++in_window;
    }
    CHECK(static_cast<double>(in_window) / n == doctest::Approx(0.70).epsilon(0.15));
}

TEST_CASE("trace JSON serialization") {
    const auto chain = sample_chain({0.3, 1.0}, 10, Boundary::periodic, {1, 0});
    const auto trace = decimate(chain);
    const nlohmann::json j = trace;
    CHECK(j.at("records").size() == 5);
    CHECK(j.at("chain").at("length") == 10);
    CHECK(j.at("records")[0].contains("j_eff"));
}
