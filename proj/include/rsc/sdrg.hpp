#pragma once

#include <algorithm>
#include <queue>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsc/common.hpp"
#include "rsc/disorder.hpp"
#include "rsc/fermion.hpp"

namespace rsc {

/// One decimated singlet: the paired sites, the effective coupling and
/// anisotropy at decimation time, and the decimation order (1-based).
struct SingletRecord {
    int left = 0;
    int right = 0;
    double j_eff = 0.0;
    double delta_eff = 0.0;
    int step = 0;
};

struct SdrgTrace {
    std::vector<SingletRecord> records;  // decimation order
    ChainSpec chain;
};

inline int pair_distance(const SingletRecord& rec, int length, Boundary boundary) {
    return site_distance(rec.left, rec.right, length, boundary);
}

namespace detail {

struct SdrgBond {
    int left = -1;   // spin index
    int right = -1;  // spin index
    double j = 0.0;
    double delta = 0.0;
    bool alive = false;
};

struct SdrgSpin {
    int left_bond = -1;
    int right_bond = -1;
    bool alive = true;
};

struct BondRef {
    double j;
    int left;  // tie-break: lowest left-site index
    int id;
    bool operator<(const BondRef& o) const {
        if (j != o.j) return j < o.j;
        return left > o.left;  // max-heap: prefer smaller left index on ties
    }
};

}  // namespace detail

/// Full strong-disorder decimation: repeatedly remove the strongest-coupled
/// adjacent pair, record it as a singlet, and rejoin its neighbors with
/// J~ = J_l J_r / ((1 + Delta) J) and Delta~ = Delta_l Delta_r (1 + Delta)/2.
/// Open-chain edge decimations form no new bond. The final pair of a ring is
/// recorded at the stronger of its two surviving parallel bonds.
inline SdrgTrace decimate(const ChainSpec& chain) {
    chain.validate();
    const int L = chain.length;

    std::vector<detail::SdrgSpin> spins(L);
    std::vector<detail::SdrgBond> bonds;
    bonds.reserve(2 * L);
    std::priority_queue<detail::BondRef> queue;

    auto push_bond = [&](int left, int right, double j, double delta) {
        const int id = static_cast<int>(bonds.size());
        bonds.push_back({left, right, j, delta, true});
        spins[left].right_bond = id;
        spins[right].left_bond = id;
        queue.push({j, left, id});
        return id;
    };

    const std::size_t nb = chain.bond_count();
    for (std::size_t k = 0; k < nb; ++k)
        push_bond(static_cast<int>(k), static_cast<int>((k + 1) % L), chain.couplings[k],
                  chain.deltas[k]);

    SdrgTrace trace;
    trace.chain = chain;
    trace.records.reserve(L / 2);
    int alive = L;
    int step = 0;

    while (alive > 0) {
        detail::BondRef top = queue.top();
        queue.pop();
        detail::SdrgBond& b = bonds[top.id];
        if (!b.alive || b.j != top.j) continue;  // lazy invalidation
        b.alive = false;

        const int p = b.left;
        const int q = b.right;
        trace.records.push_back({std::min(p, q), std::max(p, q), b.j, b.delta, ++step});
        spins[p].alive = spins[q].alive = false;
        alive -= 2;
        if (alive == 0) break;

        const int lb = spins[p].left_bond;
        const int rb = spins[q].right_bond;
        if (lb >= 0) bonds[lb].alive = false;
        if (rb >= 0) bonds[rb].alive = false;
        if (lb >= 0 && rb >= 0) {
            const double j_new = bonds[lb].j * bonds[rb].j / ((1.0 + b.delta) * b.j);
            const double d_new = bonds[lb].delta * bonds[rb].delta * (1.0 + b.delta) / 2.0;
            push_bond(bonds[lb].left, bonds[rb].right, j_new, d_new);
        } else {
            // edge decimation on an open chain: detach the surviving neighbor
            if (lb >= 0) spins[bonds[lb].left].right_bond = -1;
            if (rb >= 0) spins[bonds[rb].right].left_bond = -1;
        }
    }

    return trace;
}

inline const SingletRecord& last_pair(const SdrgTrace& trace) {
    if (trace.records.empty()) throw Error("last_pair: empty trace");
    return trace.records.back();
}

/// Alternative selector: the pair with the largest chordal separation
/// (ties broken by later decimation step).
inline const SingletRecord& longest_pair(const SdrgTrace& trace) {
    if (trace.records.empty()) throw Error("longest_pair: empty trace");
    const auto it = std::max_element(
        trace.records.begin(), trace.records.end(), [&](const auto& a, const auto& b) {
            const int da = pair_distance(a, trace.chain.length, trace.chain.boundary);
            const int db = pair_distance(b, trace.chain.length, trace.chain.boundary);
            if (da != db) return da < db;
            return a.step < b.step;
        });
    return *it;
}

inline void to_json(nlohmann::json& j, const SingletRecord& r) {
    j = nlohmann::json{{"left", r.left},
                       {"right", r.right},
                       {"j_eff", r.j_eff},
                       {"delta_eff", r.delta_eff},
                       {"step", r.step}};
}

inline void to_json(nlohmann::json& j, const SdrgTrace& t) {
    j = nlohmann::json{{"chain", t.chain}, {"records", t.records}};
}

}  // namespace rsc
