#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsc/common.hpp"
#include "rsc/rng.hpp"

namespace rsc {

/// Power-law coupling distribution P(J) = (1-alpha)/omega0^{1-alpha} J^{-alpha}
/// on (0, omega0]. alpha = 0 is the uniform box; larger alpha means stronger
/// disorder.
struct DisorderDistribution {
    double alpha = 0.0;
    double omega0 = 1.0;

    void validate() const {
        if (!(alpha < 1.0)) throw Error("disorder: alpha must be < 1");
        if (!(alpha >= 0.0)) throw Error("disorder: alpha must be >= 0");
        if (!(omega0 > 0.0)) throw Error("disorder: omega0 must be > 0");
    }
};

/// One disorder realization: couplings J_i > 0 and anisotropies Delta_i.
/// Periodic chains carry L couplings (bond i connects sites i and i+1 mod L),
/// open chains L-1.
struct ChainSpec {
    int length = 0;
    Boundary boundary = Boundary::periodic;
    std::vector<double> couplings;
    std::vector<double> deltas;
    std::uint64_t stream_seed = 0;  // provenance only

    std::size_t bond_count() const {
        return boundary == Boundary::periodic ? static_cast<std::size_t>(length)
                                              : static_cast<std::size_t>(length - 1);
    }

    void validate() const {
        if (length < 2 || length % 2 != 0) throw Error("chain: length must be even and >= 2");
        if (couplings.size() != bond_count()) throw Error("chain: wrong coupling count");
        if (deltas.size() != bond_count()) throw Error("chain: wrong delta count");
        for (double j : couplings)
            if (!(j > 0.0)) throw Error("chain: couplings must be strictly positive");
    }

    bool free_fermion_point() const {
        for (double d : deltas)
            if (d != 0.0) return false;
        return true;
    }
};

/// Inverse-CDF sample of P(J): J = omega0 * u^{1/(1-alpha)}, u in (0,1].
inline double sample_coupling(const DisorderDistribution& dist, double u) {
    dist.validate();
    if (!(u > 0.0 && u <= 1.0)) throw Error("sample_coupling: u must lie in (0,1]");
    return dist.omega0 * std::pow(u, 1.0 / (1.0 - dist.alpha));
}

inline ChainSpec sample_chain(const DisorderDistribution& dist, int length, Boundary boundary,
                              const SeedSpec& seed) {
    dist.validate();
    if (length < 2 || length % 2 != 0) throw Error("sample_chain: length must be even and >= 2");
    ChainSpec chain;
    chain.length = length;
    chain.boundary = boundary;
    chain.stream_seed = derive_stream_seed(seed);
    auto rng = make_stream(seed);
    const std::size_t nb = chain.bond_count();
    chain.couplings.reserve(nb);
    for (std::size_t i = 0; i < nb; ++i)
        chain.couplings.push_back(sample_coupling(dist, uniform_open_closed(rng)));
    chain.deltas.assign(nb, 0.0);
    chain.validate();
    return chain;
}

/// Uniform-coupling chain, J = omega0 on every bond.
inline ChainSpec clean_chain(int length, Boundary boundary, double omega0 = 1.0) {
    ChainSpec chain;
    chain.length = length;
    chain.boundary = boundary;
    chain.couplings.assign(boundary == Boundary::periodic ? length : length - 1, omega0);
    chain.deltas.assign(chain.couplings.size(), 0.0);
    chain.validate();
    return chain;
}

/// Relabel a periodic chain so that old site `shift` becomes site 0.
/// Correlations are gauge-dependent only through site labels.
inline ChainSpec rotate_chain(const ChainSpec& chain, int shift) {
    if (chain.boundary != Boundary::periodic) throw Error("rotate_chain: periodic chains only");
    const int L = chain.length;
    shift = ((shift % L) + L) % L;
    ChainSpec out = chain;
    for (int k = 0; k < L; ++k) {
        out.couplings[k] = chain.couplings[(k + shift) % L];
        out.deltas[k] = chain.deltas[(k + shift) % L];
    }
    return out;
}

inline void to_json(nlohmann::json& j, const ChainSpec& c) {
    j = nlohmann::json{{"length", c.length},
                       {"boundary", to_string(c.boundary)},
                       {"couplings", c.couplings},
                       {"deltas", c.deltas},
                       {"seed", c.stream_seed}};
}

inline void from_json(const nlohmann::json& j, ChainSpec& c) {
    c.length = j.at("length").get<int>();
    c.boundary = boundary_from_string(j.at("boundary").get<std::string>());
    c.couplings = j.at("couplings").get<std::vector<double>>();
    c.deltas = j.at("deltas").get<std::vector<double>>();
    c.stream_seed = j.value("seed", std::uint64_t{0});
    c.validate();
}

}  // namespace rsc
