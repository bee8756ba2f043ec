#pragma once

#include <cstdint>
#include <random>

namespace rsc {

/// Identity of one disorder realization inside an ensemble. The pair
/// (master_seed, realization_index) deterministically derives an independent
/// stream, so ensembles are reproducible regardless of worker scheduling.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t realization_index = 0;
    std::uint64_t attempt = 0;  // bumped when a realization is resampled
};

namespace detail {

// splitmix64 finalizer (Vigna); full-period 64-bit mix.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

inline std::uint64_t derive_stream_seed(const SeedSpec& s) {
    std::uint64_t z = detail::splitmix64(s.master_seed);
    z = detail::splitmix64(z ^ detail::splitmix64(s.realization_index));
    z = detail::splitmix64(z ^ detail::splitmix64(s.attempt + 0x5555555555555555ULL));
    return z;
}

/// mt19937_64 is fully specified by the standard, so streams are
/// bit-reproducible across platforms.
inline std::mt19937_64 make_stream(const SeedSpec& s) {
    return std::mt19937_64(derive_stream_seed(s));
}

/// Uniform variate on (0, 1]; never returns 0, so inverse-CDF coupling
/// sampling never produces J = 0.
inline double uniform_open_closed(std::mt19937_64& rng) {
    const std::uint64_t x = rng() >> 11;  // 53 random bits
    return static_cast<double>(x + 1) * 0x1p-53;
}

}  // namespace rsc
