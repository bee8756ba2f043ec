#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rsc {

enum class Boundary { open, periodic };

inline std::string to_string(Boundary b) {
    return b == Boundary::open ? "open" : "periodic";
}

inline Boundary boundary_from_string(const std::string& s) {
    if (s == "open") return Boundary::open;
    if (s == "periodic") return Boundary::periodic;
    throw std::invalid_argument("unknown boundary: " + s);
}

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filling ambiguity: a single-particle level at |eps| below the degeneracy
// cutoff. Callers resample the realization.
struct DegenerateSpectrum : Error {
    using Error::Error;
};

struct InvalidCorrelation : Error {
    using Error::Error;
};

struct NotPositive : Error {
    using Error::Error;
};

struct TooLarge : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

struct EmptyInput : Error {
    using Error::Error;
};

struct EmptyWindow : Error {
    using Error::Error;
};

}  // namespace rsc
