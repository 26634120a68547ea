#pragma once

#include <stdexcept>
#include <string>

namespace qmt {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A factor of a negative-index Pochhammer (or a series denominator) is exactly zero.
struct PoleError : Error {
    using Error::Error;
};

// A truncated sum or product hit max_terms without meeting the tail tolerance.
struct NonConvergence : Error {
    using Error::Error;
};

// Bilateral series argument outside |b1 b2 / (a1 a2)| < |z| < 1.
struct AnnulusViolation : Error {
    using Error::Error;
};

// A prefactor or quotient degenerated (zero denominator product, |z| below guard).
struct Singularity : Error {
    using Error::Error;
};

struct DivisionByZero : Error {
    using Error::Error;
};

struct UsageError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace qmt
