#pragma once

#include <stdexcept>
#include <string>

namespace sta {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Eigenvalues coalesce (exceptional point); no biorthogonal basis exists.
class DegenerateSpectrum : public Error {
public:
    using Error::Error;
};

// A gap-like denominator vanished (coalescing eigenvalues of the atom Hamiltonian).
class ZeroGap : public Error {
public:
    using Error::Error;
};

// The integrated state picked up a NaN or Inf.
class NonFiniteState : public Error {
public:
    using Error::Error;
};

// q0 = v0 = 0: the trajectory amplitude has no direction.
class InconsistentInitialConditions : public Error {
public:
    using Error::Error;
};

// Invalid run configuration (unknown key, bad value, unknown scenario).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace sta
