#pragma once

// Independent reference computations used only by the tests.

#include "sta/czmath.hpp"

#include <cmath>
#include <random>

namespace sta::test {

// exp(M) by scaling and squaring with a 20-term Taylor series.
inline ComplexMat2 expm(const ComplexMat2& m)
{
    int squarings = 0;
    double n = m.frobenius_norm();
    while (n > 0.5) {
        n *= 0.5;
        ++squarings;
    }
    const ComplexMat2 a = std::ldexp(1.0, -squarings) * m;
    ComplexMat2 term = ComplexMat2::identity();
    ComplexMat2 sum = term;
    for (int k = 1; k <= 20; ++k) {
        term = (1.0 / k) * (term * a);
        sum = sum + term;
    }
    for (int k = 0; k < squarings; ++k)
        sum = sum * sum;
    return sum;
}

// Exact propagator of a constant Hamiltonian: exp(-i H t).
inline ComplexMat2 propagator(const ComplexMat2& h, double t) { return expm(cplx{0.0, -t} * h); }

// Closed-form quintic ramp 1 + (rho_f - 1)(10 s^3 - 15 s^4 + 6 s^5) and its s-derivatives.
struct Smoothstep {
    double rho_f;
    double value(double s) const { return 1.0 + (rho_f - 1.0) * s * s * s * (10.0 - 15.0 * s + 6.0 * s * s); }
    double d1(double s) const { return (rho_f - 1.0) * 30.0 * s * s * (1.0 - s) * (1.0 - s); }
};

inline ComplexMat2 random_matrix(std::mt19937_64& rng, bool symmetric)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto c = [&] { return cplx{u(rng), u(rng)}; };
    const cplx off = c();
    return {c(), off, symmetric ? off : c(), c()};
}

inline double max_entry_diff(const ComplexMat2& a, const ComplexMat2& b) { return (a - b).max_abs(); }

} // namespace sta::test
