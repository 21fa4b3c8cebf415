#pragma once

#include "sta/czmath.hpp"

#include <functional>

namespace sta::pulse {

using ScalarFn = std::function<double(double)>;

// Time-parametrized control fields of the decaying two-level atom together
// with their analytic time derivatives. Units: time in ns, rates in rad/ns.
struct PulseSchedule {
    ScalarFn delta;      // detuning
    ScalarFn delta_dot;
    ScalarFn rabi;       // real Rabi frequency, >= 0
    ScalarFn rabi_dot;
    ScalarFn gamma;      // decay rate of the excited level, >= 0
    ScalarFn gamma_dot;
    double t_start = 0.0;
    double t_end = 0.0;

    double duration() const { return t_end - t_start; }
};

// Omega_R(t) = omega0_rabi * exp(-a_width t^2), Delta(t) = -2 b_chirp t, constant gamma.
struct ChirpedGaussianParams {
    double omega0_rabi = 0.0; // rad/ns
    double a_width = 0.0;     // 1/ns^2, > 0
    double b_chirp = 0.0;     // 1/ns^2
    double gamma = 0.0;       // rad/ns
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kDefaultWindowFactor = 5.0;

// Plain frequency in MHz to angular frequency in rad/ns.
inline constexpr double mhz_to_rad_per_ns(double mhz) { return kTwoPi * mhz * 1e-3; }

// Chirp/width coefficient given as (2 pi)^2 x value in GHz^2, to 1/ns^2.
inline constexpr double ghz2_to_per_ns2(double ghz2) { return kTwoPi * kTwoPi * ghz2; }

// Reference RAP pulse: Gamma = 2pi x 2 MHz, a = (2pi)^2 x 0.01 GHz^2,
// b = (2pi)^2 x 0.00025 GHz^2, Omega_0 = 2pi x 100 MHz.
ChirpedGaussianParams reference_rap_params();

// Chirped Gaussian on the window [-w, w], w = window_factor / sqrt(a).
PulseSchedule chirped_gaussian(const ChirpedGaussianParams& params,
                               double window_factor = kDefaultWindowFactor);

// Time-independent fields on [t_start, t_end].
PulseSchedule constant_schedule(double delta, double rabi, double gamma, double t_start, double t_end);

// Omega(t) = sqrt(-[Gamma + 2i Delta]^2 + 4 Omega_R^2), principal branch.
cplx gap_frequency(const PulseSchedule& s, double t);

// 2|Omega_a(t)| / |Omega(t)| with Omega_a = -alpha_dot / 2. Small values mean
// the bare Hamiltonian follows its eigenstates. Throws ZeroGap if |Omega|
// underflows.
double adiabaticity_ratio(const PulseSchedule& s, double t);

// Generic non-Hermitian adiabaticity measure
//   max_{n != m} |<n^(t)|d_t m(t)>| / |E_n - E_m|
// from numerically differentiated, gauge-aligned eigenvectors of hfun.
double hermitian_adiabaticity_check(const std::function<ComplexMat2(double)>& hfun, double t,
                                    double h = 1e-4);

} // namespace sta::pulse
