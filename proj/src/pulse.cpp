#include "sta/pulse.hpp"

#include "sta/ctrlh.hpp"
#include "sta/errors.hpp"

#include <cmath>
#include <limits>

namespace sta::pulse {

ChirpedGaussianParams reference_rap_params()
{
    return {mhz_to_rad_per_ns(100.0), ghz2_to_per_ns2(0.01), ghz2_to_per_ns2(0.00025),
            mhz_to_rad_per_ns(2.0)};
}

PulseSchedule chirped_gaussian(const ChirpedGaussianParams& p, double window_factor)
{
    if (!(p.a_width > 0.0))
        throw Error("chirped_gaussian: a_width must be positive");
    if (!(window_factor > 0.0))
        throw Error("chirped_gaussian: window_factor must be positive");
    if (p.omega0_rabi < 0.0 || p.gamma < 0.0)
        throw Error("chirped_gaussian: Rabi amplitude and decay rate must be non-negative");

    const double w = window_factor / std::sqrt(p.a_width);
    PulseSchedule s;
    s.delta = [b = p.b_chirp](double t) { return -2.0 * b * t; };
    s.delta_dot = [b = p.b_chirp](double) { return -2.0 * b; };
    s.rabi = [p](double t) { return p.omega0_rabi * std::exp(-p.a_width * t * t); };
    s.rabi_dot = [p](double t) { return -2.0 * p.a_width * t * p.omega0_rabi * std::exp(-p.a_width * t * t); };
    s.gamma = [g = p.gamma](double) { return g; };
    s.gamma_dot = [](double) { return 0.0; };
    s.t_start = -w;
    s.t_end = w;
    return s;
}

PulseSchedule constant_schedule(double delta, double rabi, double gamma, double t_start, double t_end)
{
    if (rabi < 0.0 || gamma < 0.0)
        throw Error("constant_schedule: Rabi frequency and decay rate must be non-negative");
    PulseSchedule s;
    s.delta = [delta](double) { return delta; };
    s.rabi = [rabi](double) { return rabi; };
    s.gamma = [gamma](double) { return gamma; };
    s.delta_dot = s.rabi_dot = s.gamma_dot = [](double) { return 0.0; };
    s.t_start = t_start;
    s.t_end = t_end;
    return s;
}

cplx gap_frequency(const PulseSchedule& s, double t)
{
    const cplx g = s.gamma(t) + 2.0 * kI * s.delta(t);
    const double rabi = s.rabi(t);
    return std::sqrt(-g * g + 4.0 * rabi * rabi);
}

double adiabaticity_ratio(const PulseSchedule& s, double t)
{
    const double gap = std::abs(gap_frequency(s, t));
    if (!(gap > std::numeric_limits<double>::min()))
        throw ZeroGap("adiabaticity_ratio: |Omega(t)| vanishes");
    const cplx omega_a = -0.5 * ctrlh::alpha_dot(s, t);
    return 2.0 * std::abs(omega_a) / gap;
}

double hermitian_adiabaticity_check(const std::function<ComplexMat2(double)>& hfun, double t, double h)
{
    const auto d = ctrlh::numeric_eigvec_derivative(hfun, t, h);
    const double gap = std::abs(d.basis.eigenvalues[0] - d.basis.eigenvalues[1]);
    if (!(gap > std::numeric_limits<double>::min()))
        throw ZeroGap("hermitian_adiabaticity_check: eigenvalues coalesce");
    double worst = 0.0;
    for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 2; ++m)
            if (n != m)
                worst = std::max(worst, std::abs(inner(d.basis.left[n], d.d_right[m])) / gap);
    return worst;
}

} // namespace sta::pulse
