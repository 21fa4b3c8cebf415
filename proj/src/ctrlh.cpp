#include "sta/ctrlh.hpp"

#include "sta/errors.hpp"
#include "sta/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace sta::ctrlh {

namespace {

cplx reduced_detuning(const PulseSchedule& s, double t) { return s.delta(t) - 0.5 * kI * s.gamma(t); }

double uniform_step(std::span<const double> grid)
{
    if (grid.size() < 2)
        return 0.0;
    return (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
}

} // namespace

XiPolicy XiPolicy::zero()
{
    return {[](double) { return cplx{}; }, [](double) { return cplx{}; }};
}

ComplexMat2 h_a0(const PulseSchedule& s, double t)
{
    const double rabi = s.rabi(t);
    const double delta = s.delta(t);
    return 0.5 * ComplexMat2{-delta, rabi, rabi, delta - kI * s.gamma(t)};
}

cplx alpha_dot(const PulseSchedule& s, double t)
{
    const cplx d = reduced_detuning(s, t);
    const double rabi = s.rabi(t);
    const cplx den = d * d + rabi * rabi;
    if (!(std::abs(den) > 1e-300))
        throw ZeroGap("alpha_dot: (Delta - i Gamma/2)^2 + Omega_R^2 vanishes");
    const cplx num = s.rabi_dot(t) * d - rabi * (s.delta_dot(t) - 0.5 * kI * s.gamma_dot(t));
    return num / den;
}

cplx principal_mixing_angle(const PulseSchedule& s, double t)
{
    const cplx d = reduced_detuning(s, t);
    const double rabi = s.rabi(t);
    if (d == cplx{})
        return rabi == 0.0 ? cplx{} : cplx{std::numbers::pi / 2.0};
    return std::atan(rabi / d);
}

std::vector<MixingAngleState> mixing_angle_trajectory(const PulseSchedule& s, std::span<const double> grid)
{
    std::vector<MixingAngleState> out;
    if (grid.empty())
        return out;
    out.reserve(grid.size());
    cplx alpha = principal_mixing_angle(s, grid[0]);
    cplx rate = alpha_dot(s, grid[0]);
    out.push_back({alpha, grid[0]});
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double t0 = grid[k - 1];
        const double t1 = grid[k];
        const cplx rate_mid = alpha_dot(s, 0.5 * (t0 + t1));
        const cplx rate_end = alpha_dot(s, t1);
        alpha += (t1 - t0) / 6.0 * (rate + 4.0 * rate_mid + rate_end);
        rate = rate_end;
        out.push_back({alpha, t1});
    }
    return out;
}

cplx cd_coupling(const PulseSchedule& s, double t) { return 0.5 * kI * alpha_dot(s, t); }

ComplexMat2 h_a1(const PulseSchedule& s, double t)
{
    const cplx c = cd_coupling(s, t);
    return {0.0, c, -c, 0.0};
}

ComplexMat2 h_a(const PulseSchedule& s, double t) { return h_a0(s, t) + h_a1(s, t); }

ComplexMat2 h_a_approx(const PulseSchedule& s, double t)
{
    const cplx c{0.0, cd_coupling(s, t).imag()};
    return h_a0(s, t) + ComplexMat2{0.0, c, -c, 0.0};
}

ComplexVec2 adiabatic_state(Branch b, cplx alpha)
{
    const cplx sn = std::sin(0.5 * alpha);
    const cplx cs = std::cos(0.5 * alpha);
    return b == Branch::plus ? ComplexVec2{sn, cs} : ComplexVec2{cs, -sn};
}

ComplexVec2 adiabatic_dual(Branch b, cplx alpha) { return adiabatic_state(b, std::conj(alpha)); }

cplx branch_energy(const PulseSchedule& s, Branch b, cplx alpha, double t)
{
    const cplx k = reduced_detuning(s, t) * std::cos(alpha) + s.rabi(t) * std::sin(alpha);
    const double sign = b == Branch::plus ? 1.0 : -1.0;
    return -0.25 * kI * s.gamma(t) + 0.5 * sign * k;
}

BiorthoBasis adiabatic_basis(const PulseSchedule& s, cplx alpha, double t)
{
    BiorthoBasis basis;
    const Branch branches[2] = {Branch::plus, Branch::minus};
    for (int n = 0; n < 2; ++n) {
        basis.eigenvalues[n] = branch_energy(s, branches[n], alpha, t);
        basis.right[n] = adiabatic_state(branches[n], alpha);
        basis.left[n] = adiabatic_dual(branches[n], alpha);
    }
    return basis;
}

std::vector<PhasePair> berry_phases(const PulseSchedule& s, std::span<const MixingAngleState> traj, Branch b)
{
    std::vector<cplx> integrand;
    std::vector<double> times;
    integrand.reserve(traj.size());
    times.reserve(traj.size());
    for (const auto& st : traj) {
        integrand.push_back(-branch_energy(s, b, st.alpha, st.t));
        times.push_back(st.t);
    }
    // beta is anchored at the schedule start; traj is expected to begin there.
    const auto beta = quad::cumulative_simpson<cplx>(integrand, uniform_step(times));
    std::vector<PhasePair> out;
    out.reserve(beta.size());
    for (const cplx& v : beta)
        out.push_back({v, std::conj(v)});
    return out;
}

PhasePair berry_phase(const PulseSchedule& s, Branch b, double t, std::size_t steps)
{
    if (t == s.t_start)
        return {};
    if (steps % 2 != 0)
        ++steps;
    std::vector<double> grid(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        grid[k] = s.t_start + (t - s.t_start) * static_cast<double>(k) / static_cast<double>(steps);
    grid.back() = t;
    const auto traj = mixing_angle_trajectory(s, grid);
    return berry_phases(s, traj, b).back();
}

ComplexMat2 h_xi(const PulseSchedule& s, cplx alpha, cplx xp, cplx xm, double t)
{
    const cplx c = cd_coupling(s, t);
    const cplx sn2 = std::pow(std::sin(0.5 * alpha), 2);
    const cplx cs2 = std::pow(std::cos(0.5 * alpha), 2);
    const cplx off = 0.5 * std::sin(alpha) * (xm - xp);
    return {-sn2 * xp - cs2 * xm, off + c, off - c, -cs2 * xp - sn2 * xm};
}

ComplexMat2 h_xi(const PulseSchedule& s, cplx alpha, const XiPolicy& policy, double t)
{
    return h_xi(s, alpha, policy.xi_plus_dot(t), policy.xi_minus_dot(t), t);
}

std::pair<cplx, cplx> canonical_xi_rates(const PulseSchedule& s, cplx alpha, double t)
{
    return {-branch_energy(s, Branch::plus, alpha, t), -branch_energy(s, Branch::minus, alpha, t)};
}

EigvecDerivative numeric_eigvec_derivative(const HamiltonianFn& hfun, double t, double h)
{
    EigvecDerivative out;
    out.basis = eigensystem_2x2(hfun(t));
    const BiorthoBasis plus = eigensystem_2x2(hfun(t + h));
    const BiorthoBasis minus = eigensystem_2x2(hfun(t - h));

    auto aligned = [&](const BiorthoBasis& other, int n) {
        const cplx e = out.basis.eigenvalues[n];
        const int j = std::abs(other.eigenvalues[0] - e) <= std::abs(other.eigenvalues[1] - e) ? 0 : 1;
        const ComplexVec2 v = other.right[j];
        const cplx g = inner(out.basis.left[n], v);
        return (std::abs(g) > 0.0 ? std::conj(g) / std::abs(g) : cplx{1.0}) * v;
    };

    for (int n = 0; n < 2; ++n)
        out.d_right[n] = (1.0 / (2.0 * h)) * (aligned(plus, n) - aligned(minus, n));
    return out;
}

ComplexMat2 h1_general(const HamiltonianFn& hfun, double t, double h)
{
    const auto d = numeric_eigvec_derivative(hfun, t, h);
    ComplexMat2 m;
    for (int n = 0; n < 2; ++n) {
        const auto& r = d.basis.right[n];
        const auto& l = d.basis.left[n];
        const cplx berry = inner(l, d.d_right[n]);
        m = m + outer(d.d_right[n], l) - berry * outer(r, l);
    }
    return kI * m;
}

double transitionless_residual(const PulseSchedule& s, Branch b, std::span<const double> grid,
                               const HamiltonianFn& h)
{
    if (grid.size() < 5)
        throw Error("transitionless_residual: need at least 5 grid points");
    const auto traj = mixing_angle_trajectory(s, grid);
    const auto phases = berry_phases(s, traj, b);
    std::vector<ComplexVec2> psi(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        psi[k] = std::exp(kI * phases[k].beta) * adiabatic_state(b, traj[k].alpha);

    const double dt = uniform_step(grid);
    double worst = 0.0;
    for (std::size_t k = 2; k + 2 < grid.size(); ++k) {
        const ComplexVec2 dpsi =
            (1.0 / (12.0 * dt)) * (psi[k - 2] - 8.0 * psi[k - 1] + 8.0 * psi[k + 1] - psi[k + 2]);
        worst = std::max(worst, norm(kI * dpsi - h(grid[k]) * psi[k]));
    }
    return worst;
}

} // namespace sta::ctrlh
