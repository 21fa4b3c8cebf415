#pragma once

#include "sta/czmath.hpp"
#include "sta/pulse.hpp"

#include <functional>
#include <span>
#include <vector>

// Counterdiabatic (transitionless) driving for the decaying two-level atom
//
//   H_a0 = 1/2 [[-Delta, Omega_R], [Omega_R, Delta - i Gamma]]     (hbar = 1)
//
// with instantaneous eigenstates
//   |chi_+> = sin(alpha/2)|1> + cos(alpha/2)|2>,
//   |chi_-> = cos(alpha/2)|1> - sin(alpha/2)|2>,
//   tan(alpha) = Omega_R / (Delta - i Gamma/2),
// and biorthogonal partners |chi^_+-> = conj(|chi_+->) since H_a0 is
// complex-symmetric.
namespace sta::ctrlh {

using pulse::PulseSchedule;
using HamiltonianFn = std::function<ComplexMat2(double)>;

enum class Branch { plus, minus };

struct MixingAngleState {
    cplx alpha;
    double t;
};

// Adiabatic phases of one branch; beta_hat is always conj(beta).
struct PhasePair {
    cplx beta;
    cplx beta_hat;
};

// Phase-rate functions d(xi_+)/dt and d(xi_-)/dt. The phases themselves are
// their integrals from the window start, so xi(t_start) = 0, and
// xi^_n = conj(xi_n) by construction.
struct XiPolicy {
    std::function<cplx(double)> xi_plus_dot;
    std::function<cplx(double)> xi_minus_dot;

    static XiPolicy zero();
};

ComplexMat2 h_a0(const PulseSchedule& s, double t);

// [Omega_R' (Delta - i Gamma/2) - Omega_R (Delta' - i Gamma'/2)] / [(Delta - i Gamma/2)^2 + Omega_R^2]
// Throws ZeroGap if the denominator vanishes.
cplx alpha_dot(const PulseSchedule& s, double t);

// Principal value of arctan(Omega_R / (Delta - i Gamma/2)); pi/2 on exact resonance.
cplx principal_mixing_angle(const PulseSchedule& s, double t);

// alpha on a uniform grid: principal anchor at grid[0], then alpha_dot is
// integrated (Simpson per step) so alpha stays continuous through resonance.
std::vector<MixingAngleState> mixing_angle_trajectory(const PulseSchedule& s, std::span<const double> grid);

// C(t) = i alpha_dot / 2
cplx cd_coupling(const PulseSchedule& s, double t);

// [[0, C], [-C, 0]]
ComplexMat2 h_a1(const PulseSchedule& s, double t);

// H_a0 + H_a1
ComplexMat2 h_a(const PulseSchedule& s, double t);

// H_a with C replaced by i Im C, so the added term is Hermitian.
ComplexMat2 h_a_approx(const PulseSchedule& s, double t);

ComplexVec2 adiabatic_state(Branch b, cplx alpha);
ComplexVec2 adiabatic_dual(Branch b, cplx alpha);

// E_+- = -i Gamma/4 +- K/2 with K = D cos(alpha) + Omega_R sin(alpha),
// D = Delta - i Gamma/2, i.e. the branch of the square root that belongs to
// |chi_+-(alpha)>.
cplx branch_energy(const PulseSchedule& s, Branch b, cplx alpha, double t);

// Biorthogonal basis of H_a0 in the alpha gauge: index 0 is the + branch, 1 is -.
BiorthoBasis adiabatic_basis(const PulseSchedule& s, cplx alpha, double t);

// beta_n(t) = int_{t_start}^t [-E_n + i <n^|d_t n>] dt' at every point of the
// trajectory (the Berry term vanishes identically in the alpha gauge).
std::vector<PhasePair> berry_phases(const PulseSchedule& s, std::span<const MixingAngleState> traj, Branch b);

// beta_n at a single time t, integrating from s.t_start with `steps` intervals.
PhasePair berry_phase(const PulseSchedule& s, Branch b, double t, std::size_t steps = 2000);

// Phase-freedom Hamiltonian with prescribed phase rates at time t.
ComplexMat2 h_xi(const PulseSchedule& s, cplx alpha, cplx xi_plus_dot, cplx xi_minus_dot, double t);
ComplexMat2 h_xi(const PulseSchedule& s, cplx alpha, const XiPolicy& policy, double t);

// Rates xi_n' = -E_n + i <n^|d_t n> that make h_xi coincide with h_a.
std::pair<cplx, cplx> canonical_xi_rates(const PulseSchedule& s, cplx alpha, double t);

struct EigvecDerivative {
    BiorthoBasis basis;                 // eigensystem_2x2 at t
    std::array<ComplexVec2, 2> d_right; // d/dt of the right vectors, per branch of `basis`
};

// Central difference of eigenvectors at t +- h after matching branches by
// eigenvalue and rotating each so that <n^(t)|n(t +- h)> is real-positive.
// Throws DegenerateSpectrum.
EigvecDerivative numeric_eigvec_derivative(const HamiltonianFn& hfun, double t, double h = 1e-4);

// i Sum_n [ |d_t n><n^| - <n^|d_t n> |n><n^| ] from numeric_eigvec_derivative.
ComplexMat2 h1_general(const HamiltonianFn& hfun, double t, double h = 1e-4);

// max over interior grid points of || i d_t psi - H psi || for
// psi = exp(i beta_b) |chi_b>, with d_t psi from a fourth-order central
// difference on the uniform grid. Vanishes (to discretization error) when
// `h` is the transitionless Hamiltonian.
double transitionless_residual(const PulseSchedule& s, Branch b, std::span<const double> grid,
                               const HamiltonianFn& h);

} // namespace sta::ctrlh
