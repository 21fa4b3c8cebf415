#pragma once

#include "sta/czmath.hpp"

#include <array>
#include <span>
#include <utility>
#include <vector>

// Inverse-engineered expansion of a harmonic trap for a classical particle.
// SI units throughout: kg, m, s, rad/s.
//
// The canonical equations (q', p') = [[0, 1/m], [-m w^2, 0]] (q, p) are read
// as a Schroedinger-like equation with the non-Hermitian effective Hamiltonian
// H = i [[0, 1/m], [-m w^2, 0]]. Its generalized invariant
//   I = [[b, c], [-a, -b]],  a = m (w0/rho^2 + rho'^2/w0),  b = -rho rho'/w0,
//   c = rho^2 / (w0 m)
// has eigenvalues -+i when rho solves the Ermakov equation
//   rho'' + w^2 rho = w0^2 / rho^3.
namespace sta::ermakov {

struct ExpansionSpec {
    double omega0 = 0.0; // rad/s
    double omegaf = 0.0; // rad/s
    double tf = 0.0;     // s
    double mass = 0.0;   // kg
    double q0 = 0.0;     // m
    double v0 = 0.0;     // m/s

    // Throws Error unless omega0, omegaf, tf, mass are positive.
    void validate() const;
};

// 2pi x 250 Hz -> 2pi x 2.5 Hz in 25 ms, Rb-87 mass, q0 = 1 um, v0 = 0.
ExpansionSpec reference_expansion_spec();

inline constexpr std::size_t kPhaseQuadratureIntervals = 2000;

class ErmakovPlan {
public:
    explicit ErmakovPlan(const ExpansionSpec& spec);

    const ExpansionSpec& spec() const { return spec_; }

    // Coefficients of rho in reduced time s = t / tf, and in physical time t.
    const std::array<double, 6>& reduced_coefficients() const { return reduced_; }
    std::array<double, 6> coefficients() const;

    double rho_final() const { return rho_f_; }

    // rho and its derivatives. Outside [0, tf] the trap is held fixed, so rho
    // is 1 before the ramp and rho_f after it.
    double rho(double t) const;
    double rho_dot(double t) const;
    double rho_ddot(double t) const;

    // w^2(t) = w0^2 / rho^4 - rho'' / rho; w0^2 before and wf^2 after the ramp.
    double omega_sq(double t) const;

    // Smallest w^2 on a 10^4-point grid over [0, tf]; negative means the
    // trap is transiently inverted.
    double min_omega_sq() const { return min_omega_sq_; }
    bool trap_inverted() const { return min_omega_sq_ < 0.0; }

    // Max violation of the six boundary conditions on rho.
    double boundary_residual() const;

    // |rho'' + w^2 rho - w0^2 / rho^3|
    double ermakov_residual(double t) const;

    // Amplitude and initial phase from (q0, v0): q(0) = R cos(theta0),
    // v(0) = -w0 R sin(theta0).
    double amplitude() const { return amplitude_; }
    double theta0() const { return theta0_; }

private:
    ExpansionSpec spec_;
    std::array<double, 6> reduced_{};
    double rho_f_ = 1.0;
    double min_omega_sq_ = 0.0;
    double amplitude_ = 0.0;
    double theta0_ = 0.0;
};

// Solves the boundary-value system for the quintic rho and evaluates w^2.
ErmakovPlan plan_expansion(const ExpansionSpec& spec);

struct InvariantMatrix {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    ComplexMat2 matrix() const { return {b, c, -a, -b}; }
    // b^2 - a c, identically -1.
    double det_identity() const { return b * b - a * c; }
};

InvariantMatrix invariant_at(const ErmakovPlan& plan, double t);

// Analytic time derivatives of a, b, c.
InvariantMatrix invariant_derivative(const ErmakovPlan& plan, double t);

// i [[0, 1/m], [-m w^2, 0]]
ComplexMat2 effective_hamiltonian(double mass, double omega_sq);

// || dI/dt - i [I, H] ||_F / ||I||_F with H built from omega_sq_scale * w^2(t),
// evaluated in balanced coordinates (q in units of 1/sqrt(m w0)). Units 1/s.
double invariance_residual(const ErmakovPlan& plan, double t, double omega_sq_scale = 1.0);

// w0 * int_0^t dt' / rho^2, composite Simpson with kPhaseQuadratureIntervals
// intervals over the ramp; extended linearly outside [0, tf].
double phase_integral(const ErmakovPlan& plan, double t);

// theta(t) = phase_integral(t) + theta0
double theta(const ErmakovPlan& plan, double t);

// alpha_+- = +-w0 int dt'/rho^2 + i ln sqrt(c(t)/c(0))
std::pair<cplx, cplx> lr_phases(const ErmakovPlan& plan, double t);

struct PhaseSpaceTrajectory {
    std::vector<double> t;
    std::vector<double> q;
    std::vector<double> p;
};

// q = R rho cos(theta), p = -(m w0 / rho) R sin(theta) + m rho' R cos(theta).
// Throws InconsistentInitialConditions if q0 = v0 = 0.
PhaseSpaceTrajectory trajectory_closed_form(const ErmakovPlan& plan, std::span<const double> grid);

// Integrates q' = p/m, p' = -m w^2(t) q with RK4 from (q, p) at t0 to t1.
std::pair<double, double> hamilton_flow(const ErmakovPlan& plan, double q, double p, double t0, double t1,
                                        std::size_t n_steps);

// RK4 on the canonical equations, starting from (q0, m v0) at t = 0 and
// stepping grid point to grid point in both directions. Grid must be
// strictly increasing. Throws NonFiniteState.
PhaseSpaceTrajectory hamilton_oracle(const ErmakovPlan& plan, std::span<const double> grid);

// p^2/2m + m w^2(t) q^2 / 2
double energy(const ErmakovPlan& plan, double t, double q, double p);

struct EnergyAudit {
    double e0 = 0.0;
    double ef = 0.0;
    double ratio = 0.0;
    double e0_expected = 0.0;    // m w0^2 R^2 / 2
    double ratio_expected = 0.0; // wf / w0
};

// Energies at t = 0 and t = tf from the closed-form trajectory.
EnergyAudit energy_audit(const ErmakovPlan& plan);

} // namespace sta::ermakov
