#include "sta/ermakov.hpp"

#include "sta/errors.hpp"
#include "sta/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <tuple>

namespace sta::ermakov {

namespace {

// Value, first and second derivative of sum c_n s^n with respect to s.
std::array<double, 3> poly_eval(const std::array<double, 6>& c, double s)
{
    double v = 0.0, d1 = 0.0, d2 = 0.0;
    for (int n = 5; n >= 0; --n) {
        d2 = d2 * s + 2.0 * d1;
        d1 = d1 * s + v;
        v = v * s + c[n];
    }
    return {v, d1, d2};
}

bool in_ramp(const ExpansionSpec& sp, double t) { return t >= 0.0 && t <= sp.tf; }

} // namespace

void ExpansionSpec::validate() const
{
    if (!(omega0 > 0.0) || !(omegaf > 0.0) || !(tf > 0.0) || !(mass > 0.0))
        throw Error("ExpansionSpec: omega0, omegaf, tf and mass must be positive");
    if (!std::isfinite(q0) || !std::isfinite(v0))
        throw Error("ExpansionSpec: initial conditions must be finite");
}

ExpansionSpec reference_expansion_spec()
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    return {two_pi * 250.0, two_pi * 2.5, 25e-3, 1.44e-25, 1e-6, 0.0};
}

ErmakovPlan::ErmakovPlan(const ExpansionSpec& spec) : spec_(spec)
{
    spec_.validate();
    rho_f_ = std::sqrt(spec_.omega0 / spec_.omegaf);

    // Rows: rho(0), rho'(0), rho''(0), rho(1), rho'(1), rho''(1) in reduced time.
    Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 2) = 2.0;
    for (int n = 0; n < 6; ++n) {
        m(3, n) = 1.0;
        m(4, n) = n;
        m(5, n) = n * (n - 1);
    }
    Eigen::Matrix<double, 6, 1> rhs;
    rhs << 1.0, 0.0, 0.0, rho_f_, 0.0, 0.0;
    const Eigen::Matrix<double, 6, 1> sol = m.fullPivLu().solve(rhs);
    for (int n = 0; n < 6; ++n)
        reduced_[n] = sol(n);

    constexpr int samples = 10000;
    min_omega_sq_ = omega_sq(0.0);
    for (int k = 1; k <= samples; ++k)
        min_omega_sq_ = std::min(min_omega_sq_, omega_sq(spec_.tf * k / samples));

    amplitude_ = std::hypot(spec_.q0, spec_.v0 / spec_.omega0);
    theta0_ = std::atan2(-spec_.v0 / spec_.omega0, spec_.q0);
}

std::array<double, 6> ErmakovPlan::coefficients() const
{
    std::array<double, 6> out{};
    double scale = 1.0;
    for (int n = 0; n < 6; ++n) {
        out[n] = reduced_[n] / scale;
        scale *= spec_.tf;
    }
    return out;
}

double ErmakovPlan::rho(double t) const
{
    if (t <= 0.0)
        return 1.0;
    if (t >= spec_.tf)
        return rho_f_;
    return poly_eval(reduced_, t / spec_.tf)[0];
}

double ErmakovPlan::rho_dot(double t) const
{
    if (!in_ramp(spec_, t))
        return 0.0;
    return poly_eval(reduced_, t / spec_.tf)[1] / spec_.tf;
}

double ErmakovPlan::rho_ddot(double t) const
{
    if (!in_ramp(spec_, t))
        return 0.0;
    return poly_eval(reduced_, t / spec_.tf)[2] / (spec_.tf * spec_.tf);
}

double ErmakovPlan::omega_sq(double t) const
{
    if (t < 0.0)
        return spec_.omega0 * spec_.omega0;
    if (t > spec_.tf)
        return spec_.omegaf * spec_.omegaf;
    const double r = rho(t);
    const double r2 = r * r;
    return spec_.omega0 * spec_.omega0 / (r2 * r2) - rho_ddot(t) / r;
}

double ErmakovPlan::boundary_residual() const
{
    const auto start = poly_eval(reduced_, 0.0);
    const auto end = poly_eval(reduced_, 1.0);
    return std::max({std::abs(start[0] - 1.0), std::abs(start[1]), std::abs(start[2]), std::abs(end[0] - rho_f_),
                     std::abs(end[1]), std::abs(end[2])});
}

double ErmakovPlan::ermakov_residual(double t) const
{
    const double r = rho(t);
    return std::abs(rho_ddot(t) + omega_sq(t) * r - spec_.omega0 * spec_.omega0 / (r * r * r));
}

ErmakovPlan plan_expansion(const ExpansionSpec& spec) { return ErmakovPlan(spec); }

InvariantMatrix invariant_at(const ErmakovPlan& plan, double t)
{
    const auto& sp = plan.spec();
    const double r = plan.rho(t);
    const double rd = plan.rho_dot(t);
    return {sp.mass * (sp.omega0 / (r * r) + rd * rd / sp.omega0), -r * rd / sp.omega0,
            r * r / (sp.omega0 * sp.mass)};
}

InvariantMatrix invariant_derivative(const ErmakovPlan& plan, double t)
{
    const auto& sp = plan.spec();
    const double r = plan.rho(t);
    const double rd = plan.rho_dot(t);
    const double rdd = plan.rho_ddot(t);
    return {sp.mass * (-2.0 * sp.omega0 * rd / (r * r * r) + 2.0 * rd * rdd / sp.omega0),
            -(rd * rd + r * rdd) / sp.omega0, 2.0 * r * rd / (sp.omega0 * sp.mass)};
}

ComplexMat2 effective_hamiltonian(double mass, double omega_sq)
{
    return kI * ComplexMat2{0.0, 1.0 / mass, -mass * omega_sq, 0.0};
}

double invariance_residual(const ErmakovPlan& plan, double t, double omega_sq_scale)
{
    // Raw SI entries span ~45 decades (1/m against m w^2). Conjugating by the
    // constant diag(sqrt(m w0), 1/sqrt(m w0)) leaves the equation intact and
    // brings every entry to order one (order w0 for H).
    const auto& sp = plan.spec();
    const double s2 = sp.mass * sp.omega0;
    const auto balance = [s2](const ComplexMat2& x) { return ComplexMat2{x.m11, x.m12 * s2, x.m21 / s2, x.m22}; };
    const ComplexMat2 inv = balance(invariant_at(plan, t).matrix());
    const ComplexMat2 d_inv = balance(invariant_derivative(plan, t).matrix());
    const ComplexMat2 h = balance(effective_hamiltonian(sp.mass, omega_sq_scale * plan.omega_sq(t)));
    return (d_inv - kI * commutator(inv, h)).frobenius_norm() / inv.frobenius_norm();
}

double phase_integral(const ErmakovPlan& plan, double t)
{
    const auto& sp = plan.spec();
    if (t <= 0.0)
        return sp.omega0 * t;
    const double upper = std::min(t, sp.tf);
    const double ramp = sp.omega0 * quad::simpson(
                                        [&](double x) {
                                            const double r = plan.rho(x);
                                            return 1.0 / (r * r);
                                        },
                                        0.0, upper, kPhaseQuadratureIntervals);
    return t > sp.tf ? ramp + sp.omegaf * (t - sp.tf) : ramp;
}

double theta(const ErmakovPlan& plan, double t) { return phase_integral(plan, t) + plan.theta0(); }

std::pair<cplx, cplx> lr_phases(const ErmakovPlan& plan, double t)
{
    const double phi = phase_integral(plan, t);
    const double c_ratio = invariant_at(plan, t).c / invariant_at(plan, 0.0).c;
    const double imag = std::log(std::sqrt(c_ratio));
    return {{phi, imag}, {-phi, imag}};
}

PhaseSpaceTrajectory trajectory_closed_form(const ErmakovPlan& plan, std::span<const double> grid)
{
    const auto& sp = plan.spec();
    if (sp.q0 == 0.0 && sp.v0 == 0.0)
        throw InconsistentInitialConditions("trajectory_closed_form: q0 = v0 = 0 leaves the phase undefined");
    const double amp = plan.amplitude();
    PhaseSpaceTrajectory out;
    out.t.assign(grid.begin(), grid.end());
    out.q.reserve(grid.size());
    out.p.reserve(grid.size());
    for (double t : grid) {
        const double r = plan.rho(t);
        const double th = theta(plan, t);
        out.q.push_back(amp * r * std::cos(th));
        out.p.push_back(-(sp.mass * sp.omega0 / r) * amp * std::sin(th) +
                        sp.mass * plan.rho_dot(t) * amp * std::cos(th));
    }
    return out;
}

namespace {

std::pair<double, double> rk4_canonical(const ErmakovPlan& plan, double q, double p, double t, double dt)
{
    const double m = plan.spec().mass;
    const double w0 = plan.omega_sq(t);
    const double wm = plan.omega_sq(t + 0.5 * dt);
    const double w1 = plan.omega_sq(t + dt);
    const double kq1 = p / m, kp1 = -m * w0 * q;
    const double q2 = q + 0.5 * dt * kq1, p2 = p + 0.5 * dt * kp1;
    const double kq2 = p2 / m, kp2 = -m * wm * q2;
    const double q3 = q + 0.5 * dt * kq2, p3 = p + 0.5 * dt * kp2;
    const double kq3 = p3 / m, kp3 = -m * wm * q3;
    const double q4 = q + dt * kq3, p4 = p + dt * kp3;
    const double kq4 = p4 / m, kp4 = -m * w1 * q4;
    const double qn = q + dt / 6.0 * (kq1 + 2.0 * kq2 + 2.0 * kq3 + kq4);
    const double pn = p + dt / 6.0 * (kp1 + 2.0 * kp2 + 2.0 * kp3 + kp4);
    if (!std::isfinite(qn) || !std::isfinite(pn))
        throw NonFiniteState("hamilton_oracle: non-finite phase-space point");
    return {qn, pn};
}

} // namespace

std::pair<double, double> hamilton_flow(const ErmakovPlan& plan, double q, double p, double t0, double t1,
                                        std::size_t n_steps)
{
    if (n_steps == 0)
        throw Error("hamilton_flow: need at least one step");
    const double dt = (t1 - t0) / static_cast<double>(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k)
        std::tie(q, p) = rk4_canonical(plan, q, p, t0 + dt * static_cast<double>(k), dt);
    return {q, p};
}

PhaseSpaceTrajectory hamilton_oracle(const ErmakovPlan& plan, std::span<const double> grid)
{
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw Error("hamilton_oracle: grid must be strictly increasing");

    const auto& sp = plan.spec();
    PhaseSpaceTrajectory out;
    out.t.assign(grid.begin(), grid.end());
    out.q.assign(grid.size(), 0.0);
    out.p.assign(grid.size(), 0.0);

    // First grid index with t >= 0.
    std::size_t split = 0;
    while (split < grid.size() && grid[split] < 0.0)
        ++split;

    double q = sp.q0, p = sp.mass * sp.v0, t = 0.0;
    for (std::size_t k = split; k < grid.size(); ++k) {
        if (grid[k] > t)
            std::tie(q, p) = rk4_canonical(plan, q, p, t, grid[k] - t);
        t = grid[k];
        out.q[k] = q;
        out.p[k] = p;
    }
    q = sp.q0, p = sp.mass * sp.v0, t = 0.0;
    for (std::size_t k = split; k-- > 0;) {
        std::tie(q, p) = rk4_canonical(plan, q, p, t, grid[k] - t);
        t = grid[k];
        out.q[k] = q;
        out.p[k] = p;
    }
    return out;
}

double energy(const ErmakovPlan& plan, double t, double q, double p)
{
    const double m = plan.spec().mass;
    return p * p / (2.0 * m) + 0.5 * m * plan.omega_sq(t) * q * q;
}

EnergyAudit energy_audit(const ErmakovPlan& plan)
{
    const auto& sp = plan.spec();
    const double ends[2] = {0.0, sp.tf};
    const auto traj = trajectory_closed_form(plan, ends);
    EnergyAudit out;
    out.e0 = energy(plan, 0.0, traj.q[0], traj.p[0]);
    out.ef = energy(plan, sp.tf, traj.q[1], traj.p[1]);
    out.ratio = out.ef / out.e0;
    out.e0_expected = 0.5 * sp.mass * sp.omega0 * sp.omega0 * plan.amplitude() * plan.amplitude();
    out.ratio_expected = sp.omegaf / sp.omega0;
    return out;
}

} // namespace sta::ermakov
