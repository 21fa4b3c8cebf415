#include "sta/prop.hpp"

#include "sta/errors.hpp"

#include <cmath>
#include <sstream>

namespace sta::prop {

namespace {

bool finite(const ComplexVec2& v)
{
    return std::isfinite(v.c1.real()) && std::isfinite(v.c1.imag()) && std::isfinite(v.c2.real()) &&
           std::isfinite(v.c2.imag());
}

void check_grid(std::span<const double> grid)
{
    if (grid.empty())
        throw Error("propagate: empty grid");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw Error("propagate: grid must be strictly increasing");
}

// One RK4 step of d(psi)/dt = -i H(t) psi, H sampled at t, t + dt/2, t + dt.
ComplexVec2 rk4_step(const ComplexMat2& h0, const ComplexMat2& hm, const ComplexMat2& h1, const ComplexVec2& y,
                     double dt)
{
    const cplx f = -kI;
    const ComplexVec2 k1 = f * (h0 * y);
    const ComplexVec2 k2 = f * (hm * (y + (0.5 * dt) * k1));
    const ComplexVec2 k3 = f * (hm * (y + (0.5 * dt) * k2));
    const ComplexVec2 k4 = f * (h1 * (y + dt * k3));
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

[[noreturn]] void throw_non_finite(double t)
{
    std::ostringstream msg;
    msg << "propagate: non-finite state at t = " << t;
    throw NonFiniteState(msg.str());
}

StateTrajectory run(const HamiltonianFn& h, const ComplexVec2& psi0, const ComplexVec2* psihat0,
                    std::span<const double> grid)
{
    check_grid(grid);
    StateTrajectory out;
    out.grid.assign(grid.begin(), grid.end());
    out.states.reserve(grid.size());
    out.states.push_back(psi0);
    if (psihat0 != nullptr) {
        out.adjoint_states.reserve(grid.size());
        out.adjoint_states.push_back(*psihat0);
    }

    ComplexMat2 h_left = h(grid[0]);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double t0 = grid[k - 1];
        const double dt = grid[k] - t0;
        const ComplexMat2 h_mid = h(t0 + 0.5 * dt);
        const ComplexMat2 h_right = h(grid[k]);
        const ComplexVec2 next = rk4_step(h_left, h_mid, h_right, out.states.back(), dt);
        if (!finite(next))
            throw_non_finite(grid[k]);
        out.states.push_back(next);
        if (psihat0 != nullptr) {
            const ComplexVec2 hat =
                rk4_step(h_left.adjoint(), h_mid.adjoint(), h_right.adjoint(), out.adjoint_states.back(), dt);
            if (!finite(hat))
                throw_non_finite(grid[k]);
            out.adjoint_states.push_back(hat);
        }
        h_left = h_right;
    }
    return out;
}

} // namespace

std::vector<double> uniform_grid(double t0, double t1, std::size_t n_steps)
{
    if (n_steps == 0)
        throw Error("uniform_grid: need at least one step");
    std::vector<double> g(n_steps + 1);
    const double dt = (t1 - t0) / static_cast<double>(n_steps);
    for (std::size_t k = 0; k <= n_steps; ++k)
        g[k] = t0 + dt * static_cast<double>(k);
    g.back() = t1;
    return g;
}

std::vector<double> grid_with_step(double t0, double t1, double dt)
{
    if (!(dt > 0.0) || !(t1 > t0))
        throw Error("grid_with_step: need dt > 0 and t1 > t0");
    const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
    return uniform_grid(t0, t1, std::max<std::size_t>(n, 1));
}

StateTrajectory propagate(const HamiltonianFn& h, const ComplexVec2& psi0, std::span<const double> grid)
{
    return run(h, psi0, nullptr, grid);
}

StateTrajectory propagate_pair(const HamiltonianFn& h, const ComplexVec2& psi0, const ComplexVec2& psihat0,
                               std::span<const double> grid)
{
    if (std::abs(inner(psihat0, psi0) - 1.0) > 1e-9)
        throw Error("propagate_pair: initial pair must satisfy <psi^|psi> = 1");
    return run(h, psi0, &psihat0, grid);
}

std::vector<std::array<cplx, 2>> branch_projection(const StateTrajectory& traj, std::span<const BiorthoBasis> bases)
{
    if (bases.size() != traj.size())
        throw Error("branch_projection: basis count does not match the trajectory grid");
    std::vector<std::array<cplx, 2>> out(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k)
        for (int n = 0; n < 2; ++n)
            out[k][n] = inner(bases[k].left[n], traj.states[k]);
    return out;
}

double overlap_drift(const StateTrajectory& traj)
{
    if (!traj.has_adjoint())
        throw Error("overlap_drift: trajectory has no adjoint states");
    const cplx first = traj.biorth_overlap(0);
    double worst = 0.0;
    for (std::size_t k = 1; k < traj.size(); ++k)
        worst = std::max(worst, std::abs(traj.biorth_overlap(k) - first));
    return worst;
}

double convergence_order(const HamiltonianFn& h, const ComplexVec2& psi0, double t0, double t1,
                         std::size_t n_steps)
{
    auto final_state = [&](std::size_t n) {
        const auto g = uniform_grid(t0, t1, n);
        return propagate(h, psi0, g).states.back();
    };
    const ComplexVec2 reference = final_state(8 * n_steps);
    const double e1 = norm(final_state(n_steps) - reference);
    const double e2 = norm(final_state(2 * n_steps) - reference);
    return std::log2(e1 / e2);
}

} // namespace sta::prop
