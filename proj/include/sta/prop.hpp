#pragma once

#include "sta/czmath.hpp"

#include <functional>
#include <span>
#include <vector>

namespace sta::prop {

using HamiltonianFn = std::function<ComplexMat2(double)>;

// Propagated states on the integration grid. adjoint_states is empty unless
// the trajectory came from propagate_pair.
struct StateTrajectory {
    std::vector<double> grid;
    std::vector<ComplexVec2> states;
    std::vector<ComplexVec2> adjoint_states;

    std::size_t size() const { return grid.size(); }
    double p1(std::size_t k) const { return states[k].population(1); }
    double p2(std::size_t k) const { return states[k].population(2); }
    double norm2(std::size_t k) const { return states[k].norm2(); }
    bool has_adjoint() const { return !adjoint_states.empty(); }
    // <psi^(t_k)|psi(t_k)>; requires adjoint states.
    cplx biorth_overlap(std::size_t k) const { return inner(adjoint_states[k], states[k]); }
};

// n_steps + 1 equally spaced points from t0 to t1 (endpoint exact).
std::vector<double> uniform_grid(double t0, double t1, std::size_t n_steps);

// Uniform grid whose spacing is the largest value <= dt that divides [t0, t1].
std::vector<double> grid_with_step(double t0, double t1, double dt);

// Classical fixed-step RK4 for d(psi)/dt = -i H(t) psi (hbar = 1).
// Throws NonFiniteState as soon as a component stops being finite.
StateTrajectory propagate(const HamiltonianFn& h, const ComplexVec2& psi0, std::span<const double> grid);

// Co-propagates psi under H and psi^ under H^dagger; requires <psi^0|psi0> = 1.
StateTrajectory propagate_pair(const HamiltonianFn& h, const ComplexVec2& psi0, const ComplexVec2& psihat0,
                               std::span<const double> grid);

// c_n(t_k) = <n^(t_k)|psi(t_k)> for each basis entry; bases[k] must belong to traj.grid[k].
std::vector<std::array<cplx, 2>> branch_projection(const StateTrajectory& traj, std::span<const BiorthoBasis> bases);

// max_k |<psi^(t_k)|psi(t_k)> - <psi^(t_0)|psi(t_0)>|
double overlap_drift(const StateTrajectory& traj);

// Empirical order log2(e(dt)/e(dt/2)), with errors of the final state against
// an RK4 reference at dt/8; dt = (t1 - t0) / n_steps.
double convergence_order(const HamiltonianFn& h, const ComplexVec2& psi0, double t0, double t1,
                         std::size_t n_steps);

} // namespace sta::prop
