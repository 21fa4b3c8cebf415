#include "sta/ctrlh.hpp"
#include "sta/errors.hpp"
#include "sta/ermakov.hpp"
#include "sta/prop.hpp"
#include "sta/pulse.hpp"
#include "sta/shell.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace sta;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

py::array_t<cplx> to_numpy(const ComplexMat2& m)
{
    py::array_t<cplx> out({2, 2});
    auto r = out.mutable_unchecked<2>();
    r(0, 0) = m.m11;
    r(0, 1) = m.m12;
    r(1, 0) = m.m21;
    r(1, 1) = m.m22;
    return out;
}

ComplexMat2 to_mat(const ComplexArray& a)
{
    if (a.ndim() != 2 || a.shape(0) != 2 || a.shape(1) != 2)
        throw py::value_error("expected a 2x2 matrix");
    auto r = a.unchecked<2>();
    return {r(0, 0), r(0, 1), r(1, 0), r(1, 1)};
}

py::array_t<cplx> to_numpy(const ComplexVec2& v)
{
    py::array_t<cplx> out(2);
    auto r = out.mutable_unchecked<1>();
    r(0) = v.c1;
    r(1) = v.c2;
    return out;
}

ComplexVec2 to_vec(const ComplexArray& a)
{
    if (a.ndim() != 1 || a.shape(0) != 2)
        throw py::value_error("expected a length-2 vector");
    return {a.at(0), a.at(1)};
}

std::span<const double> as_span(const RealArray& a)
{
    if (a.ndim() != 1)
        throw py::value_error("expected a 1-d array");
    return {a.data(), static_cast<std::size_t>(a.shape(0))};
}

// Columns are the vectors.
py::array_t<cplx> columns(const std::array<ComplexVec2, 2>& v)
{
    py::array_t<cplx> out({2, 2});
    auto r = out.mutable_unchecked<2>();
    for (int n = 0; n < 2; ++n) {
        r(0, n) = v[n].c1;
        r(1, n) = v[n].c2;
    }
    return out;
}

py::array_t<cplx> states_array(const std::vector<ComplexVec2>& states)
{
    py::array_t<cplx> out({static_cast<py::ssize_t>(states.size()), py::ssize_t{2}});
    auto r = out.mutable_unchecked<2>();
    for (std::size_t k = 0; k < states.size(); ++k) {
        r(k, 0) = states[k].c1;
        r(k, 1) = states[k].c2;
    }
    return out;
}

template <class F>
auto map_grid(const RealArray& t, F&& f)
{
    using R = decltype(f(0.0));
    const auto g = as_span(t);
    py::array_t<R> out(static_cast<py::ssize_t>(g.size()));
    auto r = out.template mutable_unchecked<1>();
    for (std::size_t k = 0; k < g.size(); ++k)
        r(k) = f(g[k]);
    return out;
}

prop::HamiltonianFn atom_hamiltonian(const pulse::PulseSchedule& s, const std::string& which)
{
    if (which == "bare")
        return [s](double t) { return ctrlh::h_a0(s, t); };
    if (which == "cd")
        return [s](double t) { return ctrlh::h_a(s, t); };
    if (which == "cd-approx")
        return [s](double t) { return ctrlh::h_a_approx(s, t); };
    throw py::value_error("hamiltonian must be 'bare', 'cd' or 'cd-approx'");
}

ctrlh::Branch to_branch(const std::string& b)
{
    if (b == "+" || b == "plus")
        return ctrlh::Branch::plus;
    if (b == "-" || b == "minus")
        return ctrlh::Branch::minus;
    throw py::value_error("branch must be '+' or '-'");
}

} // namespace

PYBIND11_MODULE(_sta, m)
{
    m.doc() = "Shortcuts to adiabaticity for non-Hermitian two-level systems";

    auto base = py::register_exception<Error>(m, "StaError", PyExc_RuntimeError);
    py::register_exception<DegenerateSpectrum>(m, "DegenerateSpectrum", base.ptr());
    py::register_exception<ZeroGap>(m, "ZeroGap", base.ptr());
    py::register_exception<NonFiniteState>(m, "NonFiniteState", base.ptr());
    py::register_exception<InconsistentInitialConditions>(m, "InconsistentInitialConditions", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    // Linear algebra.
    m.def(
        "eigensystem", [](const ComplexArray& h, double tol) {
            const auto b = eigensystem_2x2(to_mat(h), tol);
            py::array_t<cplx> ev(2);
            ev.mutable_at(0) = b.eigenvalues[0];
            ev.mutable_at(1) = b.eigenvalues[1];
            return py::make_tuple(ev, columns(b.right), columns(b.left));
        },
        py::arg("h"), py::arg("tol") = kDefaultEigTol,
        "Biorthogonal eigensystem of a 2x2 matrix: (eigenvalues, right, left), vectors as columns.");

    // Pulses.
    py::class_<pulse::ChirpedGaussianParams>(m, "ChirpedGaussianParams")
        .def(py::init([](double omega0_rabi, double a_width, double b_chirp, double gamma) {
                 return pulse::ChirpedGaussianParams{omega0_rabi, a_width, b_chirp, gamma};
             }),
             py::arg("omega0_rabi"), py::arg("a_width"), py::arg("b_chirp"), py::arg("gamma"))
        .def_readwrite("omega0_rabi", &pulse::ChirpedGaussianParams::omega0_rabi)
        .def_readwrite("a_width", &pulse::ChirpedGaussianParams::a_width)
        .def_readwrite("b_chirp", &pulse::ChirpedGaussianParams::b_chirp)
        .def_readwrite("gamma", &pulse::ChirpedGaussianParams::gamma);
    m.def("reference_rap_params", &pulse::reference_rap_params);

    py::class_<pulse::PulseSchedule>(m, "PulseSchedule")
        .def_readonly("t_start", &pulse::PulseSchedule::t_start)
        .def_readonly("t_end", &pulse::PulseSchedule::t_end)
        .def("delta", [](const pulse::PulseSchedule& s, const RealArray& t) { return map_grid(t, s.delta); })
        .def("rabi", [](const pulse::PulseSchedule& s, const RealArray& t) { return map_grid(t, s.rabi); })
        .def("gamma", [](const pulse::PulseSchedule& s, const RealArray& t) { return map_grid(t, s.gamma); });
    m.def("chirped_gaussian", &pulse::chirped_gaussian, py::arg("params"),
          py::arg("window_factor") = pulse::kDefaultWindowFactor);
    m.def("constant_schedule", &pulse::constant_schedule, py::arg("delta"), py::arg("rabi"), py::arg("gamma"),
          py::arg("t_start"), py::arg("t_end"));
    m.def("adiabaticity_ratio", [](const pulse::PulseSchedule& s, const RealArray& t) {
        return map_grid(t, [&](double x) { return pulse::adiabaticity_ratio(s, x); });
    });

    // Control Hamiltonians.
    m.def("h_a0", [](const pulse::PulseSchedule& s, double t) { return to_numpy(ctrlh::h_a0(s, t)); });
    m.def("h_a1", [](const pulse::PulseSchedule& s, double t) { return to_numpy(ctrlh::h_a1(s, t)); });
    m.def("h_a", [](const pulse::PulseSchedule& s, double t) { return to_numpy(ctrlh::h_a(s, t)); });
    m.def("h_a_approx", [](const pulse::PulseSchedule& s, double t) { return to_numpy(ctrlh::h_a_approx(s, t)); });
    m.def("cd_coupling", [](const pulse::PulseSchedule& s, const RealArray& t) {
        return map_grid(t, [&](double x) { return ctrlh::cd_coupling(s, x); });
    });
    m.def("mixing_angle", [](const pulse::PulseSchedule& s, const RealArray& t) {
        const auto traj = ctrlh::mixing_angle_trajectory(s, as_span(t));
        py::array_t<cplx> out(static_cast<py::ssize_t>(traj.size()));
        for (std::size_t k = 0; k < traj.size(); ++k)
            out.mutable_at(k) = traj[k].alpha;
        return out;
    });
    m.def("adiabatic_state", [](const std::string& b, cplx alpha) {
        return to_numpy(ctrlh::adiabatic_state(to_branch(b), alpha));
    });
    m.def("adiabatic_dual", [](const std::string& b, cplx alpha) {
        return to_numpy(ctrlh::adiabatic_dual(to_branch(b), alpha));
    });
    m.def(
        "transitionless_residual",
        [](const pulse::PulseSchedule& s, const std::string& b, const RealArray& grid, const std::string& which) {
            return ctrlh::transitionless_residual(s, to_branch(b), as_span(grid), atom_hamiltonian(s, which));
        },
        py::arg("schedule"), py::arg("branch"), py::arg("grid"), py::arg("hamiltonian") = "cd");

    // Propagation.
    m.def("uniform_grid", [](double t0, double t1, std::size_t n) {
        const auto g = prop::uniform_grid(t0, t1, n);
        return py::array_t<double>(static_cast<py::ssize_t>(g.size()), g.data());
    });
    m.def("grid_with_step", [](double t0, double t1, double dt) {
        const auto g = prop::grid_with_step(t0, t1, dt);
        return py::array_t<double>(static_cast<py::ssize_t>(g.size()), g.data());
    });
    m.def(
        "propagate",
        [](const pulse::PulseSchedule& s, const ComplexArray& psi0, const RealArray& grid, const std::string& which) {
            const auto traj = prop::propagate(atom_hamiltonian(s, which), to_vec(psi0), as_span(grid));
            return states_array(traj.states);
        },
        py::arg("schedule"), py::arg("psi0"), py::arg("grid"), py::arg("hamiltonian") = "bare",
        "RK4 states, shape (len(grid), 2).");
    m.def(
        "propagate_pair",
        [](const pulse::PulseSchedule& s, const ComplexArray& psi0, const ComplexArray& psihat0,
           const RealArray& grid, const std::string& which) {
            const auto traj =
                prop::propagate_pair(atom_hamiltonian(s, which), to_vec(psi0), to_vec(psihat0), as_span(grid));
            return py::make_tuple(states_array(traj.states), states_array(traj.adjoint_states));
        },
        py::arg("schedule"), py::arg("psi0"), py::arg("psihat0"), py::arg("grid"), py::arg("hamiltonian") = "bare");

    // Trap expansion.
    py::class_<ermakov::ExpansionSpec>(m, "ExpansionSpec")
        .def(py::init([](double omega0, double omegaf, double tf, double mass, double q0, double v0) {
                 return ermakov::ExpansionSpec{omega0, omegaf, tf, mass, q0, v0};
             }),
             py::arg("omega0"), py::arg("omegaf"), py::arg("tf"), py::arg("mass"), py::arg("q0"),
             py::arg("v0") = 0.0)
        .def_readwrite("omega0", &ermakov::ExpansionSpec::omega0)
        .def_readwrite("omegaf", &ermakov::ExpansionSpec::omegaf)
        .def_readwrite("tf", &ermakov::ExpansionSpec::tf)
        .def_readwrite("mass", &ermakov::ExpansionSpec::mass)
        .def_readwrite("q0", &ermakov::ExpansionSpec::q0)
        .def_readwrite("v0", &ermakov::ExpansionSpec::v0);
    m.def("reference_expansion_spec", &ermakov::reference_expansion_spec);

    py::class_<ermakov::ErmakovPlan>(m, "ErmakovPlan")
        .def(py::init<const ermakov::ExpansionSpec&>())
        .def_property_readonly("spec", &ermakov::ErmakovPlan::spec)
        .def_property_readonly("coefficients", &ermakov::ErmakovPlan::coefficients)
        .def_property_readonly("reduced_coefficients", &ermakov::ErmakovPlan::reduced_coefficients)
        .def_property_readonly("rho_final", &ermakov::ErmakovPlan::rho_final)
        .def_property_readonly("min_omega_sq", &ermakov::ErmakovPlan::min_omega_sq)
        .def_property_readonly("trap_inverted", &ermakov::ErmakovPlan::trap_inverted)
        .def_property_readonly("amplitude", &ermakov::ErmakovPlan::amplitude)
        .def_property_readonly("theta0", &ermakov::ErmakovPlan::theta0)
        .def("boundary_residual", &ermakov::ErmakovPlan::boundary_residual)
        .def("rho", [](const ermakov::ErmakovPlan& p, const RealArray& t) {
            return map_grid(t, [&](double x) { return p.rho(x); });
        })
        .def("omega_sq", [](const ermakov::ErmakovPlan& p, const RealArray& t) {
            return map_grid(t, [&](double x) { return p.omega_sq(x); });
        })
        .def("ermakov_residual", [](const ermakov::ErmakovPlan& p, const RealArray& t) {
            return map_grid(t, [&](double x) { return p.ermakov_residual(x); });
        })
        .def("invariant", [](const ermakov::ErmakovPlan& p, double t) {
            const auto inv = ermakov::invariant_at(p, t);
            return py::make_tuple(inv.a, inv.b, inv.c);
        })
        .def("invariance_residual", [](const ermakov::ErmakovPlan& p, double t, double scale) {
            return ermakov::invariance_residual(p, t, scale);
        }, py::arg("t"), py::arg("omega_sq_scale") = 1.0)
        .def("lr_phases", [](const ermakov::ErmakovPlan& p, double t) { return ermakov::lr_phases(p, t); });
    m.def("plan_expansion", &ermakov::plan_expansion);

    auto trajectory = [](const ermakov::PhaseSpaceTrajectory& tr) {
        return py::make_tuple(py::array_t<double>(static_cast<py::ssize_t>(tr.q.size()), tr.q.data()),
                              py::array_t<double>(static_cast<py::ssize_t>(tr.p.size()), tr.p.data()));
    };
    m.def("trajectory_closed_form", [trajectory](const ermakov::ErmakovPlan& p, const RealArray& grid) {
        return trajectory(ermakov::trajectory_closed_form(p, as_span(grid)));
    }, "(q, p) arrays.");
    m.def("hamilton_oracle", [trajectory](const ermakov::ErmakovPlan& p, const RealArray& grid) {
        return trajectory(ermakov::hamilton_oracle(p, as_span(grid)));
    }, "(q, p) arrays from RK4 on the canonical equations.");
    m.def("energy", &ermakov::energy, py::arg("plan"), py::arg("t"), py::arg("q"), py::arg("p"));

    py::class_<ermakov::EnergyAudit>(m, "EnergyAudit")
        .def_readonly("e0", &ermakov::EnergyAudit::e0)
        .def_readonly("ef", &ermakov::EnergyAudit::ef)
        .def_readonly("ratio", &ermakov::EnergyAudit::ratio)
        .def_readonly("e0_expected", &ermakov::EnergyAudit::e0_expected)
        .def_readonly("ratio_expected", &ermakov::EnergyAudit::ratio_expected);
    m.def("energy_audit", &ermakov::energy_audit);

    // Scenario driver, same semantics as the command-line tool.
    m.def(
        "run_scenario",
        [](const std::string& scenario, const std::string& config, std::optional<double> dt,
           std::optional<double> window_factor) {
            auto cfg = shell::parse_config(config);
            cfg.scenario = shell::parse_scenario(scenario);
            cfg.output.clear();
            if (dt)
                cfg.dt = *dt;
            if (window_factor)
                cfg.window_factor = *window_factor;
            cfg.validate();
            std::ostringstream out, err;
            const int code = shell::run(cfg, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("scenario"), py::arg("config") = "{}", py::arg("dt") = py::none(),
        py::arg("window_factor") = py::none(), "Returns (exit_code, stdout_text, stderr_text).");
    m.def(
        "run_check",
        [](const std::string& config) {
            const auto report = shell::run_check(shell::parse_config(config));
            py::list items;
            for (const auto& i : report.items) {
                py::dict d;
                d["name"] = i.name;
                d["measured"] = i.measured;
                d["threshold"] = i.threshold;
                d["upper"] = i.upper ? py::cast(*i.upper) : py::none();
                d["passed"] = i.passed;
                items.append(d);
            }
            return py::make_tuple(report.all_passed(), items);
        },
        py::arg("config") = "{}");
}
