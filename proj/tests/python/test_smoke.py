import csv
import io
import math

import numpy as np
import pytest

import sta


def test_eigensystem_biorthonormal():
    rng = np.random.default_rng(3)
    for _ in range(20):
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        ev, right, left = sta.eigensystem(m)
        np.testing.assert_allclose(left.conj().T @ right, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(right @ np.diag(ev) @ left.conj().T, m, atol=1e-12)
        np.testing.assert_allclose(np.sort_complex(ev), np.sort_complex(np.linalg.eigvals(m)), atol=1e-12)


def test_degenerate_spectrum_raises():
    with pytest.raises(sta.DegenerateSpectrum):
        sta.eigensystem(np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex))
    with pytest.raises(sta.StaError):
        sta.eigensystem(np.eye(2, dtype=complex))


def test_counterdiabatic_coupling_at_centre():
    s = sta.chirped_gaussian(sta.reference_rap_params())
    c = sta.cd_coupling(s, np.array([0.0]))[0]
    assert c.real == 0.0
    assert c.imag == pytest.approx(0.015709, rel=1e-4)
    np.testing.assert_allclose(sta.h_a(s, 0.3), sta.h_a0(s, 0.3) + sta.h_a1(s, 0.3), atol=1e-15)


def test_transitionless_propagation():
    s = sta.chirped_gaussian(sta.reference_rap_params())
    grid = sta.grid_with_step(s.t_start, s.t_end, 2e-3)
    alpha = sta.mixing_angle(s, grid)
    psi = sta.propagate(s, sta.adiabatic_state("+", alpha[0]), grid, hamiltonian="cd")
    assert psi.shape == (len(grid), 2)
    c_minus = np.array([np.vdot(sta.adiabatic_dual("-", a), p) for a, p in zip(alpha, psi)])
    assert np.abs(c_minus).max() < 1e-6
    assert sta.transitionless_residual(s, "+", grid) < 1e-6

    bare = sta.propagate(s, np.array([0, 1], dtype=complex), grid)
    assert 0.3 < abs(bare[-1, 0]) ** 2 < 0.8


def test_overlap_pair():
    s = sta.chirped_gaussian(sta.reference_rap_params())
    grid = sta.grid_with_step(s.t_start, s.t_end, 1e-2)
    a0 = sta.mixing_angle(s, grid[:1])[0]
    psi, psihat = sta.propagate_pair(s, sta.adiabatic_state("+", a0), sta.adiabatic_dual("+", a0), grid)
    overlap = np.einsum("ki,ki->k", psihat.conj(), psi)
    assert np.abs(overlap - 1).max() < 1e-8


def test_expansion_plan_and_energy():
    plan = sta.plan_expansion(sta.reference_expansion_spec())
    tf = plan.spec.tf
    assert plan.rho(np.array([tf]))[0] == pytest.approx(10.0, abs=1e-10)
    assert plan.boundary_residual() < 1e-10
    a, b, c = plan.invariant(tf / 3)
    assert b * b - a * c == pytest.approx(-1.0, abs=1e-12)
    audit = sta.energy_audit(plan)
    assert audit.ratio == pytest.approx(0.01, rel=1e-6)

    grid = sta.uniform_grid(0.0, tf, 5000)
    q, p = sta.trajectory_closed_form(plan, grid)
    qo, po = sta.hamilton_oracle(plan, grid)
    assert np.abs(q - qo).max() / np.abs(q).max() < 1e-6
    assert q[0] == pytest.approx(1e-6)

    bad = sta.reference_expansion_spec()
    bad.q0 = 0.0
    with pytest.raises(sta.InconsistentInitialConditions):
        sta.trajectory_closed_form(sta.plan_expansion(bad), grid)


def test_run_scenario_csv():
    code, out, _ = sta.run_scenario("cd-terms", dt=0.05)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["t_ns", "ReC_rad_per_ns", "ImC_rad_per_ns", "adiab_ratio"]
    w = 5.0 / math.sqrt((2 * math.pi) ** 2 * 0.01)
    assert float(rows[0]["t_ns"]) == pytest.approx(-w, rel=1e-14)
    assert sta.run_scenario("cd-terms", dt=0.05)[1] == out

    with pytest.raises(sta.ConfigError, match="gama_mhz"):
        sta.run_scenario("rap", config='{"atom": {"gama_mhz": 2}}')


def test_run_check():
    ok, items = sta.run_check()
    assert ok
    assert all(i["passed"] for i in items)
