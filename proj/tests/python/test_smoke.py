"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import inlslab as il


@pytest.fixture(scope="module")
def grid():
    return il.build_grid("radial", d=2, extent=16.0, counts=[512], alpha=1.0)


@pytest.fixture(scope="module")
def params():
    return il.PhysParams(d=2, alpha=1.0, kappa=0.5, gamma=0.0, omega=1.0)


@pytest.fixture(scope="module")
def ground_state(grid, params):
    gs = il.minimize_nehari(params, grid)
    assert gs.converged
    return gs


def gaussian_pair(grid, amp=1.0):
    r = np.asarray(grid.nodes)
    u = amp * np.exp(-(r**2)) + 0j
    return u, 0.6 * u


def test_grid_quadrature(grid):
    w = np.asarray(grid.quad_weights)
    assert w.min() > 0
    vol = il.integrate(grid, np.ones(grid.size))
    assert vol == pytest.approx(np.pi * 16.0**2, rel=1e-12)


def test_invariant_identities(grid, params):
    u, v = gaussian_pair(grid)
    inv = il.invariants(grid, u, v, params)
    assert inv["E"] == pytest.approx(0.5 * inv["K"] - inv["P"], rel=1e-12)
    assert inv["G"] == pytest.approx(inv["K"] - 2.0 * inv["P"], rel=1e-12)
    act = il.action_nehari(grid, u, v, params)
    assert act["A_omega"] == pytest.approx(act["B_omega"] / 3 + act["S"] / 6, rel=1e-12)


def test_ground_state_properties(grid, params, ground_state):
    gs = ground_state
    act = il.action_nehari(grid, gs.phi, gs.psi, params)
    assert abs(act["B_omega"]) < 1e-6 * act["S"]
    r1, r2 = gs.pohozaev_res
    assert r1 < 1e-6
    assert r2 < 3e-3  # h^2-limited at this resolution
    assert gs.C_GN == pytest.approx(il.weinstein(grid, gs.phi, gs.psi, params), rel=1e-12)
    assert il.mountain_pass_level(gs, params) == pytest.approx(gs.d_omega, rel=1e-10)
    phi = np.real(np.asarray(gs.phi))
    assert (np.diff(phi) <= 1e-12).all()  # radially nonincreasing


def test_sharpness_on_a_random_pair(grid, params, ground_state):
    rng = np.random.default_rng(5)
    r = np.asarray(grid.nodes)
    u = rng.uniform(0.2, 1.0) * np.exp(-rng.uniform(0.5, 2.0) * r**2) + 0j
    v = rng.uniform(0.2, 1.0) * np.exp(-rng.uniform(0.5, 2.0) * r**2) + 0j
    w = il.weinstein(grid, u, v, params)
    assert w <= ground_state.C_GN * (1 + 1e-6)


def test_standing_wave_evolution(grid, params, ground_state):
    gs = ground_state
    out = il.evolve(grid, gs.phi, gs.psi, params, dt=2e-4, t_end=0.05, diag_stride=10)
    assert out["status"] == "Completed"
    M = out["M"]
    assert np.max(np.abs(M - M[0])) < 1e-8 * M[0]


def test_classification(grid, params, ground_state):
    label, s_c = il.regime(2, 1.0)
    assert label == "MassCritical"
    assert s_c == pytest.approx(0.0)

    gs = ground_state
    verdict = il.global_threshold_check(
        grid, 0.5 * np.asarray(gs.phi), 0.5 * np.asarray(gs.psi), gs, params, params
    )
    assert verdict["label"] == "GlobalBelowMass"

    state, reason = il.stability_criterion(il.PhysParams(d=2, alpha=0.4, kappa=1.0))
    assert state == "stable"


def test_cutoff_properties(grid):
    c = il.make_cutoff("chi", 4.0, grid)
    r = np.asarray(grid.nodes)
    chi = np.asarray(c.chi)
    inside = r <= 4.0
    assert chi[inside] == pytest.approx(r[inside] ** 2, rel=1e-13)
    assert (np.asarray(c.d2chi) <= 2.0 + 1e-12).all()


def test_error_translation(grid):
    bad = il.PhysParams(d=3, alpha=1.8, kappa=1.0)
    with pytest.raises(ValueError):
        bad.validate()
