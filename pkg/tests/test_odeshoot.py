import math

import numpy as np
import pytest

from tfe10.odeshoot import (IVPResult, ShootingSpec, ShootingWindowError,
                            eval_radial_terms, integrate, nodal_derivative,
                            radial_flux_terms, radial_laplacian_terms,
                            regularized_mobility, shoot)


# ------------------------------------------------------------- integrate ---

def test_exponential():
    res = integrate(lambda t, y: y, 0.0, [1.0], 1.0)
    assert res.reason == "reached"
    assert res.end_state[0] == pytest.approx(math.e, abs=1e-9)


def test_zero_state_stays_zero():
    res = integrate(lambda t, y: -3.0 * y, 0.0, [0.0, 0.0], 2.0)
    assert np.all(res.states == 0.0)


def test_cosine():
    res = integrate(lambda t, y: np.array([y[1], -y[0]]), 0.0, [1.0, 0.0],
                    math.pi)
    assert res.end_state[0] == pytest.approx(-1.0, abs=1e-9)
    assert res.end_state[1] == pytest.approx(0.0, abs=1e-9)


def test_deterministic():
    run = lambda: integrate(lambda t, y: np.array([y[1], -y[0] * t]),
                            0.0, [1.0, 0.2], 5.0)
    a, b = run(), run()
    assert np.array_equal(a.t, b.t)
    assert np.array_equal(a.states, b.states)


def test_tolerance_halving_consistency():
    rhs = lambda t, y: np.array([y[1], -np.sin(y[0])])
    coarse = integrate(rhs, 0.0, [1.0, 0.0], 10.0, rtol=1e-8, atol=1e-8)
    fine = integrate(rhs, 0.0, [1.0, 0.0], 10.0, rtol=5e-9, atol=5e-9)
    assert np.max(np.abs(coarse.end_state - fine.end_state)) < 10 * 1e-8


def test_blowup_termination():
    res = integrate(lambda t, y: y * y, 0.0, [2.0], 5.0)
    assert res.reason == "blow-up"
    assert np.all(np.isfinite(res.states[:-1]))


def test_dense_output_accuracy():
    res = integrate(lambda t, y: np.array([y[1], -y[0]]), 0.0, [0.0, 1.0],
                    6.0)
    tt = np.linspace(0.3, 5.7, 67)
    vals = res.sample(tt)
    assert np.max(np.abs(vals[:, 0] - np.sin(tt))) < 1e-7


def test_frozen_grid_replays_exactly():
    rhs = lambda t, y: np.array([y[1], -y[0]])
    a = integrate(rhs, 0.0, [1.0, 0.0], 3.0)
    b = integrate(rhs, 0.0, [1.0, 0.0], 3.0, grid=a.t)
    # replay follows the same nodes; arithmetic may differ in the last bit
    assert np.array_equal(a.t, b.t)
    assert np.max(np.abs(a.states - b.states)) < 1e-14


# ------------------------------------------------------------- mobility ----

def test_mobility_values():
    assert regularized_mobility(1.0, 2.0, 1e-10) == pytest.approx(1.0, abs=1e-12)
    assert regularized_mobility(0.0, 1.0, 1e-10) == pytest.approx(1e-10)
    assert regularized_mobility(123.4, 0.0, 1e-10) == 1.0
    # smooth through zero and even in f
    assert regularized_mobility(-0.5, 0.7, 1e-10) == regularized_mobility(
        0.5, 0.7, 1e-10)


# ------------------------------------------------------- radial operators ---

def test_radial_laplacian_1d_is_plain_derivative():
    assert radial_laplacian_terms(4, 1) == ((8, 0, 1.0),)
    assert radial_flux_terms(4, 1) == ((9, 0, 1.0),)


@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("m", [1, 2, 4])
def test_radial_laplacian_against_symbolic(N, m):
    import sympy as sp

    r = sp.symbols("r", positive=True)
    f = sp.Function("f")
    expr = f(r)
    for _ in range(m):
        expr = sp.diff(expr, r, 2) + (N - 1) / r * sp.diff(expr, r)
    expr = sp.expand(expr)
    # compare against a concrete test function r^7
    concrete = sp.simplify(expr.subs(f(r), r ** 7).doit())
    state = np.array([float(sp.diff(r ** 7, r, j).subs(r, 1.7))
                      for j in range(2 * m + 1)])
    mine = eval_radial_terms(radial_laplacian_terms(m, N), state, 1.7)
    assert mine == pytest.approx(float(concrete.subs(r, 1.7)), rel=1e-12)


@pytest.mark.parametrize("N", [2, 3])
def test_radial_flux_terms_against_symbolic(N):
    import sympy as sp

    r = sp.symbols("r", positive=True)
    g = r ** 9 + 3 * r ** 6
    expr = g
    for _ in range(4):
        expr = sp.diff(expr, r, 2) + (N - 1) / r * sp.diff(expr, r)
    expr = sp.diff(expr, r)
    state = np.array([float(sp.diff(g, r, j).subs(r, 0.9)) for j in range(10)])
    mine = eval_radial_terms(radial_flux_terms(4, N), state, 0.9)
    assert mine == pytest.approx(float(expr.subs(r, 0.9)), rel=1e-12)


# --------------------------------------------------------------- shooting ---

def _linear_bvp_spec():
    # f'' = f - 1 with f(0) unknown, f'(0) = 0; targets f(1) = 1, f'(1) = 0
    # closed form: f = 1 + c cosh(y) with c from the boundary data
    def rhs(t, y, u):
        return np.array([y[1], y[0] - 1.0])

    def origin(u):
        return 0.0, np.array([u[0], u[1]])

    def terminal(traj, u):
        return np.array([traj.end_state[0] - 1.0, traj.end_state[1]])

    return ShootingSpec(rhs=rhs, origin=origin, terminal=terminal, dim=2,
                        n_unknowns=2, n_conditions=2)


def test_linear_bvp_matches_closed_form():
    spec = _linear_bvp_spec()
    res = shoot(spec, [0.5, 0.1], tol=1e-10)
    assert res.converged
    # f(1) = 1, f'(1) = 0 forces c cosh(1) = 0 => c = 0, f == 1
    assert res.unknowns[0] == pytest.approx(1.0, abs=1e-9)
    assert res.unknowns[1] == pytest.approx(0.0, abs=1e-9)
    assert np.max(np.abs(res.residuals)) <= 1e-8


def test_unknown_condition_mismatch_rejected():
    with pytest.raises(ValueError):
        ShootingSpec(rhs=lambda t, y, u: y, origin=lambda u: (0.0, u),
                     terminal=lambda tr, u: np.zeros(3), dim=2,
                     n_unknowns=2, n_conditions=3)


def test_rerun_from_root_is_immediate():
    spec = _linear_bvp_spec()
    res = shoot(spec, [0.5, 0.1])
    again = shoot(spec, res.unknowns)
    assert again.converged
    assert again.iterations <= 2


def test_shooting_window_error():
    # y' = y^2 blows up before t=5 for y0 >= 1: no damping can fix a
    # one-dimensional positive guess direction
    def rhs(t, y, u):
        return y * y

    spec = ShootingSpec(rhs=rhs, origin=lambda u: (0.0, np.array([u[0]])),
                        terminal=lambda tr, u: np.array([tr.end_state[0] - 1]),
                        dim=1, n_unknowns=1, n_conditions=1, t_end=5.0)
    with pytest.raises(ShootingWindowError):
        shoot(spec, [3.0])


def test_nodal_derivative():
    t = np.linspace(0.0, 2.0, 80) ** 1.3 + 0.1
    vals = np.sin(3.0 * t)
    d = nodal_derivative(t, vals, window=9)
    assert np.max(np.abs(d - 3.0 * np.cos(3.0 * t))) < 1e-6
