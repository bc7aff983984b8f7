"""Adaptive integration of radial ODE systems and multi-parameter shooting.

The integrator is an embedded Dormand-Prince 5(4) pair with mixed
absolute/relative error control, deterministic step selection, cubic
Hermite dense output, and informative termination (reached endpoint,
state blow-up, step underflow) so the shooting driver can react to
divergent trial trajectories instead of crashing.

Shooting residuals are solved by damped Newton.  Jacobian columns are
integrated on the frozen step grid of the current iterate: the residual
map seen by the difference quotients is then exactly smooth, which
keeps Newton effective even when the trajectory amplifies perturbations
by many orders of magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .core.rootfind import _SQRT_EPS

BLOWUP_DEFAULT = 1e12
HMIN = 1e-14

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = _B5 - np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                     -92097 / 339200, 187 / 2100, 1 / 40])


class ShootingWindowError(RuntimeError):
    """Every damped trial trajectory blew up; try a different guess."""


class _ColumnBlowUp(Exception):
    pass


@dataclass
class IVPResult:
    t: np.ndarray
    states: np.ndarray          # (nsteps+1, dim)
    derivs: np.ndarray          # rhs at the stored nodes
    reason: str                 # reached | blow-up | step-underflow | step-budget
    naccept: int
    nreject: int

    @property
    def end_state(self) -> np.ndarray:
        return self.states[-1]

    def sample(self, t_eval) -> np.ndarray:
        """Cubic Hermite interpolation of the stored steps."""
        t_eval = np.atleast_1d(np.asarray(t_eval, dtype=float))
        idx = np.clip(np.searchsorted(self.t, t_eval, side="right") - 1,
                      0, self.t.size - 2)
        t0 = self.t[idx]
        h = self.t[idx + 1] - t0
        s = ((t_eval - t0) / h)[:, None]
        y0, y1 = self.states[idx], self.states[idx + 1]
        f0, f1 = self.derivs[idx], self.derivs[idx + 1]
        h = h[:, None]
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def _initial_step(rhs, t0, y0, f0, t1, rtol, atol):
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, abs(t1 - t0))
    y1 = y0 + h0 * f0
    f1 = rhs(t0 + h0, y1)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, abs(t1 - t0))


def integrate(rhs: Callable, t0: float, y0, t1: float, rtol: float = 1e-10,
              atol: float = 1e-10, blowup: float = BLOWUP_DEFAULT,
              max_steps: int = 100_000, first_step: Optional[float] = None,
              grid: Optional[np.ndarray] = None) -> IVPResult:
    """Integrate y' = rhs(t, y) from t0 to t1 (t1 > t0).

    Adaptive mode keeps the per-step mixed error below one unit of
    atol + rtol*max(|y|); passing ``grid`` instead replays exactly that
    step sequence with no error control (used for frozen-grid Jacobian
    columns).  Identical inputs give bit-identical trajectories.
    """
    y = np.array(y0, dtype=float)
    dim = y.size
    K = np.empty((7, dim))
    ts = [t0]
    ys = [y.copy()]
    f = np.asarray(rhs(t0, y), dtype=float)
    fs = [f.copy()]
    reason = "reached"
    naccept = nreject = 0

    if grid is not None:
        for i in range(grid.size - 1):
            t, h = grid[i], grid[i + 1] - grid[i]
            K[0] = f
            for j in range(1, 7):
                K[j] = rhs(t + _C[j] * h, y + h * (_A[j] @ K[:j]))
            y = y + h * (_B5 @ K)
            f = K[6].copy()  # FSAL
            ts.append(grid[i + 1])
            ys.append(y.copy())
            fs.append(f.copy())
            if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > blowup:
                reason = "blow-up"
                break
            naccept += 1
        return IVPResult(np.array(ts), np.array(ys), np.array(fs), reason,
                         naccept, 0)

    t = t0
    h = first_step if first_step is not None else _initial_step(
        rhs, t0, y, f, t1, rtol, atol)
    while t < t1:
        h = min(h, t1 - t)
        if h < HMIN:
            reason = "step-underflow"
            break
        if naccept + nreject >= max_steps:
            reason = "step-budget"
            break
        K[0] = f
        for j in range(1, 7):
            K[j] = rhs(t + _C[j] * h, y + h * (_A[j] @ K[:j]))
        y_new = y + h * (_B5 @ K)
        K[6] = rhs(t + h, y_new)
        if not np.all(np.isfinite(y_new)) or np.max(np.abs(y_new)) > blowup:
            # try a shorter step before declaring blow-up
            if h > 4 * HMIN:
                nreject += 1
                h *= 0.25
                continue
            y = y_new
            f = K[6].copy()
            ts.append(t + h)
            ys.append(y.copy())
            fs.append(f.copy())
            reason = "blow-up"
            break
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(float(np.mean((h * (_E @ K) / scale) ** 2)))
        if err <= 1.0:
            t += h
            y = y_new
            f = K[6].copy()
            ts.append(t)
            ys.append(y.copy())
            fs.append(f.copy())
            naccept += 1
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            nreject += 1
            fac = max(0.2, 0.9 * err ** -0.2)
        h *= fac
    return IVPResult(np.array(ts), np.array(ys), np.array(fs), reason,
                     naccept, nreject)


def regularized_mobility(f: float, n: float, delta: float) -> float:
    """Smoothed degenerate mobility (f^2 + delta^2)^(n/2).

    Equals |f|^n up to O(delta^2/f^2) relative error away from the zero
    set and exactly 1 for n = 0.
    """
    if n == 0.0:
        return 1.0 if np.isscalar(f) else np.ones_like(np.asarray(f, dtype=float))
    return (f * f + delta * delta) ** (0.5 * n)


# ---------------------------------------------------------------------------
# radial operator expansion: lap^m and d/dr lap^m as sums c * f^(j) / r^p
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def radial_laplacian_terms(m: int, N: int) -> tuple:
    """lap^m of a radial function as ((j, p, coeff), ...) meaning
    sum coeff * f^(j)(r) / r^p, generated by exact recurrence."""
    terms = {(0, 0): Fraction(1)}
    for _ in range(m):
        nxt: dict = {}

        def add(j, p, c):
            nxt[(j, p)] = nxt.get((j, p), Fraction(0)) + c

        for (j, p), c in terms.items():
            add(j + 2, p, c)
            if N != 1 or p != 0:
                add(j + 1, p + 1, c * (N - 1 - 2 * p))
            if p != 0:
                add(j, p + 2, c * p * (p + 2 - N))
        terms = {k: v for k, v in nxt.items() if v != 0}
    return tuple(sorted((j, p, float(c)) for (j, p), c in terms.items()))


@lru_cache(maxsize=None)
def radial_flux_terms(m: int, N: int) -> tuple:
    """d/dr of lap^m as ((j, p, coeff), ...); leading term is f^(2m+1)."""
    out: dict = {}
    for j, p, c in radial_laplacian_terms(m, N):
        out[(j + 1, p)] = out.get((j + 1, p), 0.0) + c
        if p != 0:
            out[(j, p + 1)] = out.get((j, p + 1), 0.0) - c * p
    return tuple(sorted((j, p, c) for (j, p), c in out.items() if c != 0.0))


def eval_radial_terms(terms, state: np.ndarray, r: float) -> float:
    """Evaluate sum c * state[j] / r^p at one radius."""
    acc = 0.0
    for j, p, c in terms:
        acc += c * state[j] / r ** p if p else c * state[j]
    return acc


# ---------------------------------------------------------------------------
# shooting
# ---------------------------------------------------------------------------

@dataclass
class ShootingSpec:
    """Boundary-value problem posed as shooting from the origin.

    ``rhs(t, y, unknowns)`` is the first-order system; ``origin``
    builds the initial state from the unknown vector (symmetry zeros
    plus Taylor start when the system carries 1/r terms); ``terminal``
    maps the final trajectory to the residual vector.  When the far end
    is a free boundary, the domain is rescaled so the boundary location
    is simply one more unknown (``t_end`` is then fixed at 1).
    """

    rhs: Callable
    origin: Callable
    terminal: Callable
    dim: int
    n_unknowns: int
    n_conditions: int
    free_boundary: bool = False
    delta: float = 1e-10
    N: int = 1
    t_end: float = 1.0
    rtol: float = 1e-10
    atol: float = 1e-10
    blowup: float = BLOWUP_DEFAULT
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_unknowns != self.n_conditions:
            raise ValueError(
                f"{self.n_unknowns} unknowns vs {self.n_conditions} conditions")
        if self.delta <= 0 and self.params.get("n", 0) > 0:
            raise ValueError("delta must be > 0 for degenerate mobility")


@dataclass
class ShootingResult:
    unknowns: np.ndarray
    residuals: np.ndarray
    trajectory: IVPResult
    converged: bool
    iterations: int
    residual_norm: float
    history: list
    message: str = ""

    def as_dict(self) -> dict:
        return {
            "unknowns": [float(v) for v in self.unknowns],
            "residuals": [float(v) for v in self.residuals],
            "iterations": self.iterations,
            "residual_norm": float(self.residual_norm),
            "converged": self.converged,
            "termination": self.trajectory.reason,
            "message": self.message,
        }


def _integrate_spec(spec: ShootingSpec, u: np.ndarray,
                    grid: Optional[np.ndarray] = None) -> IVPResult:
    t0, y0 = spec.origin(u)
    return integrate(lambda t, y: spec.rhs(t, y, u), t0, y0, spec.t_end,
                     rtol=spec.rtol, atol=spec.atol, blowup=spec.blowup,
                     grid=grid)


def shoot(spec: ShootingSpec, guess, tol: float = 1e-8,
          max_iter: int = 30) -> ShootingResult:
    """Damped Newton on the shooting residuals.

    Each outer round freezes the adaptive step grid of the current
    iterate and runs Newton entirely on that frozen-grid residual map,
    which is exactly smooth; the grid is then refreshed and the true
    adaptive residual re-checked.  Trial points whose trajectory blows
    up are treated as failed and force extra damping; if every damping
    level of the first round blows up a :class:`ShootingWindowError`
    is raised.
    """
    u = np.asarray(guess, dtype=float).copy()
    if u.size != spec.n_unknowns:
        raise ValueError(f"guess needs {spec.n_unknowns} entries")

    traj = _integrate_spec(spec, u)
    if traj.reason != "reached":
        raise ShootingWindowError(
            f"initial guess trajectory terminated by {traj.reason}; "
            "try a different guess")
    r = np.asarray(spec.terminal(traj, u), dtype=float)
    norm = float(np.max(np.abs(r)))
    history = [norm]
    it = 0
    strikes = 0

    # phase 1: damped Newton on the adaptive residual map; the
    # difference step is large enough that step-control noise (~tol)
    # stays far below the secant variation
    fd_step = 3e-6

    def _column(i, base):
        h = fd_step * max(1.0, abs(base[i]))
        up, um = base.copy(), base.copy()
        up[i] += h
        um[i] -= h
        tp, tm = _integrate_spec(spec, up), _integrate_spec(spec, um)
        if tp.reason != "reached" or tm.reason != "reached":
            raise _ColumnBlowUp()
        rp = np.asarray(spec.terminal(tp, up), dtype=float)
        rm = np.asarray(spec.terminal(tm, um), dtype=float)
        return (rp - rm) / (2.0 * h)

    while norm > tol and it < max_iter:
        J = np.empty((r.size, u.size))
        try:
            for i in range(u.size):
                J[:, i] = _column(i, u)
        except _ColumnBlowUp:
            return ShootingResult(u, r, traj, False, it, norm, history,
                                  "Jacobian column trajectory left window")
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            return ShootingResult(u, r, traj, False, it, norm, history,
                                  "singular shooting Jacobian")
        # nonmonotone line search: compare against the worst recent norm
        # so Newton can cross narrow curved valleys, with a strike limit
        reference = max(history[-4:])
        lam, best, fallback, any_window = 1.0, None, None, False
        while lam >= 1e-4:
            ut = u + lam * step
            tt = _integrate_spec(spec, ut)
            if tt.reason != "reached":
                any_window = True
                lam *= 0.5
                continue
            rt = np.asarray(spec.terminal(tt, ut), dtype=float)
            nt = float(np.max(np.abs(rt)))
            if fallback is None or nt < fallback[3]:
                fallback = (ut, tt, rt, nt)
            if nt < reference * (1.0 - 1e-4) or nt < norm:
                best = (ut, tt, rt, nt)
                break
            lam *= 0.5
        it += 1
        if best is None:
            if fallback is None:
                if any_window and it == 1:
                    raise ShootingWindowError(
                        "all damping levels blow up; try a different guess")
                break
            strikes += 1
            if strikes > 2:
                break  # persistent non-descent: polish below
            best = fallback
        else:
            strikes = 0
        u, traj, r, norm = best
        history.append(norm)

    # phase 2: consistent polish -- Newton entirely on the frozen-grid
    # residual map (smooth), refreshing the grid between rounds; breaks
    # the plateau caused by step-control chatter near the solution
    from .core.rootfind import EvaluationFailed, solve_system
    rounds = 0
    while norm > tol and it < max_iter and rounds < 6:
        grid = traj.t

        def frozen_residual(v):
            tt = _integrate_spec(spec, v, grid)
            if tt.reason != "reached":
                raise EvaluationFailed("trajectory left the window")
            return np.asarray(spec.terminal(tt, v), dtype=float)

        try:
            inner = solve_system(frozen_residual, u, tol=0.2 * tol,
                                 max_iter=min(10, max_iter - it))
        except Exception as exc:
            return ShootingResult(u, r, traj, False, it, norm, history,
                                  f"frozen-grid polish failed: {exc}")
        it += max(inner.iterations, 1)
        rounds += 1
        traj_new = _integrate_spec(spec, inner.x)
        if traj_new.reason != "reached":
            break
        r_new = np.asarray(spec.terminal(traj_new, inner.x), dtype=float)
        norm_new = float(np.max(np.abs(r_new)))
        if norm_new >= norm and rounds > 1:
            break
        if norm_new < norm:
            u, traj, r, norm = inner.x, traj_new, r_new, norm_new
            history.append(norm)

    return ShootingResult(u, r, traj, norm <= tol, it, norm, history,
                          "converged" if norm <= tol else
                          f"stalled at {norm:.3e}")


def nodal_derivative(t: np.ndarray, values: np.ndarray,
                     window: int = 7) -> np.ndarray:
    """Derivative of sampled data at its own nodes via local polynomial
    fits (centered windows, degree window-2); used for a-posteriori
    equation residuals independent of the integrator state."""
    n = t.size
    out = np.empty(n)
    half = window // 2
    deg = window - 2
    for i in range(n):
        lo = max(0, min(i - half, n - window))
        sl = slice(lo, lo + window)
        t_loc = t[sl] - t[i]
        scale = max(np.max(np.abs(t_loc)), 1e-300)
        coef = np.polynomial.polynomial.polyfit(t_loc / scale, values[sl], deg)
        out[i] = coef[1] / scale
    return out
