"""Tracing the first nonlinear eigenprofile branch in the mobility exponent.

The branch starts near the linear limit (profiles seeded by the kernel)
and marches upward in n with secant prediction of the shooting unknowns
and adaptive step control: halve on corrector failure, grow by 1.3
after two easy successes.  The eigenvalue alpha0(n) = N/(10+Nn) is
prescribed, not solved for, so continuation runs in n itself; corrector
results landing on a different member of the contact family (the free
boundary jumping by more than a lobe spacing) count as failures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core.grids import Grid
from .odeshoot import ShootingWindowError, shoot
from .profiles import RadialProfile
from .similarity import (NonlinearEigenfunction, _contact_roots,
                         _resample_profile, alpha0, build_f0_spec,
                         interior_residual, kernel_shape_seed)
from .spectral import kernel_1d


def delta_schedule(n: float) -> float:
    """Mobility regularization coupled to n: keeps the smoothed zone
    below the oscillation amplitude scale of small-n profiles."""
    return float(min(1e-10, 1e-8 * n))


@dataclass
class BranchPoint:
    n: float
    alpha0: float
    y0: float
    unknowns: np.ndarray          # (f''(0), f''''(0), f6(0), f8(0), y0)
    iterations: int
    residual_norm: float
    interior_residual: float
    delta: float

    def as_dict(self) -> dict:
        return {
            "n": self.n, "alpha0": self.alpha0, "y0": self.y0,
            "f2_0": float(self.unknowns[0]), "f4_0": float(self.unknowns[1]),
            "f6_0": float(self.unknowns[2]), "f8_0": float(self.unknowns[3]),
            "iters": self.iterations, "residual": self.residual_norm,
            "interior_residual": self.interior_residual, "delta": self.delta,
        }


@dataclass
class Branch:
    points: list
    termination: str              # reached n_max | failed corrector | step underflow
    N: int
    branch_index: int
    step_history: list = field(default_factory=list)
    profiles: dict = field(default_factory=dict)   # n -> RadialProfile

    @property
    def n_values(self) -> np.ndarray:
        return np.array([p.n for p in self.points])

    @property
    def y0_values(self) -> np.ndarray:
        return np.array([p.y0 for p in self.points])


def _corrector(n: float, guess: np.ndarray, N: int, shoot_tol: float,
               ivp_tol: float, delta: Optional[float] = None):
    dlt = delta_schedule(n) if delta is None else delta
    spec = build_f0_spec(n, N, dlt, "beta0", 1.0, ivp_tol)
    res = shoot(spec, guess, tol=shoot_tol, max_iter=30)
    if not res.converged:
        # one rung of mobility smoothing often re-centers the basin
        pre = shoot(build_f0_spec(n, N, 1e-6, "beta0", 1.0, ivp_tol),
                    guess, tol=shoot_tol, max_iter=20)
        if pre.converged:
            res = shoot(spec, pre.unknowns, tol=shoot_tol, max_iter=30)
    return res, spec, dlt


def trace_branch(n_start: float = 1e-3, n_max: float = 1.0, N: int = 1, *,
                 branch: int = 3, first_step: float = 2e-3,
                 max_step: float = 0.08, shoot_tol: float = 1e-8,
                 ivp_tol: float = 1e-10, stations: Optional[list] = None,
                 keep_profiles: bool = False,
                 max_points: int = 400) -> Branch:
    """March the selected contact-family branch from n_start to n_max.

    ``stations`` forces particular n values onto the accepted grid
    (steps never jump across them), which makes independently traced
    branches comparable point by point.
    """
    if not 0 < n_start < n_max:
        raise ValueError("need 0 < n_start < n_max")
    kern = kernel_1d(Grid.uniform(0.0, 15.0, 1024), jmax=8)
    shape = kernel_shape_seed(kern)
    roots = _contact_roots(n_start, N, "beta0", 1.0, shape, want=branch)
    if len(roots) < branch:
        raise RuntimeError(f"branch {branch} not located at n = {n_start}")
    y0r, sh = roots[branch - 1]
    res, spec, dlt = _corrector(n_start, np.concatenate([sh, [y0r]]), N,
                                shoot_tol, ivp_tol)
    if not res.converged:
        raise RuntimeError("corrector failed at the branch start")

    stations = sorted(s for s in (stations or []) if n_start < s <= n_max)
    pts: list[BranchPoint] = []
    profiles: dict = {}
    steps: list = []

    def accept(n, res, spec, dlt):
        y0 = float(res.unknowns[4])
        inter = interior_residual(res.trajectory, spec, y0)
        pts.append(BranchPoint(
            n=n, alpha0=alpha0(n, N).alpha, y0=y0,
            unknowns=res.unknowns.copy(), iterations=res.iterations,
            residual_norm=res.residual_norm, interior_residual=inter,
            delta=dlt))
        if keep_profiles:
            profiles[n] = _resample_profile(res.trajectory, y0, N)

    accept(n_start, res, spec, dlt)
    n = n_start
    u = res.unknowns
    dn = first_step
    lows = 0
    easy = 0
    termination = "reached n_max"
    while n < n_max and len(pts) < max_points:
        n_t = min(n + dn, n_max)
        for s in stations:
            if n < s < n_t - 1e-12:
                n_t = s
                break
        if len(pts) >= 2:
            p1, p2 = pts[-2], pts[-1]
            pred = p2.unknowns + (p2.unknowns - p1.unknowns) * \
                (n_t - p2.n) / (p2.n - p1.n)
        else:
            pred = u
        ok = False
        try:
            res, spec, dlt = _corrector(n_t, pred, N, shoot_tol, ivp_tol)
            ok = res.converged and abs(res.unknowns[4] - u[4]) < 0.8
        except ShootingWindowError:
            ok = False
        if ok:
            steps.append((n_t, dn, True))
            accept(n_t, res, spec, dlt)
            n, u = n_t, res.unknowns
            easy = easy + 1 if res.iterations <= 8 else 0
            if easy >= 2:
                dn = min(dn * 1.3, max_step)
                easy = 0
            lows = 0
        else:
            steps.append((n_t, dn, False))
            dn *= 0.5
            if dn < 1e-5:
                lows += 1
                if lows >= 3:
                    termination = "failed corrector"
                    break
                dn = 4e-5
            else:
                lows = 0
    if len(pts) >= max_points and n < n_max:
        termination = "step underflow"
    return Branch(points=pts, termination=termination, N=N,
                  branch_index=branch, step_history=steps,
                  profiles=profiles)


def branch_report(branch: Branch) -> list:
    """Rows (n, alpha0, y0, f2_0, f4_0, f6_0, f8_0, iters, residual)."""
    if not branch.points:
        raise ValueError("empty branch")
    return [p.as_dict() for p in branch.points]
