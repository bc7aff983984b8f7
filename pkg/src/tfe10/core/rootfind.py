"""Damped Newton iteration for small dense nonlinear systems.

Used by the shooting solver and by the reduced branching systems.  The
Jacobian is always formed by central finite differences; problems here
have tens of unknowns at most.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

_SQRT_EPS = float(np.sqrt(np.finfo(float).eps))


class DegenerateRootError(RuntimeError):
    """Jacobian numerically singular at the current iterate."""


class EvaluationFailed(RuntimeError):
    """Residual not evaluable at a trial point (used to force damping)."""


@dataclass
class NewtonResult:
    x: np.ndarray
    residual: np.ndarray
    residual_norm: float
    iterations: int
    converged: bool
    damping_history: list = field(default_factory=list)
    message: str = ""

    def as_dict(self) -> dict:
        return {
            "x": [float(v) for v in self.x],
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
            "converged": self.converged,
            "damping": list(self.damping_history),
            "message": self.message,
        }


def fd_jacobian(F: Callable, x: np.ndarray, fx: np.ndarray | None = None) -> np.ndarray:
    """Central-difference Jacobian, step sqrt(eps)*max(1,|x_i|) per column."""
    x = np.asarray(x, dtype=float)
    m = x.size
    if fx is None:
        fx = np.atleast_1d(np.asarray(F(x), dtype=float))
    J = np.empty((fx.size, m))
    for i in range(m):
        h = _SQRT_EPS * max(1.0, abs(x[i]))
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        J[:, i] = (np.atleast_1d(F(xp)) - np.atleast_1d(F(xm))) / (2.0 * h)
    return J


def solve_system(F: Callable, x0: Sequence[float], tol: float = 1e-10,
                 max_iter: int = 50, min_damping: float = 1e-4) -> NewtonResult:
    """Solve F(x) = 0 by damped Newton with a finite-difference Jacobian.

    Convergence means ``max|F(x*)| <= tol``.  The step is halved until the
    residual norm decreases (or ``min_damping`` is reached, in which case
    the best available step is taken anyway).  Failure to converge within
    ``max_iter`` returns a report with ``converged=False`` rather than
    raising; a singular Jacobian raises :class:`DegenerateRootError`.

    ``F`` may raise :class:`EvaluationFailed` at a trial point; that trial
    is treated as worse than the current iterate so damping kicks in.
    """
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    fx = np.atleast_1d(np.asarray(F(x), dtype=float))
    if fx.size != x.size:
        raise ValueError(f"square system required: {x.size} unknowns, {fx.size} residuals")
    history: list[float] = []
    norm = float(np.max(np.abs(fx)))

    for it in range(1, max_iter + 1):
        if norm <= tol:
            return NewtonResult(x, fx, norm, it - 1, True, history, "converged")
        J = fd_jacobian(F, x, fx)
        try:
            cond = np.linalg.cond(J)
        except np.linalg.LinAlgError:
            cond = np.inf
        if not np.isfinite(cond) or cond > 1e14:
            raise DegenerateRootError(
                f"Jacobian numerically singular at iteration {it} (cond={cond:.3e})")
        step = np.linalg.solve(J, -fx)

        lam = 1.0
        best = None
        evaluable = False
        while lam >= min_damping:
            xt = x + lam * step
            try:
                ft = np.atleast_1d(np.asarray(F(xt), dtype=float))
            except EvaluationFailed:
                lam *= 0.5
                continue
            evaluable = True
            nt = float(np.max(np.abs(ft)))
            if nt < norm and (best is None or nt < best[2]):
                best = (xt, ft, nt, lam)
            if nt < norm:
                break
            lam *= 0.5
        if best is None:
            msg = ("residual not evaluable for any damping level"
                   if not evaluable else "line search found no descent")
            return NewtonResult(x, fx, norm, it, False, history, msg)
        x, fx, norm, lam_used = best
        history.append(lam_used)

    converged = norm <= tol
    msg = "converged" if converged else f"iteration cap {max_iter} reached"
    return NewtonResult(x, fx, norm, max_iter, converged, history, msg)
