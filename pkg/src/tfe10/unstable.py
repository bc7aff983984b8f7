"""Exponent algebra and profiles for the unstable variant with backward
diffusion u_t = div(|u|^n grad lap^4 u) - lap(|u|^(p-1) u).

The two scaling balances fix the exponents:

    n alpha + 10 beta = 1        (tenth-order flux vs time derivative)
    (p-1) alpha + 2 beta = 1     (backward diffusion vs time derivative)

both derived directly from the term-by-term scaling of the equation
(each power of u contributes alpha, each gradient one beta); the
closed-form alpha = 4/(5p-(n+5)) satisfies them identically.  At the
critical exponent p0 = n+1+8/N mass conservation holds and the radial
profile problem integrates once, dropping to ninth order like the
stable model but with the extra diffusive flux.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .odeshoot import ShootingSpec, regularized_mobility, shoot
from .similarity import (NonlinearEigenfunction, _chain_taylor_state,
                         _derivatives_at_end, _resample_profile, alpha0,
                         interior_residual)


class SingularExponentError(ValueError):
    """5p = n + 5: the scaling exponents degenerate."""


@dataclass(frozen=True)
class UnstableExponents:
    n: float
    p: float
    N: int
    alpha: float
    beta: float

    def identities(self) -> tuple[float, float]:
        """(n a + 10 b - 1, (p-1) a + 2 b - 1): both vanish identically."""
        return (self.n * self.alpha + 10.0 * self.beta - 1.0,
                (self.p - 1.0) * self.alpha + 2.0 * self.beta - 1.0)

    @property
    def mass_conserving(self) -> bool:
        return abs(self.alpha - self.beta * self.N) < 1e-12

    def as_dict(self) -> dict:
        i1, i2 = self.identities()
        return {"n": self.n, "p": self.p, "N": self.N, "alpha": self.alpha,
                "beta": self.beta, "p0": p_critical(self.n, self.N),
                "identities_ok": bool(abs(i1) < 1e-12 and abs(i2) < 1e-12)}


def exponents_unstable(n: float, p: float, N: int = 1) -> UnstableExponents:
    """Scaling exponents alpha = 4/(5p-(n+5)), beta = (p-(n+1))/(2(5p-(n+5)))."""
    denom = 5.0 * p - (n + 5.0)
    if denom == 0.0:
        raise SingularExponentError("5p = n+5 makes the exponents singular")
    if p <= n + 1.0:
        raise ValueError("standing assumption p > n+1 violated")
    alpha = 4.0 / denom
    beta = (p - (n + 1.0)) / (2.0 * denom)
    return UnstableExponents(n=n, p=p, N=N, alpha=alpha, beta=beta)


def p_critical(n: float, N: int) -> float:
    """Critical exponent p0 = n + 1 + 8/N (mass-conserving balance)."""
    if N < 1:
        raise ValueError("N >= 1")
    return n + 1.0 + 8.0 / N


def unstable_symbol(k):
    """1-d Fourier symbol -k^10 + k^2 of the constant-coefficient part
    of the p -> 1 linearization; positive exactly on 0 < |k| < 1."""
    k = np.asarray(k, dtype=float)
    out = -(k ** 10) + k ** 2
    return float(out) if out.ndim == 0 else out


def build_f0_unstable_spec(n: float, N: int, delta: float = 1e-10,
                           f_center: float = 1.0,
                           ivp_tol: float = 1e-10) -> ShootingSpec:
    """Once-integrated radial problem at the critical exponent.

    |f|^n d/dr(lap^4 f) - d/dr(|f|^(p-1) f) + beta r f = 0 in the same
    Laplacian-chain variables as the stable model; the diffusive flux
    adds p |f|^(p-1) f' to the closing relation.
    """
    p = p_critical(n, N)
    exps = exponents_unstable(n, p, N)
    beta = exps.beta
    s0 = 1e-6
    nm1 = N - 1.0
    pm1 = p - 1.0

    def rhs(s, W, u):
        y0 = u[4]
        mob = regularized_mobility(W[0], n, delta)
        out = np.empty(9)
        out[0] = W[1]
        if nm1:
            out[1] = W[2] - nm1 * W[1] / s
            out[3] = W[4] - nm1 * W[3] / s
            out[5] = W[6] - nm1 * W[5] / s
            out[7] = W[8] - nm1 * W[7] / s
        else:
            out[1] = W[2]
            out[3] = W[4]
            out[5] = W[6]
            out[7] = W[8]
        out[2] = W[3]
        out[4] = W[5]
        out[6] = W[7]
        # |f|^n W8' = -beta y0^10 s f + y0^8 d/ds(|f|^(p-1) f)
        diff_flux = p * np.abs(W[0]) ** pm1 * W[1]
        out[8] = (-beta * y0 ** 10 * s * W[0] + y0 ** 8 * diff_flux) / mob
        return out

    def origin(u):
        return s0, _chain_taylor_state(u, N, s0, f_center, n, delta, beta)

    def terminal(traj, u):
        return _derivatives_at_end(traj.end_state, u[4], N)

    return ShootingSpec(rhs=rhs, origin=origin, terminal=terminal, dim=9,
                        n_unknowns=5, n_conditions=5, free_boundary=True,
                        delta=delta, N=N, t_end=1.0, rtol=ivp_tol,
                        atol=ivp_tol,
                        params={"n": n, "p": p, "N": N, "alpha": exps.alpha,
                                "beta": beta, "f_center": f_center})


def interface_flux(traj, u, n: float, p: float, delta: float) -> float:
    """Residual of the combined zero-flux condition at the interface.

    The tenth-order flux derivative is reconstructed from the stored
    chain trajectory by a local polynomial fit (independent of the
    solved relation), so a genuinely nonzero interface flux would show.
    """
    from .odeshoot import nodal_derivative

    y0 = u[4]
    tail = slice(max(0, traj.t.size - 14), traj.t.size)
    t = traj.t[tail]
    W8 = traj.states[tail, 8]
    dW8_end = nodal_derivative(t, W8, window=min(9, t.size))[-1]
    end = traj.end_state
    f, f1 = end[0], end[1] / y0
    mob = regularized_mobility(f, n, delta)
    return float(mob * dW8_end / y0 ** 9
                 - p * np.abs(f) ** (p - 1.0) * f1)


def solve_f0_unstable(n: float, N: int = 1, p: Optional[float] = None, *,
                      delta: float = 1e-12, guess=None,
                      shoot_tol: float = 1e-8, ivp_tol: float = 1e-10,
                      max_iter: int = 40) -> NonlinearEigenfunction:
    """Mass-conserving profile of the unstable model at p = p0(n).

    Seeded from the stable model's solution at the same n (the extra
    diffusion is a regular perturbation at the profile scale); both the
    converged and the explicitly non-converged outcomes are returned
    with diagnostics, never silently.
    """
    if n <= 0:
        raise ValueError("n must be > 0")
    p0 = p_critical(n, N)
    if p is not None and abs(p - p0) > 1e-12:
        raise ValueError("mass-conserving reduction requires p = p0(n)")
    if guess is None:
        from .similarity import solve_f0
        base = solve_f0(n, N, delta=delta, shoot_tol=shoot_tol,
                        ivp_tol=ivp_tol)
        guess = np.array(base.diagnostics["unknowns"])
    spec = build_f0_unstable_spec(n, N, delta, 1.0, ivp_tol)
    result = shoot(spec, guess, tol=shoot_tol, max_iter=max_iter)
    y0 = float(result.unknowns[4])
    prof = _resample_profile(result.trajectory, y0, N)
    prof.meta["converged"] = result.converged
    exps = exponents_unstable(n, p0, N)
    flux = interface_flux(result.trajectory, result.unknowns, n, p0, delta)
    return NonlinearEigenfunction(
        profile=prof, y0=y0, n=n, N=N, k=0, alpha=exps.alpha,
        normalization=1.0,
        diagnostics={**result.as_dict(), "p": p0, "delta": delta,
                     "interface_flux": flux,
                     "alpha_mass_branch": alpha0(n, N).alpha})
