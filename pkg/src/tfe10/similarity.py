"""Similarity exponents and the concrete eigenprofiles.

The mass-conserving nonlinear profile is shot from the origin as a
ninth-order system in Laplacian-chain variables

    W = (f, f', lap f, (lap f)', lap^2 f, ..., lap^4 f)(y0 s),

on the fixed interval s in [0, 1]: the free boundary y0 enters as an
algebraic unknown, and the once-integrated flux relation closes the
system through (lap^4 f)' = -beta y f / mobility.  The chain variables
keep the radial 1/r terms harmless near the origin, where the state is
started from its symmetric Taylor polynomial.

The n = 0 eigenprofiles f_k are generated from the kernel's derivative
table (the outward integration of the tenth-order equation is
hopelessly ill-conditioned) and validated against that equation
a posteriori.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core.grids import Grid
from .odeshoot import (IVPResult, ShootingResult, ShootingSpec,
                       integrate, nodal_derivative, regularized_mobility,
                       shoot)
from .profiles import RadialProfile
from .spectral import Kernel, decay_constants, kernel_1d

_SURFACE = {1: 2.0, 2: 2.0 * np.pi, 3: 4.0 * np.pi}


# ---------------------------------------------------------------------------
# exponents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimilarityExponents:
    alpha: float
    beta: float
    n: float
    N: int

    def __post_init__(self):
        if abs(10.0 * self.beta + self.n * self.alpha - 1.0) > 1e-12:
            raise ValueError("exponents violate 10 beta + n alpha = 1")

    @property
    def mass_conserving(self) -> bool:
        return abs(self.alpha - self.beta * self.N) < 1e-12


def alpha0(n: float, N: int) -> SimilarityExponents:
    """First nonlinear eigenvalue alpha0 = N/(10+Nn) (mass branch)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if 10.0 + N * n <= 0:
        raise ValueError("need 10 + N n > 0")
    return SimilarityExponents(alpha=N / (10.0 + N * n),
                               beta=1.0 / (10.0 + N * n), n=n, N=N)


def alpha_k_linear(k: int, N: int) -> float:
    """Eigenvalue ladder at n = 0: alpha_k = (k + N)/10."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return (k + N) / 10.0


# ---------------------------------------------------------------------------
# far-field bundle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticBundle:
    """Five decaying far-field modes ~ A |y|^(-4N/9) exp(-(9/10) a^(1/9) w |y|^(10/9))."""

    alpha: float
    omegas: tuple
    slowest_pair: tuple
    decay_constant: float
    amplitude_exponent: float


def asymptotic_bundle(alpha: float, N: int = 1) -> AsymptoticBundle:
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    roots = [np.exp(2j * np.pi * m / 9.0) for m in range(-4, 5)]
    stable = tuple(w for w in roots if w.real > 0)
    assert len(stable) == 5
    slowest = tuple(w for w in stable
                    if abs(w.real - min(r.real for r in stable)) < 1e-14)
    return AsymptoticBundle(
        alpha=alpha,
        omegas=stable,
        slowest_pair=slowest,
        decay_constant=0.9 * alpha ** (1.0 / 9.0) * math.cos(4 * math.pi / 9.0),
        amplitude_exponent=-4.0 * N / 9.0,
    )


# ---------------------------------------------------------------------------
# nonlinear profile with free boundary
# ---------------------------------------------------------------------------

@dataclass
class NonlinearEigenfunction:
    profile: RadialProfile
    y0: Optional[float]
    n: float
    N: int
    k: int
    alpha: float
    normalization: float
    diagnostics: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "k": self.k, "n": self.n, "N": self.N, "alpha": self.alpha,
            "y0": self.y0, "normalization": self.normalization,
            "residuals": self.diagnostics.get("residuals"),
        }


def _chain_rhs_factory(n, N, delta, beta_drift, f_center):
    nm1 = N - 1.0

    def rhs(s, W, u):
        y0 = u[4]
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
        out[8] = -beta_drift * y0 ** 10 * s * W[0] / regularized_mobility(
            W[0], n, delta)
        return out

    return rhs


def _chain_origin_values(u, N, f_center):
    """Chain values at the origin from the even f-derivatives.

    W_{2k}(0) = y0^{2k} lap^k f(0), with lap^k f(0) proportional to
    f^(2k)(0) through the radial Taylor factors.
    """
    f2, f4, f6, f8, y0 = u
    a = [f_center, f2 / 2.0, f4 / 24.0, f6 / 720.0, f8 / 40320.0]
    vals = [f_center]
    coefs = a[:]
    for k in range(1, 5):
        # apply the radial Laplacian to the even Taylor series once
        coefs = [coefs[i] * (2 * i) * (2 * i + N - 2)
                 for i in range(1, len(coefs))]
        vals.append(coefs[0] * y0 ** (2 * k))
    return np.array(vals), a


def _chain_taylor_state(u, N, s0, f_center, n, delta, beta_drift):
    """Degree-8 symmetric Taylor start of the chain state at s = s0."""
    _, a = _chain_origin_values(u, N, f_center)
    y0 = u[4]
    A = [a[k] * y0 ** (2 * k) for k in range(5)]  # f(y0 s) = sum A_k s^(2k)
    W = np.empty(9)
    coefs = {0: A[:]}  # chain level -> even Taylor coefficients in s
    cur = A[:]
    for lev in range(1, 5):
        cur = [cur[i] * (2 * i) * (2 * i + N - 2) for i in range(1, len(cur))]
        coefs[lev] = cur[:]
    for lev in range(5):
        c = coefs[lev]
        W[2 * lev] = sum(c[i] * s0 ** (2 * i) for i in range(len(c)))
        if lev < 4:
            W[2 * lev + 1] = sum(c[i] * 2 * i * s0 ** (2 * i - 1)
                                 for i in range(1, len(c)))
    # leading flux-driven correction of the top component
    W[8] += -beta_drift * u[4] ** 10 * s0 ** 2 / (
        2.0 * regularized_mobility(f_center, n, delta))
    return W


def _derivatives_at_end(W, y0, N):
    """(f, f', f'', f''', f'''') at the interface from the chain state."""
    nm1 = N - 1.0
    f0 = W[0]
    f1 = W[1] / y0
    lap = W[2] / y0 ** 2
    lap1 = W[3] / y0 ** 3
    lap2 = W[4] / y0 ** 4
    f2 = lap - nm1 * f1 / y0
    f3 = lap1 - nm1 * (f2 / y0 - f1 / y0 ** 2)
    lap_dd = lap2 - nm1 * lap1 / y0
    f4 = lap_dd - nm1 * (f3 / y0 - 2.0 * f2 / y0 ** 2 + 2.0 * f1 / y0 ** 3)
    return np.array([f0, f1, f2, f3, f4])


def build_f0_spec(n: float, N: int, delta: float = 1e-10,
                  drift: str = "beta0", f_center: float = 1.0,
                  ivp_tol: float = 1e-10) -> ShootingSpec:
    """Shooting problem for the first nonlinear eigenprofile.

    Unknowns (f''(0), f''''(0), f^(6)(0), f^(8)(0), y0) against the five
    interface contact conditions.  ``drift`` selects the coefficient on
    the y f term of the once-integrated equation: "beta0" is the
    divergence-form value 1/(10+Nn); "alpha0" the printed N/(10+Nn)
    (identical for N = 1).
    """
    exps = alpha0(n, N)
    beta_drift = exps.beta if drift == "beta0" else exps.alpha
    s0 = 1e-6
    rhs = _chain_rhs_factory(n, N, delta, beta_drift, f_center)

    def origin(u):
        return s0, _chain_taylor_state(u, N, s0, f_center, n, delta,
                                       beta_drift)

    def terminal(traj, u):
        return _derivatives_at_end(traj.end_state, u[4], N)

    return ShootingSpec(rhs=rhs, origin=origin, terminal=terminal, dim=9,
                        n_unknowns=5, n_conditions=5, free_boundary=True,
                        delta=delta, N=N, t_end=1.0, rtol=ivp_tol,
                        atol=ivp_tol,
                        params={"n": n, "N": N, "alpha": exps.alpha,
                                "beta": beta_drift, "drift": drift,
                                "f_center": f_center})


def _build_inner_spec(n: float, N: int, y0: float, delta: float,
                      drift: str, f_center: float,
                      ivp_tol: float) -> ShootingSpec:
    """Fixed-boundary companion problem: the four shape unknowns against
    the contact conditions f = f' = f'' = f''' = 0 at the given y0."""
    exps = alpha0(n, N)
    beta_drift = exps.beta if drift == "beta0" else exps.alpha
    s0 = 1e-6
    rhs5 = _chain_rhs_factory(n, N, delta, beta_drift, f_center)

    def rhs(s, W, u4):
        return rhs5(s, W, np.array([*u4, y0]))

    def origin(u4):
        u = np.array([*u4, y0])
        return s0, _chain_taylor_state(u, N, s0, f_center, n, delta,
                                       beta_drift)

    def terminal(traj, u4):
        return _derivatives_at_end(traj.end_state, y0, N)[:4]

    return ShootingSpec(rhs=rhs, origin=origin, terminal=terminal, dim=9,
                        n_unknowns=4, n_conditions=4, free_boundary=False,
                        delta=delta, N=N, t_end=1.0, rtol=ivp_tol,
                        atol=ivp_tol,
                        params={"n": n, "N": N, "beta": beta_drift,
                                "y0": y0})


def kernel_shape_seed(kernel: Kernel, f_center: float = 1.0) -> np.ndarray:
    """Origin even derivatives of the kernel scaled to f(0) = f_center."""
    if kernel.N != 1:
        raise NotImplementedError("seeding implemented for N = 1 kernels")
    F = [kernel.radial(0.0, 0, j) for j in (0, 2, 4, 6, 8)]
    scale = f_center / F[0]
    return np.array([F[1] * scale, F[2] * scale, F[3] * scale, F[4] * scale])


def kernel_seed(kernel: Kernel, n: float, f_center: float = 1.0,
                branch: int = 1) -> np.ndarray:
    """Shape seed plus the contact-point estimate for the given branch
    (the q-th contact sits just inside the (q+1)-th zero of the kernel)."""
    from .spectral import _tabulated_zeros
    shape = kernel_shape_seed(kernel, f_center)
    zs = _tabulated_zeros(kernel, 0, 40.0 + 4.0 * branch)
    y0_est = float(zs[branch]) - 0.3
    return np.concatenate([shape, [y0_est]])


def _resample_profile(traj: IVPResult, y0: float, N: int,
                      npoints: int = 1024) -> RadialProfile:
    s = np.linspace(traj.t[0], 1.0, npoints)
    states = traj.sample(s)
    y = s * y0
    vals = states[:, 0]
    derivs = np.vstack([vals, states[:, 1] / y0])
    return RadialProfile(Grid(y, "panel-composite"), vals, derivatives=derivs,
                         y0=y0, meta={"parity": "even", "N": N})


def interior_residual(traj: IVPResult, spec: ShootingSpec,
                      y0: float) -> float:
    """Back-substitution check of the once-integrated flux relation.

    The profile samples alone (not the integrator's flux bookkeeping)
    are pushed through the drift side of the equation and integrated up
    with an independent quadrature; the reconstruction must reproduce
    the stored flux component.  Integration smooths the mobility cusps
    at sign crossings, so this diagnostic is stable where direct
    differentiation of the flux is not.  Reported relative to the flux
    amplitude.
    """
    p = spec.params
    t = traj.t
    if t.size < 12:
        return float("nan")
    s = np.linspace(t[0], t[-1], 48001)
    base = traj.sample(s)[:, 0]
    # the drift integrand has near-jumps at the mobility cusps (sign
    # crossings of f); refine the sampling there so the trapezoid sum
    # localizes them sharply
    flips = np.where(np.sign(base[:-1]) * np.sign(base[1:]) < 0)[0]
    extra = []
    for i in flips:
        extra.append(np.linspace(s[i], s[i + 1], 1025)[1:-1])
    if extra:
        s = np.unique(np.concatenate([s] + extra))
    states = traj.sample(s)
    W0 = states[:, 0]
    W8 = states[:, 8]
    mob = regularized_mobility(W0, p["n"], spec.delta)
    g = -p["beta"] * y0 ** 10 * s * W0 / mob
    dh = np.diff(s)
    rebuilt = W8[0] + np.concatenate(
        [[0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * dh)])
    scale = np.max(np.abs(W8))
    return float(np.max(np.abs(rebuilt - W8)) / scale)


_SCAN_DELTA = 1e-6   # mobility smoothing during bracketing: keeps the
_SCAN_IVP_TOL = 1e-9  # sub-regularization oscillation out of the scan

def _table_seed(n: float, branch: int):
    """Interpolated calibrated Newton seed, or None outside coverage."""
    from ._f0_seeds import F0_SEEDS
    rows = F0_SEEDS.get(branch)
    if not rows:
        return None
    ns = np.array([r[0] for r in rows])
    if not (ns[0] * 0.5 <= n <= ns[-1] * 1.1):
        return None
    cols = np.array([r[1:] for r in rows])
    return np.array([np.interp(n, ns, cols[:, j]) for j in range(5)])


def _contact_roots(n: float, N: int, drift: str, f_center: float,
                   shape_seed: np.ndarray, want: int, y0_start: float = 4.4,
                   y0_step: float = 0.5, y0_max: float = 26.0):
    """Walk the free-boundary residual in y0 and bracket its roots.

    At fixed y0 the four shape unknowns are solved against the contact
    conditions f = f' = f'' = f''' = 0 (warm-started along the walk,
    with a heavily smoothed mobility); the leftover residual
    g(y0) = f''''(y0) changes sign exactly at the contact solutions,
    ordering the discrete family by support depth.  Returns the first
    ``want`` roots as (interpolated y0, shape-unknowns) pairs.
    """
    from .odeshoot import ShootingWindowError

    shape = np.asarray(shape_seed, dtype=float).copy()
    roots = []
    y0 = y0_start
    prev = None  # (y0, g, shape)
    while y0 <= y0_max and len(roots) < want:
        spec4 = _build_inner_spec(n, N, y0, _SCAN_DELTA, drift, f_center,
                                  _SCAN_IVP_TOL)
        try:
            res = shoot(spec4, shape, tol=1e-9, max_iter=30)
        except ShootingWindowError:
            y0 += y0_step
            continue
        if res.converged:
            shape = res.unknowns
            g = float(_derivatives_at_end(
                res.trajectory.end_state, y0, N)[4])
            if prev is not None and prev[1] * g < 0:
                y_lo, g_lo, sh = prev
                y_root = y_lo - g_lo * (y0 - y_lo) / (g - g_lo)
                roots.append((y_root, shape.copy()))
            prev = (y0, g, shape.copy())
        y0 += y0_step
    return roots


def solve_f0(n: float, N: int = 1, *, branch: int = 3, delta: float = 1e-12,
             drift: str = "beta0", guess: Optional[np.ndarray] = None,
             kernel: Optional[Kernel] = None, shoot_tol: float = 1e-8,
             ivp_tol: float = 1e-10, f_center: float = 1.0,
             max_iter: int = 40) -> NonlinearEigenfunction:
    """First nonlinear eigenprofile (mass branch) at mobility exponent n.

    The interface-contact solutions form a discrete family ordered by
    support depth; ``branch`` selects the member (deeper members
    resolve more of the sign-changing interface structure and lie
    closer to the kernel as n -> 0).  Without an explicit ``guess`` the
    family is enumerated by a nested scan: shape unknowns solved at
    frozen y0, the leftover contact residual rooted in y0, then one
    joint Newton polish over all five unknowns.  n = 0 is rejected
    (use :func:`solve_fk_linear`); non-convergence is flagged in the
    diagnostics, not raised.
    """
    if n <= 0:
        raise ValueError("n must be > 0; the linear family covers n = 0")
    if N not in (1, 2, 3):
        raise ValueError("N in {1, 2, 3}")
    if n > 1.5:
        import warnings
        warnings.warn("n beyond the validated working range (0, 1.5]")

    well_seeded = guess is not None
    if guess is None and N == 1 and drift == "beta0" and f_center == 1.0:
        guess = _table_seed(n, branch)
        well_seeded = guess is not None
    if guess is None:
        if kernel is None:
            kernel = kernel_1d(Grid.uniform(0.0, 15.0, 1024), jmax=8)
        shape_seed = kernel_shape_seed(kernel, f_center)
        roots = _contact_roots(n, N, drift, f_center, shape_seed,
                               want=branch)
        if len(roots) < branch:
            raise RuntimeError(
                f"found only {len(roots)} contact solutions below the scan "
                f"ceiling; branch {branch} not located")
        y0_root, shape = roots[branch - 1]
        guess = np.concatenate([shape, [y0_root]])

    # close seeds go straight to the target regularization; cold ones
    # are walked down a delta ladder first (heavier smoothing keeps the
    # early Newton steps out of the stiff sub-regularization zone)
    guess = np.asarray(guess, dtype=float)
    ladder = (delta,) if well_seeded else \
        tuple(d for d in (1e-6, 1e-9) if d > delta) + (delta,)
    result = None
    for dlt in ladder:
        spec = build_f0_spec(n, N, dlt, drift, f_center, ivp_tol)
        result = shoot(spec, guess, tol=shoot_tol, max_iter=max_iter)
        if result.converged:
            guess = result.unknowns
    if not result.converged:
        # the stiff zone sometimes needs a finer integration grid
        spec = build_f0_spec(n, N, delta, drift, f_center, ivp_tol / 10.0)
        retry = shoot(spec, guess, tol=shoot_tol, max_iter=max_iter)
        if retry.residual_norm < result.residual_norm:
            result = retry
    spec = build_f0_spec(n, N, delta, drift, f_center, ivp_tol)
    y0 = float(result.unknowns[4])
    prof = _resample_profile(result.trajectory, y0, N)
    prof.meta["converged"] = result.converged
    inter = interior_residual(result.trajectory, spec, y0)
    exps = alpha0(n, N)
    return NonlinearEigenfunction(
        profile=prof, y0=y0, n=n, N=N, k=0, alpha=exps.alpha,
        normalization=f_center,
        diagnostics={**result.as_dict(), "interior_residual": inter,
                     "delta": delta, "drift": drift, "branch": branch})


# ---------------------------------------------------------------------------
# linear family at n = 0
# ---------------------------------------------------------------------------

def solve_fk_linear(k: int, N: int = 1, grid: Optional[Grid] = None,
                    kernel: Optional[Kernel] = None) -> NonlinearEigenfunction:
    """k-th eigenprofile of the n = 0 problem (N = 1).

    Generated from the kernel derivative table (f_k proportional to
    F^(k)) and normalized to f_k(0) = 1 for even k, f_k'(0) = 1 for odd
    k; the tenth-order equation residual is evaluated a posteriori and
    stored in the diagnostics.
    """
    if N != 1:
        raise ValueError("linear family implemented for N = 1")
    if k > 9:
        raise ValueError("k <= 9 (derivative table bound)")
    if kernel is None:
        kernel = kernel_1d(grid or Grid.uniform(0.0, 15.0, 2048))
    if k > kernel.table.shape[0] - 1:
        raise ValueError("kernel table too short for this k")
    y = kernel.grid.points
    base = kernel.table[k]
    norm = kernel.radial(0.0, 0, k) if k % 2 == 0 else kernel.radial(0.0, 0, k + 1)
    vals = base / norm
    dvals = kernel.table[k + 1] / norm if k + 1 <= kernel.table.shape[0] - 1 \
        else None

    alpha_k = alpha_k_linear(k, N)
    resid = _linear_equation_residual(kernel, k, norm, alpha_k)
    prof = RadialProfile(
        kernel.grid, vals,
        derivatives=np.vstack([vals, dvals]) if dvals is not None else None,
        y0=None, meta={"parity": "even" if k % 2 == 0 else "odd", "N": N})
    return NonlinearEigenfunction(
        profile=prof, y0=None, n=0.0, N=N, k=k, alpha=alpha_k,
        normalization=1.0,
        diagnostics={"interior_residual": resid, "converged": True,
                     "residuals": [0.0]})


def _linear_equation_residual(kernel: Kernel, k: int, norm: float,
                              alpha_k: float) -> float:
    """Relative residual of lap^5 f + (1/10) y f' + alpha_k f = 0."""
    y = np.linspace(0.25, 0.8 * kernel.grid.ymax, 301)
    f10 = kernel.radial(y, 0, k + 10)
    f1 = kernel.radial(y, 0, k + 1)
    f = kernel.radial(y, 0, k)
    resid = f10 + 0.1 * y * f1 + alpha_k * f
    scale = np.max(np.abs(f10)) + np.max(np.abs(0.1 * y * f1)) \
        + alpha_k * np.max(np.abs(f))
    return float(np.max(np.abs(resid)) / scale)


# ---------------------------------------------------------------------------
# masses and sign changes
# ---------------------------------------------------------------------------

def mass(profile: RadialProfile, N: Optional[int] = None) -> float:
    """Surface-measure weighted integral over the (radial) support."""
    N = N or profile.meta.get("N", 1)
    y = profile.grid.points
    f = profile.values
    return _SURFACE[N] * float(np.trapezoid(f * y ** (N - 1), y))


def check_mass_conservation(exponents: SimilarityExponents) -> bool:
    return abs(-exponents.alpha + exponents.beta * exponents.N) < 1e-14


def sign_changes(values: np.ndarray, dead_band: float) -> int:
    """Strict sign alternations ignoring the dead band around zero."""
    live = values[np.abs(values) > dead_band]
    if live.size < 2:
        return 0
    s = np.sign(live)
    return int(np.sum(s[:-1] * s[1:] < 0))


def interface_sign_changes(eig: NonlinearEigenfunction,
                           fraction: float = 0.2) -> int:
    """Sign changes in the outer ``fraction`` of the support."""
    prof = eig.profile
    cut = (1.0 - fraction) * (eig.y0 or prof.grid.ymax)
    vals = prof.values[prof.grid.points >= cut]
    band = 10.0 * eig.diagnostics.get("delta", 1e-10)
    return sign_changes(vals, band)
