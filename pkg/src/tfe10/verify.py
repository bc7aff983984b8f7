"""Invariant battery behind ``tfe10 verify``.

Each check returns (ok, one-line detail); the battery favors fast,
distinct probes of every module over exhaustive sweeps (the test suite
carries those).
"""

from __future__ import annotations

import numpy as np

from .core.grids import Grid
from .core.conics import Conic, conic_intersections
from .core.quadrature import QuadratureRule, quadrature
from .core.rootfind import solve_system
from . import spectral


def run_verification() -> list:
    table = []

    def check(name, fn):
        try:
            ok, detail = fn()
        except Exception as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        table.append((name, bool(ok), detail))

    kern = spectral.kernel_1d(Grid.uniform(0.0, 40.0, 2048), jmax=8)

    def kernel_mass():
        m = kern.mass()
        return abs(m - 1.0) < 1e-8, f"mass = {m:.12f}"

    def kernel_equation():
        r = kern.ode_residual()
        return r < 1e-6, f"relative residual {r:.2e}"

    def decay():
        res = spectral.decay_rate(kern)
        rel = abs(res["d_fit"] - res["d_formula"]) / res["d_formula"]
        return rel <= 0.02 and res["preferred_exponent"] == 10.0 / 9.0, \
            f"d_fit={res['d_fit']:.5f} rel={rel:.4f}"

    def biorth():
        M = spectral.biorthogonality_matrix(6, kern)
        err = float(np.max(np.abs(M - np.eye(7))))
        return err <= 1e-6, f"max deviation {err:.2e}"

    def quadrature_basics():
        val = quadrature(lambda k: np.exp(-k ** 10),
                         QuadratureRule.uniform(0, 2.5, 20))
        from scipy.special import gamma
        return abs(val - gamma(1.1)) < 1e-10, f"Gamma(1.1) to {val:.9f}"

    def newton():
        res = solve_system(lambda v: np.array([v[0] ** 2 + v[1] ** 2 - 1.0,
                                               v[0] - v[1]]), [1.0, 0.0])
        return res.converged and res.residual_norm <= 1e-10, \
            f"{res.iterations} iterations"

    def conics():
        pts = conic_intersections(Conic(A=1, B=1, F0=-1),
                                  Conic(A=1, B=1, C=-2, F0=0))
        rng = np.random.default_rng(3)
        bound = True
        for _ in range(25):
            try:
                p = conic_intersections(Conic(*rng.uniform(-1, 1, 6)),
                                        Conic(*rng.uniform(-1, 1, 6)))
                bound &= len(p) <= 4
            except Exception:
                continue
        return len(pts) == 2 and bound, "circle pair + count bound"

    def eigen_values():
        ok = (spectral.eigenvalue_linear(2) == -0.2
              and spectral.eigenvalue_linear(7) == -0.7)
        return ok, "lambda_k = -k/10"

    def adjoint():
        import math
        p = spectral.adjoint_polynomial(spectral.MultiIndex.of(10), N=1)
        c = p.coeffs_1d() * math.sqrt(math.factorial(10))
        return abs(c[0] + math.factorial(10)) < 1e-6 and abs(c[10] - 1) < 1e-12, \
            "degree-10 correction"

    def linear_family():
        from .similarity import solve_fk_linear
        worst = 0.0
        for k in range(4):
            eig = solve_fk_linear(k, kernel=kern)
            worst = max(worst, eig.diagnostics["interior_residual"])
        return worst <= 1e-5, f"worst equation residual {worst:.2e}"

    def profile_n1():
        from .similarity import solve_f0
        eig = solve_f0(1.0, 1)
        d = eig.diagnostics
        ok = d["converged"] and max(abs(r) for r in d["residuals"]) <= 1e-8
        return ok, f"y0 = {eig.y0:.5f}"

    def mu10_1d():
        from .branching import mu10
        rep = mu10(1, kern)
        return abs(rep["mu10"] + 0.01) < 1e-3, f"mu10 = {rep['mu10']:.6f}"

    def exponent_identities():
        from .unstable import exponents_unstable, p_critical
        rng = np.random.default_rng(11)
        worst = 0.0
        for _ in range(200):
            n = rng.uniform(0, 2)
            p = n + 1 + rng.uniform(0.05, 9)
            i1, i2 = exponents_unstable(n, p).identities()
            worst = max(worst, abs(i1), abs(i2))
        cross = abs(exponents_unstable(1.0, p_critical(1.0, 1), 1).alpha
                    - 1.0 / 11.0)
        return worst < 1e-13 and cross < 1e-14, f"worst identity {worst:.1e}"

    def symbol_band():
        from .unstable import unstable_symbol
        k = np.linspace(1e-3, 2.5, 1000)
        vals = unstable_symbol(k)
        inside = vals[k < 1.0]
        outside = vals[k > 1.0]
        return bool(np.all(inside > 0) and np.all(outside < 0)), \
            "positive exactly on (0, 1)"

    def quadratic_counts():
        from .branching import QuadraticBranchProblem, quadratic_branch_count
        rng = np.random.default_rng(5)
        ok = True
        for _ in range(200):
            A, B, C = rng.uniform(-1, 1, 3)
            if abs(A) < 1e-3:
                continue
            rep = quadratic_branch_count(QuadraticBranchProblem(A, B, C))
            roots = np.roots([A, B, C])
            real = roots[np.abs(roots.imag) < 1e-12].real
            expect = int(np.sum((real >= 0) & (real <= 1)))
            ok &= rep["count"] == expect
        return ok, "200 random quadratics vs closed form"

    check("kernel normalization", kernel_mass)
    check("kernel equation residual", kernel_equation)
    check("decay law", decay)
    check("biorthogonality (k<=6)", biorth)
    check("quadrature", quadrature_basics)
    check("newton", newton)
    check("conic intersections", conics)
    check("linear eigenvalues", eigen_values)
    check("adjoint polynomials", adjoint)
    check("linear eigenfamily", linear_family)
    check("nonlinear profile n=1", profile_n1)
    check("branching mu10 (1d)", mu10_1d)
    check("unstable exponents", exponent_identities)
    check("unstable symbol band", symbol_band)
    check("quadratic branch counts", quadratic_counts)
    return table
