import math

import numpy as np
import pytest
from fractions import Fraction
from scipy.special import gamma as scipy_gamma

from tfe10.core.grids import Grid
from tfe10.core.quadrature import QuadratureRule, quadrature
from tfe10.profiles import MultiIndex, RadialProfile
from tfe10 import spectral
from tfe10.spectral import (InsufficientDomainError, UnsupportedOrderError,
                            adjoint_polynomial, biorthogonality_matrix,
                            decay_constants, decay_rate, eigenfunction,
                            eigenvalue_linear, evolve_linear, kernel_1d,
                            kernel_radial, levin_u, moments,
                            oscillatory_integral, rescaled_convergence)


# ---------------------------------------------------------------- kernel ---

def test_kernel_normalization(kernel60):
    assert abs(kernel60.mass() - 1.0) < 1e-8


def test_kernel_value_at_origin(kernel60):
    # closed-form reduction of the cosine integral at y=0:
    # F(0) = (1/pi) int exp(-k^10) dk = Gamma(1.1)/pi
    assert kernel60.values[0] == pytest.approx(scipy_gamma(1.1) / np.pi,
                                               rel=1e-12)


def test_kernel_even(kernel60):
    y = np.array([0.5, 1.7, 3.2, 9.1])
    assert kernel60.deriv(0, y) == pytest.approx(kernel60.deriv(0, -y), rel=1e-13)
    # odd derivatives are odd functions
    assert kernel60.deriv(1, y) == pytest.approx(-kernel60.deriv(1, -y), rel=1e-13)


def test_kernel_ode_residual(kernel60):
    assert kernel60.ode_residual() < 1e-6


def test_kernel_flags_clean(kernel60):
    assert kernel60.flags.sum() == 0


def test_kernel_radial_matches_1d(kernel60):
    k1 = kernel_radial(1, Grid.uniform(0.0, 12.0, 256))
    ref = kernel60.radial(k1.grid.points, 0, 0)
    assert np.max(np.abs(k1.values - ref)) < 1e-10


def test_kernel_radial_2d_mass():
    k2 = kernel_radial(2, Grid.uniform(0.0, 30.0, 512))
    assert abs(k2.mass() - 1.0) < 1e-6


def test_kernel_radial_3d_origin_positive():
    k3 = kernel_radial(3, Grid.uniform(0.0, 12.0, 128))
    # direct quadrature oracle: F3(0) = (1/(2 pi^2)) int k^2 exp(-k^10) dk
    oracle = quadrature(lambda k: k * k * np.exp(-k ** 10),
                        QuadratureRule.uniform(0, 2.5, 20)) / (2 * np.pi ** 2)
    assert oracle > 0
    assert k3.values[0] == pytest.approx(oracle, rel=1e-10)
    assert k3.values[0] > 0


def test_kernel_radial_bad_dimension():
    with pytest.raises(UnsupportedOrderError):
        kernel_radial(4)


def test_gaussian_limit_m1():
    # m=1 kernel is the heat kernel at t=1: exp(-y^2/4)/sqrt(4 pi)
    k = kernel_1d(Grid.uniform(0.0, 12.0, 256), m=1, jmax=2)
    y = k.grid.points
    ref = np.exp(-y ** 2 / 4.0) / np.sqrt(4.0 * np.pi)
    assert np.max(np.abs(k.values - ref)) < 1e-12


# ----------------------------------------------------------- eigenvalues ---

@pytest.mark.parametrize("k,expected", [(0, 0.0), (2, -0.2), (7, -0.7)])
def test_eigenvalue_linear(k, expected):
    assert eigenvalue_linear(k) == pytest.approx(expected, abs=1e-15)


# --------------------------------------------------------- eigenfunctions ---

def test_eigenfunction_zero_is_kernel(kernel60):
    psi0 = eigenfunction(MultiIndex.of(0), kernel60)
    assert np.array_equal(psi0.values, kernel60.values)


def test_eigenfunction_first_is_odd_derivative(kernel60):
    psi1 = eigenfunction(MultiIndex.of(1), kernel60)
    assert np.array_equal(psi1.values, -kernel60.table[1])
    assert psi1.meta["parity"] == "odd"


def test_eigenfunction_order_cap(kernel60):
    with pytest.raises(UnsupportedOrderError):
        eigenfunction(MultiIndex.of(10), kernel60)


def test_eigenfunctions_integrate_to_zero(kernel110):
    # <psi_k, psi*_0> = 0 for k >= 1
    for k in range(1, 7):
        if k % 2 == 1:
            continue  # odd parity: integral vanishes identically
        prof = eigenfunction(MultiIndex.of(k), kernel110)
        m0 = moments(prof, 0)[0]
        assert abs(m0) < 1e-7, f"k={k}: {m0}"


# ---------------------------------------------------- adjoint polynomials ---

def test_adjoint_cubic_1d():
    p = adjoint_polynomial(MultiIndex.of(3), N=1)
    assert p.coeffs_1d() == pytest.approx(
        np.array([0, 0, 0, 1.0]) / math.sqrt(6.0))


def test_adjoint_degree_ten_correction():
    p = adjoint_polynomial(MultiIndex.of(10), N=1)
    c = p.coeffs_1d() * math.sqrt(math.factorial(10))
    expected = np.zeros(11)
    expected[10] = 1.0
    expected[0] = -math.factorial(10)  # single correction term
    assert c == pytest.approx(expected)


def test_adjoint_2d_linear():
    p = adjoint_polynomial(MultiIndex.of(1, 0), N=2)
    y1 = np.array([0.3, -1.2])
    y2 = np.array([0.7, 0.4])
    assert p(y1, y2) == pytest.approx(y1)


def _apply_adjoint_operator(terms, N, m):
    """Independent oracle: apply lap^m - (1/2m) y.grad to a monomial dict."""
    out = {}

    def add(expo, c):
        out[expo] = out.get(expo, Fraction(0)) + c

    lap = dict(terms)
    for _ in range(m):
        nxt = {}
        for expo, c in lap.items():
            for i in range(N):
                if expo[i] >= 2:
                    e2 = list(expo)
                    e2[i] -= 2
                    key = tuple(e2)
                    nxt[key] = nxt.get(key, Fraction(0)) + c * expo[i] * (expo[i] - 1)
        lap = nxt
    for expo, c in lap.items():
        add(expo, c)
    for expo, c in terms.items():
        add(expo, -Fraction(sum(expo), 2 * m) * c)
    return {e: c for e, c in out.items() if c != 0}


@pytest.mark.parametrize("beta", [(0,), (3,), (10,), (14,), (20,)])
def test_adjoint_eigen_relation_1d(beta):
    # B* psi* = -(|beta|/10) psi* checked in exact rational arithmetic
    m = 5
    p = adjoint_polynomial(MultiIndex.of(beta), N=1, m=m)
    lhs = _apply_adjoint_operator(p.terms, 1, m)
    lam = -Fraction(sum(beta), 2 * m)
    rhs = {e: lam * c for e, c in p.terms.items() if lam * c != 0}
    assert lhs == rhs


@pytest.mark.parametrize("beta", [(1, 1), (2, 0), (5, 6), (10, 2)])
def test_adjoint_eigen_relation_2d(beta):
    m = 5
    p = adjoint_polynomial(MultiIndex.of(beta), N=2, m=m)
    lhs = _apply_adjoint_operator(p.terms, 2, m)
    lam = -Fraction(sum(beta), 2 * m)
    rhs = {e: lam * c for e, c in p.terms.items() if lam * c != 0}
    assert lhs == rhs


@pytest.mark.parametrize("k", [2, 3, 4, 6, 7])
def test_adjoint_reduces_to_hermite_at_m1(k):
    # m=1 kernel weight is exp(-y^2/4); the matching classical family is
    # 2^(k/2) He_k(y / sqrt(2)) in probabilists' normalization
    p = adjoint_polynomial(MultiIndex.of(k), N=1, m=1)
    mine = p.coeffs_1d() * math.sqrt(math.factorial(k))
    he = np.zeros(k + 1)
    he[k] = 1.0
    ref_at = np.polynomial.hermite_e.hermeval(
        np.linspace(-2, 2, k + 1) / math.sqrt(2.0), he) * 2 ** (k / 2.0)
    mine_at = np.polynomial.polynomial.polyval(np.linspace(-2, 2, k + 1), mine)
    assert mine_at == pytest.approx(ref_at, rel=1e-12, abs=1e-12)


def test_adjoint_order_cap():
    with pytest.raises(UnsupportedOrderError):
        adjoint_polynomial(MultiIndex.of(21), N=1)


# -------------------------------------------------------- biorthogonality ---

def test_biorthogonality_identity(kernel60):
    M = biorthogonality_matrix(8, kernel60)
    assert np.max(np.abs(M - np.eye(9))) < 1e-6


def test_biorthogonality_diagonal_parts_oracle(kernel60):
    # independent oracle: k-fold integration by parts gives
    # int F^(k) y^k = (-1)^k k! int F, so the diagonal must equal int F
    M = biorthogonality_matrix(4, kernel60)
    total_mass = kernel60.mass()
    for k in range(5):
        assert M[k, k] == pytest.approx(total_mass, abs=1e-8)


def test_biorthogonality_domain_guard(kernel60):
    with pytest.raises(InsufficientDomainError):
        biorthogonality_matrix(8, kernel60, tail_tol=1e-18)


# ------------------------------------------------------------- decay rate ---

def test_decay_formula_value(kernel60):
    # direct evaluation of (9/10)(1/10)^(1/9) cos(4 pi / 9)
    oracle = 0.9 * 0.1 ** (1.0 / 9.0) * math.cos(4.0 * math.pi / 9.0)
    assert kernel60.d == pytest.approx(oracle, rel=1e-14)
    assert kernel60.d == pytest.approx(0.12100, abs=5e-6)


def test_decay_fit_matches_formula(kernel60):
    res = decay_rate(kernel60)
    assert abs(res["d_fit"] - res["d_formula"]) / res["d_formula"] <= 0.02


def test_envelope_extrema_count(kernel60):
    ys, _ = spectral._envelope_extrema(kernel60)
    assert (ys <= 15.0).sum() >= 5


def test_decay_exponent_selection(kernel60):
    res = decay_rate(kernel60)
    r2 = res["r2_by_exponent"]
    p_true = 10.0 / 9.0
    assert res["preferred_exponent"] == pytest.approx(p_true)
    assert r2[p_true] > r2[1.0] and r2[p_true] > r2[1.25]


def test_decay_insufficient_tail():
    small = kernel_1d(Grid.uniform(0.0, 10.0, 256), jmax=1)
    with pytest.raises(spectral.InsufficientTailError):
        decay_rate(small)


# ---------------------------------------------------------------- moments ---

def test_moments_of_kernel(kernel110):
    ms = moments(kernel110.profile(), 2)
    assert ms[0] == pytest.approx(1.0, abs=1e-8)
    assert ms[1] == pytest.approx(0.0, abs=1e-12)


def test_levin_on_alternating_series():
    terms = np.array([(-1.0) ** m / (m + 1.0) for m in range(20)])
    val, err = levin_u(terms)
    assert val == pytest.approx(math.log(2.0), abs=1e-8)
    assert err >= 0


def test_oscillatory_integral_known_value():
    # int_0^inf cos(y) exp(-y/20) dy = (1/20) / (1 + 1/400)
    a = 0.05
    f = lambda y: np.cos(y) * np.exp(-a * y)
    val, _ = oscillatory_integral(f, 0.0, 10.0, 120.0)
    assert val == pytest.approx(a / (1 + a * a), abs=1e-9)


# --------------------------------------------------------------- evolution --

def test_evolve_kernel_semigroup(kernel60):
    # evolving F by t=1 gives the kernel at t=2, i.e. the rescaled
    # profile 2^(-1/10) F(x 2^(-1/10))
    x = np.linspace(-10.0, 10.0, 401)
    out = evolve_linear(kernel60.profile(), 1.0, x_out=x)
    s = 2.0 ** (-0.1)
    ref = s * kernel60.deriv(0, x * s)
    assert np.max(np.abs(out.values - ref)) < 1e-10


def test_evolve_conserves_mass(kernel110):
    prof = kernel110.profile()
    out = evolve_linear(prof, 3.0)
    m_in = moments(prof, 0)[0]
    y, f = out.grid.points, out.values
    m_out = float(np.trapezoid(f, y))
    assert m_out == pytest.approx(m_in, abs=1e-9)


def test_evolve_zero_mean_stays_zero_mean():
    y = np.linspace(-20.0, 20.0, 1601)
    u0 = RadialProfile(Grid(y), y * np.exp(-y ** 2), meta={"parity": "full"})
    out = evolve_linear(u0, 2.0)
    assert abs(np.trapezoid(out.values, out.grid.points)) < 1e-10


# ------------------------------------------------- rescaled convergence ----

def _bump(shift=0.0):
    y = np.linspace(-25.0, 25.0, 2001)
    vals = np.exp(-((y - shift) ** 2)) / math.sqrt(math.pi)
    return RadialProfile(Grid(y), vals, meta={"parity": "full"})


def test_fixed_point_of_rescaled_flow(kernel60, kernel110):
    # long-domain samples of the kernel: truncation barely perturbs the
    # moments, so the rescaled flow must sit still
    res = rescaled_convergence(kernel110.profile(), np.linspace(1.0, 10.0, 4),
                               kernel60, fit_from=0.0)
    assert np.max(res["error"]) < 1e-6


def test_generic_rate_one_tenth(kernel60):
    res = rescaled_convergence(_bump(shift=0.5), np.linspace(5, 45, 11),
                               kernel60, fit_from=10.0)
    assert abs(res["rate"] - 0.1) <= 0.01


def test_zero_first_moment_rate_two_tenths(kernel60):
    res = rescaled_convergence(_bump(shift=0.0), np.linspace(5, 45, 11),
                               kernel60, fit_from=10.0)
    assert abs(res["rate"] - 0.2) <= 0.02


def test_short_range_warns(kernel60):
    with pytest.warns(spectral.InsufficientRangeWarning):
        rescaled_convergence(_bump(0.5), np.linspace(1.0, 6.0, 4), kernel60,
                             fit_from=1.0)


def test_expansion_completeness(kernel60):
    # truncated eigen-expansion approaches the true rescaled evolution
    # monotonically in the truncation order at fixed tau = 1
    u0 = _bump(shift=0.3)
    tau = 1.0
    t = math.exp(tau)
    lam = t ** 0.1
    y = np.linspace(-8.0, 8.0, 321)
    w_true = lam * evolve_linear(u0, t, x_out=y * lam).values
    ms = moments(u0, 9)
    errs = []
    for K in (1, 3, 6, 10):
        w_K = np.zeros_like(y)
        for k in range(K):
            psi_k = ((-1.0) ** k / math.sqrt(math.factorial(k))) \
                * kernel60.deriv(k, y)
            w_K += math.exp(-k * tau / 10.0) * ms[k] * psi_k
        errs.append(float(np.sqrt(np.trapezoid((w_K - w_true) ** 2, y))))
    assert all(e1 > e2 for e1, e2 in zip(errs[:-1], errs[1:]))
