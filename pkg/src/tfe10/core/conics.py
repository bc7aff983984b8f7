"""Real intersection points of two conics via the Sylvester resultant.

A conic here is A*u^2 + B*v^2 + C*u + D*v + E*u*v + F0 = 0 in the plane
(u, v); the variable names follow the branching systems where (u, v) are
eigenspace coefficients.  Intersections are found by eliminating one
variable through the resultant (a quartic in the other), then
back-substituting and polishing with Newton steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class IdenticalConicsError(ValueError):
    """The two conics are proportional: infinitely many intersections."""


class ZeroResultantError(ValueError):
    """Resultant vanished identically (shared component) without the
    conics being proportional."""


@dataclass(frozen=True)
class Conic:
    """Coefficients of A u^2 + B v^2 + C u + D v + E u v + F0."""

    A: float = 0.0
    B: float = 0.0
    C: float = 0.0
    D: float = 0.0
    E: float = 0.0
    F0: float = 0.0

    def __post_init__(self):
        if max(abs(self.A), abs(self.B), abs(self.E)) == 0.0:
            raise ValueError("degenerate: A, B, E all zero is not a conic")

    def coeffs(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C, self.D, self.E, self.F0])

    def __call__(self, u: float, v: float) -> float:
        return (self.A * u * u + self.B * v * v + self.C * u
                + self.D * v + self.E * u * v + self.F0)

    def gradient(self, u: float, v: float) -> np.ndarray:
        return np.array([2.0 * self.A * u + self.C + self.E * v,
                         2.0 * self.B * v + self.D + self.E * u])

    def discriminant(self) -> float:
        """Standard conic-type discriminant E^2 - 4AB."""
        return self.E ** 2 - 4.0 * self.A * self.B

    def is_degenerate(self, tol: float = 1e-12) -> bool:
        m = np.array([[self.A, self.E / 2, self.C / 2],
                      [self.E / 2, self.B, self.D / 2],
                      [self.C / 2, self.D / 2, self.F0]])
        scale = max(np.max(np.abs(m)), 1e-300)
        return bool(abs(np.linalg.det(m / scale)) < tol)

    def classify(self, tol: float = 1e-9) -> str:
        """"ellipse" / "circle" / "parabola" / "hyperbola" / "degenerate"."""
        if self.is_degenerate():
            return "degenerate"
        disc = self.discriminant()
        scale = max(abs(self.A), abs(self.B), abs(self.E)) ** 2
        if abs(disc) <= tol * scale:
            return "parabola"
        if disc < 0:
            if abs(self.A - self.B) <= tol * scale ** 0.5 and abs(self.E) <= tol * scale ** 0.5:
                return "circle"
            return "ellipse"
        return "hyperbola"


# -- polynomial helpers (ascending coefficient arrays) ---------------------

def _pmul(p, q):
    return np.convolve(p, q)


def _padd(p, q):
    n = max(len(p), len(q))
    out = np.zeros(n)
    out[:len(p)] += p
    out[:len(q)] += q
    return out


def _pdet(mat):
    """Determinant of a small matrix of polynomials, by minor expansion."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    acc = np.zeros(1)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = _pmul(mat[0][j], _pdet(minor))
        acc = _padd(acc, term if j % 2 == 0 else -term)
    return acc


def _quad_coeffs_in_v(c: Conic):
    """Conic as p2(u) v^2 + p1(u) v + p0(u)."""
    return (np.array([c.B]),
            np.array([c.D, c.E]),
            np.array([c.F0, c.C, c.A]))


def _quad_coeffs_in_u(c: Conic):
    return (np.array([c.A]),
            np.array([c.C, c.E]),
            np.array([c.F0, c.D, c.B]))


def _sylvester_resultant(P1, P2):
    p2, p1, p0 = P1
    q2, q1, q0 = P2
    z = np.zeros(1)
    mat = [
        [p2, p1, p0, z],
        [z, p2, p1, p0],
        [q2, q1, q0, z],
        [z, q2, q1, q0],
    ]
    return _pdet(mat)


def _real_roots(poly_asc, tol=1e-9):
    c = np.array(poly_asc, dtype=float)
    scale = np.max(np.abs(c))
    if scale == 0:
        return None  # identically zero
    c = c / scale
    nz = np.nonzero(np.abs(c) > 1e-13)[0]
    if nz.size == 0:
        return None
    c = c[: nz[-1] + 1]
    if c.size == 1:
        return np.array([])  # nonzero constant: no roots
    roots = np.roots(c[::-1])
    keep = np.abs(roots.imag) <= tol * (1.0 + np.abs(roots.real))
    return np.unique(np.round(roots[keep].real, 12))


def _rotate45(c: Conic) -> Conic:
    s = 1.0 / np.sqrt(2.0)
    return Conic(A=(c.A + c.B + c.E) / 2.0,
                 B=(c.A + c.B - c.E) / 2.0,
                 C=(c.C + c.D) * s,
                 D=(c.D - c.C) * s,
                 E=(c.B - c.A),
                 F0=c.F0)


def _unrotate45_point(x, y):
    s = 1.0 / np.sqrt(2.0)
    return ((x - y) * s, (x + y) * s)


def _polish(c1: Conic, c2: Conic, u, v, iters=8):
    p = np.array([u, v], dtype=float)
    for _ in range(iters):
        r = np.array([c1(*p), c2(*p)])
        J = np.vstack([c1.gradient(*p), c2.gradient(*p)])
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        p = p + step
        if np.max(np.abs(step)) < 1e-14 * (1.0 + np.max(np.abs(p))):
            break
    return p


def conic_intersections(c1: Conic, c2: Conic, residual_tol: float = 1e-9,
                        _depth: int = 0) -> list[tuple[float, float]]:
    """All real common points of two nondegenerate conics.

    Returns 0 to 4 points, each back-substituted into both conics with
    residual below ``residual_tol``.  Proportional conics raise
    :class:`IdenticalConicsError`; an identically vanishing resultant for
    non-proportional conics raises :class:`ZeroResultantError`.
    """
    a1, a2 = c1.coeffs(), c2.coeffs()
    n1, n2 = np.linalg.norm(a1), np.linalg.norm(a2)
    cross = np.linalg.norm(np.outer(a1 / n1, a2 / n2) - np.outer(a2 / n2, a1 / n1))
    if cross < 1e-12:
        raise IdenticalConicsError("conics are proportional; intersection is a full conic")

    scale = max(np.max(np.abs(a1)), np.max(np.abs(a2)))
    lead_v = max(abs(c1.B), abs(c2.B))
    lead_u = max(abs(c1.A), abs(c2.A))
    if lead_v >= 1e-9 * scale:
        res = _sylvester_resultant(_quad_coeffs_in_v(c1), _quad_coeffs_in_v(c2))
        roots, via = _real_roots(res), "u"
    elif lead_u >= 1e-9 * scale:
        res = _sylvester_resultant(_quad_coeffs_in_u(c1), _quad_coeffs_in_u(c2))
        roots, via = _real_roots(res), "v"
    else:
        # both quadratics are pure cross terms; a 45-degree rotation
        # restores usable leading coefficients
        if _depth > 0:
            raise ValueError("could not normalize leading coefficients")
        pts = conic_intersections(_rotate45(c1), _rotate45(c2),
                                  residual_tol, _depth + 1)
        return [_unrotate45_point(x, y) for (x, y) in pts]

    if roots is None:
        raise ZeroResultantError("resultant identically zero: conics share a component")

    candidates = []
    for r in roots:
        # solve conic1 for the other coordinate at this root
        if via == "u":
            qa, qb, qc = c1.B, c1.E * r + c1.D, c1.A * r * r + c1.C * r + c1.F0
        else:
            qa, qb, qc = c1.A, c1.E * r + c1.C, c1.B * r * r + c1.D * r + c1.F0
        if abs(qa) > 1e-13 * scale:
            disc = qb * qb - 4.0 * qa * qc
            if disc < -1e-7 * (abs(qb * qb) + abs(4 * qa * qc) + scale ** 2 * 1e-12):
                continue
            sq = np.sqrt(max(disc, 0.0))
            others = [(-qb + sq) / (2 * qa), (-qb - sq) / (2 * qa)]
        elif abs(qb) > 1e-13 * scale:
            others = [-qc / qb]
        else:
            continue
        for w in others:
            u, v = (r, w) if via == "u" else (w, r)
            candidates.append(_polish(c1, c2, u, v))

    mag = 1.0 + max([np.max(np.abs(p)) for p in candidates], default=0.0)
    pts: list[tuple[float, float]] = []
    for p in candidates:
        if abs(c1(*p)) > residual_tol * scale * mag ** 2:
            continue
        if abs(c2(*p)) > residual_tol * scale * mag ** 2:
            continue
        if any(np.hypot(p[0] - q[0], p[1] - q[1]) < 1e-7 * mag for q in pts):
            continue
        pts.append((float(p[0]), float(p[1])))
    if len(pts) > 4:
        # numerically split multiple roots; merge the closest pair until
        # the Bezout bound holds
        while len(pts) > 4:
            dmin, pair = None, None
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    d = np.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1])
                    if dmin is None or d < dmin:
                        dmin, pair = d, (i, j)
            i, j = pair
            pts[i] = ((pts[i][0] + pts[j][0]) / 2, (pts[i][1] + pts[j][1]) / 2)
            del pts[j]
    return pts
