"""The three special functions the package needs: gamma and J_0, J_1/2, J_1.

Thin wrappers over scipy.special with the parameter ranges pinned down;
anything outside raises :class:`UnsupportedParameterError` instead of
silently returning nan.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

SUPPORTED_BESSEL_ORDERS = (0.0, 0.5, 1.0)


class UnsupportedParameterError(ValueError):
    pass


def gamma(x):
    """Gamma function for x > 0."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise UnsupportedParameterError("gamma supported for x > 0 only")
    out = _sp.gamma(arr)
    return float(out) if np.isscalar(x) else out


def bessel_j(order: float, x):
    """Bessel J of order 0, 1/2 or 1 for x >= 0."""
    if order not in SUPPORTED_BESSEL_ORDERS:
        raise UnsupportedParameterError(
            f"bessel_j order {order} unsupported; supported: {SUPPORTED_BESSEL_ORDERS}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise UnsupportedParameterError("bessel_j supported for x >= 0 only")
    out = _sp.jv(order, arr)
    return float(out) if np.isscalar(x) else out
