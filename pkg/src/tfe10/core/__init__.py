from .grids import Grid
from .quadrature import QuadratureRule, quadrature, quadrature_with_error
from .rootfind import DegenerateRootError, NewtonResult, solve_system
from .conics import Conic, IdenticalConicsError, conic_intersections
from .special import UnsupportedParameterError, bessel_j, gamma

__all__ = [
    "Grid",
    "QuadratureRule",
    "quadrature",
    "quadrature_with_error",
    "NewtonResult",
    "solve_system",
    "DegenerateRootError",
    "Conic",
    "conic_intersections",
    "IdenticalConicsError",
    "gamma",
    "bessel_j",
    "UnsupportedParameterError",
]
