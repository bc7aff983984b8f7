"""Sampling grids for the similarity variable y."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Strictly increasing, finite, nonempty set of sample points.

    ``spacing`` describes how the points were generated: "uniform" for
    equispaced grids, "panel-composite" for anything assembled from
    quadrature panels or other nonuniform constructions.
    """

    points: np.ndarray
    spacing: str = "uniform"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("grid needs a nonempty 1-d point array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be finite")
        if pts.size > 1 and not np.all(np.diff(pts) > 0):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, a: float, b: float, num: int) -> "Grid":
        if num < 2 or not b > a:
            raise ValueError("need num >= 2 and b > a")
        return cls(np.linspace(a, b, num), "uniform")

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def ymax(self) -> float:
        return float(self.points[-1])

    def __len__(self) -> int:
        return self.points.size
