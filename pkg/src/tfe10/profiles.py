"""Shared data types: multi-indices and sampled radial profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core.grids import Grid


@dataclass(frozen=True)
class MultiIndex:
    """beta in N^d indexing eigenpairs; carries |beta| and sqrt(beta!)."""

    entries: tuple

    def __post_init__(self):
        ent = tuple(int(e) for e in self.entries)
        if any(e < 0 for e in ent):
            raise ValueError("multi-index entries must be >= 0")
        if len(ent) == 0:
            raise ValueError("multi-index needs at least one entry")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def of(cls, *entries) -> "MultiIndex":
        if len(entries) == 1 and isinstance(entries[0], (tuple, list)):
            entries = tuple(entries[0])
        return cls(tuple(entries))

    @property
    def order(self) -> int:
        return sum(self.entries)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def factorial(self) -> int:
        out = 1
        for e in self.entries:
            out *= math.factorial(e)
        return out

    def sqrt_factorial(self) -> float:
        return math.sqrt(self.factorial())

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


@dataclass
class RadialProfile:
    """Profile f(y) sampled on a radial (y >= 0) or full-line grid.

    ``derivatives`` optionally holds a table of radial derivatives, one
    row per order starting at 0 (so ``derivatives[0]`` duplicates
    ``values``).  ``y0`` is the interface location; ``None`` encodes an
    infinite support.
    """

    grid: Grid
    values: np.ndarray
    derivatives: Optional[np.ndarray] = None
    y0: Optional[float] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.points.shape:
            raise ValueError("values must match grid shape")
        if self.derivatives is not None:
            self.derivatives = np.asarray(self.derivatives, dtype=float)
            if self.derivatives.shape[1] != self.grid.size:
                raise ValueError("derivative table must match grid size")

    @property
    def y(self) -> np.ndarray:
        return self.grid.points

    def deriv(self, j: int) -> np.ndarray:
        if j == 0:
            return self.values
        if self.derivatives is None or j >= self.derivatives.shape[0]:
            raise ValueError(f"derivative order {j} not tabulated")
        return self.derivatives[j]

    def interp(self, y) -> np.ndarray:
        return np.interp(y, self.grid.points, self.values)
