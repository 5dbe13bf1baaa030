"""Brute-force oracles used by ``--oracle-check`` and the test-suite.

These are deliberately naive: enumeration over grids and boxes, integer
numpy arithmetic only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import lcm
from typing import Sequence

import numpy as np

from .fan import PolyhedralComplex
from .lattice import dot


def grid(rank: int, half_width: int = 10, denominator: int = 2) -> tuple[np.ndarray, int]:
    """Integer numerators X of the grid {-half_width..half_width}^rank / denominator."""
    axis = np.arange(-half_width, half_width + 1, dtype=np.int64)
    mesh = np.meshgrid(*([axis] * rank), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1), denominator


def min_attained_twice(f, X: np.ndarray, q: int) -> np.ndarray:
    """Mask of grid points w = X/q where the minimum over terms is attained at least twice."""
    vals = [c.valuation for c in f.terms.values()]
    L = reduce(lcm, (v.denominator for v in vals), 1)
    cols = []
    for m, v in zip(f.terms, vals):
        const = int(v * q * L)
        cols.append(X @ (np.array(m, dtype=np.int64) * L) + const)
    V = np.stack(cols, axis=1)
    low = V.min(axis=1, keepdims=True)
    return (V == low).sum(axis=1) >= 2


def complex_mask(C: PolyhedralComplex, X: np.ndarray, q: int) -> np.ndarray:
    """Mask of grid points X/q lying in the complex, from the cells' H-representations."""
    mask = np.zeros(len(X), dtype=bool)
    for P in C.maximal_cells:
        inside = np.ones(len(X), dtype=bool)
        for h in P.hom.normals:
            inside &= X @ np.array(h[:-1], dtype=np.int64) + h[-1] * q >= 0
        for e in P.hom.equations:
            inside &= X @ np.array(e[:-1], dtype=np.int64) + e[-1] * q == 0
        mask |= inside
    return mask


@dataclass(frozen=True)
class GridReport:
    probes: int
    in_tropical: int
    disagreements: tuple[tuple[Fraction, ...], ...]

    @property
    def agree(self) -> bool:
        return not self.disagreements


def hypersurface_grid_check(f, hypersurface, half_width: int = 10, denominator: int = 2) -> GridReport:
    X, q = grid(f.rank, half_width, denominator)
    oracle = min_attained_twice(f, X, q)
    computed = complex_mask(hypersurface.complex, X, q)
    bad = np.nonzero(oracle != computed)[0]
    pts = tuple(tuple(Fraction(int(x), q) for x in X[i]) for i in bad)
    return GridReport(len(X), int(oracle.sum()), pts)


def brute_force_integer_solutions(A: Sequence[Sequence[int]], b: Sequence[int], bound: int):
    """All integer x with |x_i| <= bound and A x = b."""
    n = len(A[0])
    return [x for x in product(range(-bound, bound + 1), repeat=n) if all(dot(row, x) == bi for row, bi in zip(A, b))]
