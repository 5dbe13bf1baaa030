"""Rational polyhedral cones and polyhedra.

Cones are kept in both representations: extreme rays plus a lineality basis,
and irredundant inner facet normals plus equations. Conversion between the two
is a double description (Motzkin) elimination over the integers. Polyhedra are
stored through their homogenization, a cone one dimension up.
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .lattice import (
    LatticeContext,
    canonical_basis,
    dot,
    nullspace,
    primitive_integer,
    rank as qrank,
    reduce_modulo,
    rref,
    transpose,
)

DEFAULT_MAX_RANK = 8
DEFAULT_MAX_BOX = 10**5


def max_rank() -> int:
    return int(os.environ.get("TROPCOMP_MAX_RANK", DEFAULT_MAX_RANK))


def max_box() -> int:
    return int(os.environ.get("TROPCOMP_MAX_BOX", DEFAULT_MAX_BOX))


class DeskScaleError(ValueError):
    """Input exceeds the configured desk-scale caps."""


# -- double description ------------------------------------------------------


def _pointed_extreme_rays(G: list[list[int]]) -> list[tuple[int, ...]]:
    """Extreme rays of {y : G y >= 0} where G has full column rank."""
    r = len(G[0])
    # pick r independent rows to seed the iteration
    basis_rows: list[int] = []
    for i in range(len(G)):
        if qrank([G[j] for j in basis_rows + [i]]) > len(basis_rows):
            basis_rows.append(i)
            if len(basis_rows) == r:
                break
    G0 = [G[i] for i in basis_rows]
    # columns of G0^{-1}
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(G0)]
    R, _ = rref(aug)
    inv = [row[r:] for row in R]
    rays = [primitive_integer([inv[i][j] for i in range(r)]) for j in range(r)]
    zeros = [frozenset(basis_rows[k] for k in range(r) if k != j) for j in range(r)]

    for i in range(len(G)):
        if i in basis_rows:
            continue
        g = G[i]
        vals = [dot(g, y) for y in rays]
        pos = [k for k, s in enumerate(vals) if s > 0]
        neg = [k for k, s in enumerate(vals) if s < 0]
        if not neg:
            zeros = [z | {i} if vals[k] == 0 else z for k, z in enumerate(zeros)]
            continue
        new_rays = []
        new_zeros = []
        for k, s in enumerate(vals):
            if s >= 0:
                new_rays.append(rays[k])
                new_zeros.append(zeros[k] | {i} if s == 0 else zeros[k])
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if len(common) < r - 2:
                    continue
                if any(k != p and k != q and common <= zeros[k] for k in range(len(rays))):
                    continue
                sp, sq = vals[p], vals[q]
                y = primitive_integer([sp * b - sq * a for a, b in zip(rays[p], rays[q])])
                new_rays.append(y)
                new_zeros.append(common | {i})
        rays, zeros = new_rays, new_zeros
    return rays


def extreme_rays(
    inequalities: Sequence[Sequence], equations: Sequence[Sequence], n: int
) -> tuple[list[tuple[int, ...]], tuple[tuple[int, ...], ...]]:
    """Generators of {u : <a,u> >= 0 for a in inequalities, <b,u> = 0 for b in equations}.

    Returns (extreme rays, lineality basis); rays are primitive integer vectors,
    taken modulo the lineality space in a fixed complement.
    """
    ineqs = [primitive_integer(a) for a in inequalities]
    ineqs = [a for a in ineqs if any(a)]
    W = nullspace(equations, n) if equations else tuple(
        tuple(int(i == j) for j in range(n)) for i in range(n)
    )
    if not W:
        return [], ()
    k = len(W)
    A = [[dot(a, w) for w in W] for a in ineqs]  # constraints in W-coordinates
    A = [row for row in A if any(row)]
    if not A:
        return [], canonical_basis(W)
    K = nullspace(A, k)
    lineality = canonical_basis([[sum(z[j] * W[j][i] for j in range(k)) for i in range(n)] for z in K]) if K else ()
    Q, _ = rref(A)  # row space basis, z = Q^T y
    Q = [primitive_integer(row) for row in Q]
    G = [[dot(row, q) for q in Q] for row in A]
    ys = _pointed_extreme_rays(G)
    rays = []
    for y in ys:
        z = [sum(y[t] * Q[t][j] for t in range(len(Q))) for j in range(k)]
        u = [sum(z[j] * W[j][i] for j in range(k)) for i in range(n)]
        rays.append(primitive_integer(u))
    return rays, lineality


# -- cones --------------------------------------------------------------------


class Cone:
    """Closed convex rational cone cone(rays) + span(lineality) in Q^rank.

    Both representations are computed at construction; the object is
    immutable afterwards. Equality of two cones as sets is ``same_set``; the
    canonical ``key`` gives the same answer structurally.
    """

    def __init__(self, rays: Iterable[Sequence] = (), lineality: Iterable[Sequence] = (), rank: int | None = None):
        rays = [tuple(Fraction(x) for x in r) for r in rays]
        lineality = [tuple(Fraction(x) for x in l) for l in lineality]
        if rank is None:
            if not rays and not lineality:
                raise ValueError("rank required for the zero cone")
            rank = len((rays or lineality)[0])
        if any(len(v) != rank for v in rays + lineality):
            raise ValueError("generator rank mismatch")
        self.rank = rank
        normals, eqs = extreme_rays(rays, lineality, rank)
        self._set_h(normals, eqs)
        self._set_v(rays + lineality + [tuple(-x for x in l) for l in lineality])

    @classmethod
    def from_inequalities(
        cls, inequalities: Sequence[Sequence], equations: Sequence[Sequence] = (), rank: int | None = None
    ) -> "Cone":
        """Cone {x : <a,x> >= 0, <b,x> = 0}."""
        if rank is None:
            rank = len((list(inequalities) or list(equations))[0])
        rays, lin = extreme_rays(inequalities, equations, rank)
        return cls(rays, lin, rank)

    @classmethod
    def zero(cls, rank: int) -> "Cone":
        return cls((), (), rank)

    @classmethod
    def full(cls, rank: int) -> "Cone":
        return cls((), [tuple(int(i == j) for j in range(rank)) for i in range(rank)], rank)

    def _set_h(self, normals, eqs):
        self.equations = canonical_basis(eqs) if eqs else ()
        E, piv = rref(self.equations) if self.equations else ((), ())
        self._eq_rref = (E, piv)
        reduced = {primitive_integer(reduce_modulo(h, E, piv)) for h in normals}
        self.normals = tuple(sorted(h for h in reduced if any(h)))

    def _set_v(self, generators):
        n = self.rank
        lin = nullspace(list(self.normals) + list(self.equations), n)
        self.lineality = canonical_basis(lin) if lin else ()
        L, piv = rref(self.lineality) if self.lineality else ((), ())
        target = n - len(self.lineality) - 1  # rank of active constraints at an extreme ray
        rays = set()
        for g in generators:
            g = primitive_integer(reduce_modulo(g, L, piv))
            if not any(g) or g in rays:
                continue
            active = [h for h in self.normals if dot(h, g) == 0]
            if qrank(active + list(self.equations)) == target:
                rays.add(g)
        self.rays = tuple(sorted(rays))
        self.key = (n, self.equations, self.normals)

    # -- basic predicates --

    @property
    def dim(self) -> int:
        return self.rank - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    def contains(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(h, x) >= 0 for h in self.normals)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(r) for r in other.rays) and all(
            self.contains(l) and self.contains([-x for x in l]) for l in other.lineality
        )

    def same_set(self, other: "Cone") -> bool:
        return self.rank == other.rank and self.contains_cone(other) and other.contains_cone(self)

    def in_relative_interior(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(h, x) > 0 for h in self.normals)

    def generators(self) -> list[tuple[int, ...]]:
        """Rays plus both signs of the lineality basis."""
        return list(self.rays) + list(self.lineality) + [tuple(-x for x in l) for l in self.lineality]

    def __eq__(self, other):
        return isinstance(other, Cone) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        parts = [f"rays={[list(r) for r in self.rays]}"]
        if self.lineality:
            parts.append(f"lineality={[list(l) for l in self.lineality]}")
        return f"Cone({', '.join(parts)}, rank={self.rank})"

    # -- faces --

    def facets(self) -> list["Cone"]:
        out = []
        for h in self.normals:
            rays = [r for r in self.rays if dot(h, r) == 0]
            out.append(Cone(rays, self.lineality, self.rank))
        return out

    @cached_property
    def faces(self) -> tuple["Cone", ...]:
        """All faces, including the cone itself and its minimal face."""
        seen = {self.key: self}
        frontier = [self]
        while frontier:
            nxt = []
            for c in frontier:
                for f in c.facets():
                    if f.key not in seen:
                        seen[f.key] = f
                        nxt.append(f)
            frontier = nxt
        return tuple(sorted(seen.values(), key=lambda c: (c.dim, c.key)))


def dual_cone(C: Cone) -> Cone:
    """{u : <u, x> >= 0 for all x in C}."""
    return Cone(C.normals, C.equations, C.rank)


def intersect(C1: Cone, C2: Cone) -> Cone:
    if C1.rank != C2.rank:
        raise ValueError("rank mismatch")
    return Cone.from_inequalities(
        list(C1.normals) + list(C2.normals), list(C1.equations) + list(C2.equations), C1.rank
    )


def is_face(F: Cone, C: Cone) -> bool:
    """F is a face of C: F ⊆ C and F = C ∩ u^⊥ for some u supporting C."""
    if F.rank != C.rank or not C.contains_cone(F):
        return False
    gens = F.generators()
    support = [h for h in C.normals if all(dot(h, g) == 0 for g in gens)]
    u = [sum(col) for col in zip(*support)] if support else [0] * C.rank
    smallest = intersect(C, Cone.from_inequalities((), [u], C.rank)) if any(u) else C
    return F.contains_cone(smallest)


def lineality_space(C: Cone) -> tuple[tuple[int, ...], ...]:
    return C.lineality


def relative_interior_point(C: Cone) -> tuple[Fraction, ...]:
    if C.is_zero:
        raise ValueError("the zero cone has no nonzero relative interior point")
    gens = list(C.rays) + list(C.lineality)
    return tuple(Fraction(sum(col)) for col in zip(*gens))


# -- Hilbert bases --------------------------------------------------------------


def hilbert_basis(C: Cone, ctx: LatticeContext | None = None) -> list[tuple[int, ...]]:
    """Minimal generating set of the monoid C ∩ (working lattice of ctx).

    The working lattice is Z^(n-1) ⊕ dZ for ctx.scale = d (Z^n by default).
    """
    scale = Fraction(ctx.scale) if ctx is not None else Fraction(1)
    if ctx is not None and ctx.rank != C.rank:
        raise ValueError("rank mismatch")
    return _hilbert_basis_scaled(C, scale)


def _hilbert_basis_scaled(C: Cone, scale: Fraction) -> list[tuple]:
    """Hilbert basis in the lattice Z^(n-1) ⊕ scale·Z (scale a positive rational)."""
    if not C.is_pointed:
        raise ValueError("Hilbert basis requires a pointed cone")
    if C.rank > min(6, max_rank()):
        raise DeskScaleError(f"rank {C.rank} too large for Hilbert basis enumeration")
    if C.is_zero:
        return []
    n = C.rank

    def to_z(v):  # working-lattice coordinates -> Z^n coordinates
        return tuple(v[:-1]) + (Fraction(v[-1]) / scale,)

    rays = [primitive_integer(to_z(r)) for r in C.rays]
    normals = [primitive_integer(tuple(h[:-1]) + (h[-1] * scale,)) for h in C.normals]
    eqs = [primitive_integer(tuple(e[:-1]) + (e[-1] * scale,)) for e in C.equations]
    lo = [sum(min(0, r[j]) for r in rays) for j in range(n)]
    hi = [sum(max(0, r[j]) for r in rays) for j in range(n)]
    size = 1
    for a, b in zip(lo, hi):
        size *= b - a + 1
    if size > max_box():
        raise DeskScaleError(f"Hilbert enumeration box has {size} points (cap {max_box()})")
    grids = np.meshgrid(*[np.arange(a, b + 1, dtype=np.int64) for a, b in zip(lo, hi)], indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    mask = np.any(pts != 0, axis=1)
    if normals:
        mask &= np.all(pts @ np.array(normals, dtype=np.int64).T >= 0, axis=1)
    if eqs:
        mask &= np.all(pts @ np.array(eqs, dtype=np.int64).T == 0, axis=1)
    pts = pts[mask]
    # sum of facet normals lies in relint of the dual, so it grades C \ {0} positively
    grade = np.array([sum(col) for col in zip(*normals)], dtype=np.int64)
    deg = pts @ grade
    bound = sum(int(np.dot(r, grade)) for r in rays)
    keep = deg <= bound
    pts, deg = pts[keep], deg[keep]
    order = np.lexsort(tuple(pts[:, j] for j in reversed(range(n))) + (deg,))
    pts, deg = pts[order], deg[order]
    basis: list[np.ndarray] = []
    N = np.array(normals, dtype=np.int64).T if normals else None
    for p, d in zip(pts, deg):
        if basis:
            diffs = p[None, :] - np.array(basis)
            inside = np.ones(len(basis), dtype=bool)
            if N is not None:
                inside &= np.all(diffs @ N >= 0, axis=1)
            # equations hold automatically for differences of points of C
            if inside.any():
                continue
        basis.append(p)
    out = []
    for p in basis:
        v = [int(x) for x in p]
        last = Fraction(v[-1]) * scale
        out.append(tuple(v[:-1]) + ((int(last) if last.denominator == 1 else last),))
    return sorted(out)


# -- polyhedra --------------------------------------------------------------------


class Polyhedron:
    """conv(vertices) + cone(rays) + span(lineality) in Q^rank.

    Stored as its homogenization: the cone over (P, 1) closed up by (rec P, 0).
    """

    __slots__ = ("rank", "hom")

    def __init__(self, vertices: Iterable[Sequence] = (), rays: Iterable[Sequence] = (),
                 lineality: Iterable[Sequence] = (), rank: int | None = None, *, hom: Cone | None = None):
        if hom is not None:
            self.hom = hom
            self.rank = hom.rank - 1
            return
        vertices = [tuple(map(Fraction, v)) for v in vertices]
        rays = [tuple(map(Fraction, r)) for r in rays]
        lineality = [tuple(map(Fraction, l)) for l in lineality]
        if not vertices:
            raise ValueError("a nonempty polyhedron needs at least one vertex")
        if rank is None:
            rank = len(vertices[0])
        self.rank = rank
        self.hom = Cone(
            [v + (Fraction(1),) for v in vertices] + [r + (Fraction(0),) for r in rays],
            [l + (Fraction(0),) for l in lineality],
            rank + 1,
        )

    @classmethod
    def from_cone(cls, hom: Cone) -> "Polyhedron | None":
        """Slice of a cone in Q^(n+1) at last coordinate 1; None when empty."""
        if all(r[-1] == 0 for r in hom.rays) and all(l[-1] == 0 for l in hom.lineality):
            return None
        if any(r[-1] < 0 for r in hom.rays) or any(l[-1] != 0 for l in hom.lineality):
            # intersect with the upper halfspace first
            up = Cone.from_inequalities([(0,) * (hom.rank - 1) + (1,)], (), hom.rank)
            hom = intersect(hom, up)
            if all(r[-1] == 0 for r in hom.rays):
                return None
        return cls(hom=hom)

    @classmethod
    def from_inequalities(cls, A: Sequence[Sequence], b: Sequence, eqA: Sequence[Sequence] = (),
                          eqb: Sequence = (), rank: int | None = None) -> "Polyhedron | None":
        """{x : A x >= b, eqA x = eqb}; None when empty."""
        if rank is None:
            rank = len((list(A) or list(eqA))[0])
        ineqs = [tuple(a) + (-Fraction(bi),) for a, bi in zip(A, b)]
        ineqs.append((0,) * rank + (1,))
        eqs = [tuple(a) + (-Fraction(bi),) for a, bi in zip(eqA, eqb)]
        hom = Cone.from_inequalities(ineqs, eqs, rank + 1)
        return cls.from_cone(hom)

    @property
    def vertices(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(sorted(tuple(Fraction(x, r[-1]) for x in r[:-1]) for r in self.hom.rays if r[-1] > 0))

    @property
    def rays(self) -> tuple[tuple[int, ...], ...]:
        return tuple(r[:-1] for r in self.hom.rays if r[-1] == 0)

    @property
    def lineality(self) -> tuple[tuple[int, ...], ...]:
        return tuple(l[:-1] for l in self.hom.lineality)

    @property
    def dim(self) -> int:
        return self.hom.dim - 1

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lineality

    @property
    def key(self):
        return self.hom.key

    def contains(self, x: Sequence) -> bool:
        return self.hom.contains(tuple(x) + (1,))

    def recession_cone(self) -> Cone:
        return Cone(self.rays, self.lineality, self.rank)

    def relative_interior_point(self) -> tuple[Fraction, ...]:
        p = relative_interior_point(self.hom)
        return tuple(x / p[-1] for x in p[:-1])

    def faces(self) -> list["Polyhedron"]:
        out = []
        for f in self.hom.faces:
            P = Polyhedron.from_cone(f)
            if P is not None:
                out.append(P)
        return out

    def same_set(self, other: "Polyhedron") -> bool:
        return self.hom.same_set(other.hom)

    def __eq__(self, other):
        return isinstance(other, Polyhedron) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        parts = [f"vertices={[[str(x) for x in v] for v in self.vertices]}"]
        if self.rays:
            parts.append(f"rays={[list(r) for r in self.rays]}")
        if self.lineality:
            parts.append(f"lineality={[list(l) for l in self.lineality]}")
        return f"Polyhedron({', '.join(parts)})"
