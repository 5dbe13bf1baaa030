"""Fans and polyhedral complexes.

A :class:`Fan` is stored by its maximal cones; the face closure is built
eagerly and keyed by the canonical H-representation of each cone. Support
questions (containment of supports, refinement, translation invariance) are
decided exactly by a covering test rather than by sampling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import canonical_basis, dot
from .polyhedral import Cone, Polyhedron, intersect, is_face, relative_interior_point


@dataclass(frozen=True)
class FanViolation:
    """Two cones whose intersection is not a face of both."""

    i: int
    j: int
    intersection: Cone
    not_face_of: tuple[int, ...]

    def describe(self) -> str:
        which = " and ".join(f"cone {k}" for k in self.not_face_of)
        return f"cones {self.i} and {self.j} meet in {self.intersection!r}, which is not a face of {which}"


def _maximal(cones: Iterable[Cone]) -> list[Cone]:
    uniq: dict = {}
    for c in cones:
        uniq.setdefault(c.key, c)
    items = list(uniq.values())
    out = []
    for c in items:
        if not any(d is not c and d.dim > c.dim and d.contains_cone(c) for d in items):
            out.append(c)
    return out


class Fan:
    """A fan given by its maximal cones.

    The constructor does not check the fan axioms; use :func:`validate_fan`
    on untrusted input.
    """

    def __init__(self, cones: Iterable[Cone], rank: int | None = None):
        cones = list(cones)
        if rank is None:
            if not cones:
                raise ValueError("rank required for an empty cone list")
            rank = cones[0].rank
        if any(c.rank != rank for c in cones):
            raise ValueError("rank mismatch")
        self.rank = rank
        self.maximal_cones: tuple[Cone, ...] = tuple(_maximal(cones)) if cones else (Cone.zero(rank),)
        closure: dict = {}
        for c in self.maximal_cones:
            for f in c.faces:
                closure.setdefault(f.key, f)
        self.closure = closure

    @property
    def cones(self) -> list[Cone]:
        """Every cone of the face closure, ordered by dimension then key."""
        return sorted(self.closure.values(), key=lambda c: (c.dim, c.key))

    @property
    def rays(self) -> tuple[tuple[int, ...], ...]:
        """Primitive extreme rays over all cones (Δ(1) for a pointed fan)."""
        return tuple(sorted({r for c in self.maximal_cones for r in c.rays}))

    def __contains__(self, cone: Cone) -> bool:
        return cone.key in self.closure

    def contains_point(self, x: Sequence) -> bool:
        return any(c.contains(x) for c in self.maximal_cones)

    def __repr__(self):
        return f"Fan({len(self.maximal_cones)} maximal cones, rank={self.rank})"


def validate_fan(cones: Sequence[Cone]) -> Fan | FanViolation:
    """Check that every pair of cones meets in a common face.

    Returns the fan, or the first offending pair in lexicographic order.
    """
    cones = list(cones)
    if not cones:
        raise ValueError("empty cone list")
    rank = cones[0].rank
    if any(c.rank != rank for c in cones):
        raise ValueError("rank mismatch")
    for i in range(len(cones)):
        for j in range(i + 1, len(cones)):
            meet = intersect(cones[i], cones[j])
            bad = tuple(k for k in (i, j) if not is_face(meet, cones[k]))
            if bad:
                return FanViolation(i, j, meet, bad)
    return Fan(cones, rank)


@dataclass(frozen=True)
class SupportQuery:
    point: tuple
    index: int | None
    cone: Cone | None = field(default=None, compare=False)

    @property
    def contained(self) -> bool:
        return self.index is not None


def support_membership(fan: Fan, x: Sequence) -> SupportQuery:
    """First maximal cone (by index) containing x, if any."""
    if len(x) != fan.rank:
        raise ValueError("rank mismatch")
    x = tuple(Fraction(v) for v in x)
    for i, c in enumerate(fan.maximal_cones):
        if c.contains(x):
            return SupportQuery(x, i, c)
    return SupportQuery(x, None)


# -- covering -------------------------------------------------------------------


def _generic_point(sigma: Cone, avoid: Sequence[Cone]) -> tuple[Fraction, ...]:
    """A point of relint(sigma) lying in none of the lower-dimensional cones ``avoid``.

    Moment-curve points sum t^k g_k: a proper subspace of span(sigma) holds at
    most len(gens) of them.
    """
    gens = list(sigma.rays) + list(sigma.lineality)
    for t in range(1, len(gens) * (len(avoid) + 1) + 2):
        p = tuple(Fraction(sum(t**k * g[i] for k, g in enumerate(gens))) for i in range(sigma.rank))
        if sigma.in_relative_interior(p) and not any(c.contains(p) for c in avoid):
            return p
    raise AssertionError("no generic point found")  # unreachable for lower-dimensional avoid sets


def uncovered_point(sigma: Cone, pieces: Sequence[Cone]) -> tuple[Fraction, ...] | None:
    """A point of sigma outside the union of ``pieces``, or None if they cover sigma.

    The pieces must be subcones of sigma forming a fan (for example the
    intersections of sigma with the cones of a fan). The union covers sigma
    iff every facet of a full-dimensional piece that is not on the boundary of
    sigma is shared with another full-dimensional piece.
    """
    uniq = {}
    for p in pieces:
        uniq.setdefault(p.key, p)
    full = [p for p in uniq.values() if p.dim == sigma.dim]
    if not full:
        if sigma.is_zero:
            return None if uniq else tuple(Fraction(0) for _ in range(sigma.rank))
        return _generic_point(sigma, list(uniq.values()))
    for P in full:
        for F in P.facets():
            f = relative_interior_point(F) if not F.is_zero else tuple(Fraction(0) for _ in range(sigma.rank))
            if not sigma.in_relative_interior(f):
                continue
            if any(Q is not P and Q.contains_cone(F) for Q in full):
                continue
            c = relative_interior_point(P)
            eps = Fraction(1)
            for _ in range(200):
                q = tuple(a + eps * (a - b) for a, b in zip(f, c))
                if sigma.contains(q) and not any(p.contains(q) for p in uniq.values()):
                    return q
                eps /= 2
            raise AssertionError("failed to step off an unshared facet")
    return None


def support_witness(fan1: Fan, fan2: Fan) -> tuple[Fraction, ...] | None:
    """A point of |fan1| not in |fan2|, or None when |fan1| ⊆ |fan2|."""
    if fan1.rank != fan2.rank:
        raise ValueError("rank mismatch")
    for sigma in fan1.maximal_cones:
        pieces = [intersect(sigma, tau) for tau in fan2.maximal_cones]
        q = uncovered_point(sigma, pieces)
        if q is not None:
            return q
    return None


def support_contained(fan1: Fan, fan2: Fan) -> bool:
    return support_witness(fan1, fan2) is None


def same_support(fan1: Fan, fan2: Fan) -> bool:
    return support_contained(fan1, fan2) and support_contained(fan2, fan1)


def refines(fine: Fan, coarse: Fan) -> bool:
    """|fine| = |coarse| and each cone of ``fine`` lies in a cone of ``coarse``."""
    if fine.rank != coarse.rank:
        raise ValueError("rank mismatch")
    for c in fine.maximal_cones:
        if not any(d.contains_cone(c) for d in coarse.maximal_cones):
            return False
    return support_contained(coarse, fine)


def common_refinement(fan1: Fan, fan2: Fan) -> Fan:
    if not same_support(fan1, fan2):
        raise ValueError("fans have different supports")
    meets = [intersect(a, b) for a in fan1.maximal_cones for b in fan2.maximal_cones]
    return Fan(meets, fan1.rank)


def star(fan: Fan, sigma: Cone) -> Fan:
    """Subfan of all cones containing sigma, with their faces."""
    if sigma not in fan:
        raise ValueError("sigma is not a cone of the fan")
    return Fan([c for c in fan.maximal_cones if c.contains_cone(sigma)], fan.rank)


def support_translation_space(fan: Fan) -> tuple[tuple[int, ...], ...]:
    """Basis of the largest linear subspace L with |fan| + L = |fan|.

    Valid lines are closed under sums, so L is spanned by the candidate
    directions r (rays and lineality vectors, with -r in the support) whose
    line individually preserves the support.
    """
    candidates = set(fan.rays)
    for c in fan.maximal_cones:
        candidates.update(c.lineality)
    good = []
    for r in sorted(candidates):
        neg = tuple(-x for x in r)
        if not fan.contains_point(neg):
            continue
        if _preserved_by(fan, [r]):
            good.append(r)
    L = canonical_basis(good) if good else ()
    if L and not _preserved_by(fan, L):
        raise AssertionError("sum of invariant lines is not invariant")
    return L


def _preserved_by(fan: Fan, directions: Sequence[Sequence]) -> bool:
    for sigma in fan.maximal_cones:
        moved = Cone(sigma.rays, list(sigma.lineality) + list(directions), fan.rank)
        pieces = [intersect(moved, tau) for tau in fan.maximal_cones]
        if uncovered_point(moved, pieces) is not None:
            return False
    return True


@dataclass(frozen=True)
class CoarsenResult:
    fan: Fan
    is_fixpoint: bool
    merges: tuple[tuple[int, int], ...]


def coarsen(fan: Fan, keep_pointed: bool = True, max_rounds: int = 10_000) -> CoarsenResult:
    """Greedily merge adjacent maximal cones whose union is a cone.

    Pairs are scanned in lexicographic index order and the scan restarts after
    every merge. With ``keep_pointed`` a merge may not enlarge the lineality
    space. This is a heuristic: it does not claim to find a minimal fan
    structure, which need not exist.
    """
    cones = list(fan.maximal_cones)
    merges = []
    for _ in range(max_rounds):
        merged = False
        for i in range(len(cones)):
            for j in range(i + 1, len(cones)):
                a, b = cones[i], cones[j]
                if a.dim != b.dim or intersect(a, b).dim != a.dim - 1:
                    continue
                big = Cone(a.generators() + b.generators(), (), fan.rank)
                if keep_pointed and len(big.lineality) != len(a.lineality):
                    continue
                if uncovered_point(big, [a, b]) is not None:
                    continue
                trial = cones[:i] + [big] + cones[i + 1 : j] + cones[j + 1 :]
                if isinstance(validate_fan(trial), FanViolation):
                    continue
                cones = trial
                merges.append((i, j))
                merged = True
                break
            if merged:
                break
        if not merged:
            return CoarsenResult(Fan(cones, fan.rank), True, tuple(merges))
    return CoarsenResult(Fan(cones, fan.rank), False, tuple(merges))


# -- polyhedral complexes ---------------------------------------------------------


class PolyhedralComplex:
    """A complex given by its maximal cells (polyhedra in Q^rank)."""

    def __init__(self, cells: Iterable[Polyhedron], rank: int | None = None):
        cells = list(cells)
        if rank is None:
            if not cells:
                raise ValueError("rank required for an empty complex")
            rank = cells[0].rank
        if any(P.rank != rank for P in cells):
            raise ValueError("rank mismatch")
        self.rank = rank
        maximal = _maximal([P.hom for P in cells])
        self.maximal_cells: tuple[Polyhedron, ...] = tuple(
            sorted((Polyhedron(hom=h) for h in maximal), key=lambda P: P.key)
        )

    @property
    def is_empty(self) -> bool:
        return not self.maximal_cells

    def contains(self, x: Sequence) -> bool:
        return any(P.contains(x) for P in self.maximal_cells)

    def cell_keys(self) -> frozenset:
        return frozenset(P.key for P in self.maximal_cells)

    def __eq__(self, other):
        return isinstance(other, PolyhedralComplex) and self.rank == other.rank and self.cell_keys() == other.cell_keys()

    def __hash__(self):
        return hash((self.rank, self.cell_keys()))

    def __repr__(self):
        return f"PolyhedralComplex({len(self.maximal_cells)} cells, rank={self.rank})"


def complex_violation(cells: Sequence[Polyhedron]) -> tuple[int, int] | None:
    """First pair of cells whose nonempty intersection is not a common face."""
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            meet = intersect(cells[i].hom, cells[j].hom)
            if all(r[-1] == 0 for r in meet.rays):
                continue  # empty intersection of the polyhedra
            if not (is_face(meet, cells[i].hom) and is_face(meet, cells[j].hom)):
                return (i, j)
    return None


def slice_at_height_one(fan: Fan) -> PolyhedralComplex:
    """Cells σ ∩ {last coordinate = 1}, read in the first rank-1 coordinates."""
    for c in fan.maximal_cones:
        if any(r[-1] < 0 for r in c.rays) or any(l[-1] != 0 for l in c.lineality):
            raise ValueError("fan is not admissible: a generator has negative last coordinate")
    cells = [P for P in (Polyhedron.from_cone(c) for c in fan.maximal_cones) if P is not None]
    return PolyhedralComplex(cells, fan.rank - 1)
