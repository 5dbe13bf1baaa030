"""Toric schemes over a discrete valuation ring, combinatorially.

Fans live in Ñ = N ⊕ Z, the last coordinate being the t-direction. A
:class:`~tropcomp.lattice.LatticeContext` of scale d reads the same fan in
N ⊕ dZ, which models base change to R[t^(1/d)]. Dually, characters live in
M ⊕ (1/d)Z and the uniformizer of the base-changed ring is (0, ..., 0, 1/d).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .fan import Fan, FanViolation, PolyhedralComplex, slice_at_height_one, support_witness, validate_fan
from .lattice import (
    LatticeContext,
    _unimodular_inverse,
    dot,
    lcm,
    primitive_generator,
    primitive_integer,
    quotient_map,
    smith_normal_form,
    sublattice_basis,
)
from .polyhedral import Cone, _hilbert_basis_scaled, dual_cone


def _offending_generator(fan: Fan) -> tuple | None:
    for c in fan.maximal_cones:
        for r in c.rays:
            if r[-1] < 0:
                return r
        for l in c.lineality:
            if l[-1] != 0:
                return l if l[-1] < 0 else tuple(-x for x in l)
    return None


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self):
        return self.admissible


def is_admissible(fan: Fan) -> Admissibility:
    """Every generator has nonnegative last coordinate; otherwise one that does not."""
    if fan.rank < 2:
        raise ValueError("an admissible fan needs rank >= 2")
    w = _offending_generator(fan)
    return Admissibility(w is None, w)


class AdmissibleFan:
    def __init__(self, fan: Fan, ctx: LatticeContext | None = None):
        ctx = ctx or LatticeContext(fan.rank)
        if ctx.rank != fan.rank:
            raise ValueError("lattice context rank does not match the fan")
        check = is_admissible(fan)
        if not check:
            raise ValueError(f"fan is not admissible: generator {list(check.witness)} has negative last coordinate")
        self.fan = fan
        self.ctx = ctx

    @property
    def scale(self) -> int:
        return self.ctx.scale

    def __repr__(self):
        return f"AdmissibleFan({self.fan!r}, scale={self.scale})"


def generic_fiber_subfan(af: AdmissibleFan) -> Fan:
    """Cones inside the hyperplane pr₂ = 0, read in N."""
    n = af.fan.rank - 1
    flat = [c for c in af.fan.cones if all(g[-1] == 0 for g in c.generators())]
    cones = [Cone([r[:-1] for r in c.rays], [l[:-1] for l in c.lineality], n) for c in flat]
    return Fan(cones, n)


@dataclass(frozen=True)
class Component:
    ray: tuple[int, ...]
    generator: tuple[int, ...]
    multiplicity: int


@dataclass(frozen=True)
class SpecialFiberReport:
    components: tuple[Component, ...]
    scale: int

    @property
    def reduced(self) -> bool:
        return all(c.multiplicity == 1 for c in self.components)

    @property
    def reduction_index(self) -> int:
        return reduce(lcm, (c.multiplicity for c in self.components), 1)


def special_fiber_report(af: AdmissibleFan) -> SpecialFiberReport:
    comps = []
    for r in af.fan.rays:
        if r[-1] > 0:
            v = primitive_generator(r, af.ctx)
            comps.append(Component(r, v, v[-1] // af.scale))
    return SpecialFiberReport(tuple(comps), af.scale)


def uniformizer(ctx: LatticeContext) -> tuple[Fraction, ...]:
    """The character t^(1/d) in M ⊕ (1/d)Z."""
    return (Fraction(0),) * (ctx.rank - 1) + (Fraction(1, ctx.scale),)


def divisorial_valuation(m: Sequence, ray: Sequence, ctx: LatticeContext) -> Fraction:
    """Order of vanishing of the character m along the divisor of the ray: <m, v_ρ>."""
    m = tuple(Fraction(x) for x in m)
    if any(x.denominator != 1 for x in m[:-1]) or (m[-1] * ctx.scale).denominator != 1:
        raise ValueError("character is not in the dual working lattice")
    val = dot(m, primitive_generator(ray, ctx))
    return int(val) if val.denominator == 1 else val


def rescale(af: AdmissibleFan, d: int) -> AdmissibleFan:
    if d < 1:
        raise ValueError("rescale factor must be a positive integer")
    return AdmissibleFan(af.fan, af.ctx.rescaled(d))


# -- charts ---------------------------------------------------------------------


@dataclass(frozen=True)
class ChartPresentation:
    cone: Cone
    scale: int
    generators: tuple[tuple, ...]  # in M ⊕ (1/d)Z
    units: tuple[tuple, ...]  # generators whose negatives are also generators
    marked: tuple  # e = (0, ..., 0, 1), the character t
    marked_in_generators: bool  # among the non-unit generators
    marked_irreducible: bool
    relation: str = "chi^e = t"


def _to_dual_z(v, d):
    return tuple(int(x) for x in v[:-1]) + (int(Fraction(v[-1]) * d),)


def _from_dual_z(v, d):
    last = Fraction(v[-1], d)
    return tuple(v[:-1]) + ((int(last) if last.denominator == 1 else last),)


def _reduce_mod_lattice(x, basis):
    """Shift x by the integer span of basis towards the orthogonal complement."""
    if not basis:
        return tuple(x)
    G = [[Fraction(dot(a, b)) for b in basis] for a in basis]
    rhs = [Fraction(dot(a, x)) for a in basis]
    k = len(basis)
    M = [row + [r] for row, r in zip(G, rhs)]
    for c in range(k):
        p = next(i for i in range(c, k) if M[i][c] != 0)
        M[c], M[p] = M[p], M[c]
        M[c] = [v / M[c][c] for v in M[c]]
        for i in range(k):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    coeffs = [round(M[i][k]) for i in range(k)]
    return tuple(xi - sum(c * b[j] for c, b in zip(coeffs, basis)) for j, xi in enumerate(x))


def chart_presentation(sigma: Cone, ctx: LatticeContext) -> ChartPresentation:
    """Generators of the monoid σ^∨ ∩ (M ⊕ (1/d)Z), units included with both signs."""
    if sigma.rank != ctx.rank:
        raise ValueError("rank mismatch")
    d = ctx.scale
    n = sigma.rank
    dual = dual_cone(sigma)
    # coordinates in which the dual working lattice is Z^n
    zdual = Cone([_to_dual_z(g, d) for g in dual.rays], [_to_dual_z(g, d) for g in dual.lineality], n)
    e = (0,) * (n - 1) + (d,)
    units = sublattice_basis(zdual.lineality, n)
    if not units:
        gens = [tuple(g) for g in _hilbert_basis_scaled(zdual, Fraction(1))]
        irreducible = e in gens
    else:
        P = quotient_map(units, n)
        k = len(P[0]) if P and P[0] else 0
        unit_gens = sorted({u for b in units for u in (tuple(b), tuple(-x for x in b))}, reverse=True)
        gens = []
        irreducible = False
        if k:
            push = lambda v: tuple(dot(v, [P[i][j] for i in range(n)]) for j in range(k))
            section = _unimodular_inverse(smith_normal_form([primitive_integer(u) for u in units]).V)[n - k:]
            image = Cone([push(g) for g in zdual.rays], (), k)
            e_img = push(e)
            for y in _hilbert_basis_scaled(image, Fraction(1)):
                if tuple(y) == e_img:
                    gens.append(e)
                    irreducible = True
                    continue
                lift = tuple(sum(y[j] * section[j][i] for j in range(k)) for i in range(n))
                gens.append(_reduce_mod_lattice(lift, units))
        gens = sorted(gens) + unit_gens
    gens_q = tuple(_from_dual_z(g, d) for g in gens)
    unit_q = tuple(g for g in gens_q if tuple(-x for x in g) in gens_q)
    marked = _from_dual_z(e, d)
    if not zdual.contains(e):
        raise ValueError("cone is not admissible: e is not in its dual")
    return ChartPresentation(sigma, d, gens_q, unit_q, marked, marked in gens_q and marked not in unit_q, irreducible)


# -- T(Y) ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TConeFan:
    """Cones over the cells of a complex placed at height 1, with their faces."""

    complex: PolyhedralComplex
    cones: tuple[Cone, ...]
    status: Fan | FanViolation

    @property
    def fan(self) -> Fan:
        if isinstance(self.status, FanViolation):
            raise ValueError(f"cones over the cells do not form a fan: {self.status.describe()}")
        return self.status

    @property
    def height_zero(self) -> list[Cone]:
        return [c for c in self.fan.cones if all(g[-1] == 0 for g in c.generators())]


def tcone_build(C: PolyhedralComplex) -> TConeFan:
    cones = tuple(P.hom for P in C.maximal_cells)
    if not cones:
        return TConeFan(C, (), Fan([], C.rank + 1))
    return TConeFan(C, cones, validate_fan(list(cones)))


@dataclass(frozen=True)
class PropernessReport:
    proper: bool
    witness: tuple[Fraction, ...] | None  # a point of T(Y) outside |Δ|
    equality: bool
    excess: tuple[Fraction, ...] | None  # a point of |Δ| outside T(Y)


def properness_support_check(af: AdmissibleFan, C: PolyhedralComplex) -> PropernessReport:
    """Compare |Δ| with the cone T over the complex, in both directions."""
    if af.fan.rank != C.rank + 1:
        raise ValueError("fan rank must be one more than the complex rank")
    T = tcone_build(C).fan
    missing = support_witness(T, af.fan)
    excess = support_witness(af.fan, T)
    return PropernessReport(missing is None, missing, missing is None and excess is None, excess)


def tcone_roundtrip(C: PolyhedralComplex) -> bool:
    return slice_at_height_one(tcone_build(C).fan) == C

