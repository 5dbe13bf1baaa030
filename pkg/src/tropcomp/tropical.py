"""Valued Laurent polynomials, initial forms and tropical hypersurfaces.

Convention: min-plus, with the uniformizer t of valuation 1. A weight w lies
in trop(f) when the minimum of val(c_m) + <w, m> is attained at least twice.
Coefficients carry only their valuation and an opaque residue tag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .fan import Fan, FanViolation, PolyhedralComplex, validate_fan
from .lattice import dot
from .polyhedral import Cone, Polyhedron

MAX_VALUATION_DENOMINATOR = 10**6


@dataclass(frozen=True, order=True)
class ValuedCoefficient:
    valuation: Fraction
    residue: str = "1"

    def __post_init__(self):
        v = Fraction(self.valuation)
        if v.denominator > MAX_VALUATION_DENOMINATOR:
            raise ValueError(f"valuation denominator exceeds {MAX_VALUATION_DENOMINATOR}")
        object.__setattr__(self, "valuation", v)
        if not self.residue:
            raise ValueError("residue tag must be nonempty")


class ValuedLaurentPolynomial:
    """Finite sum of terms c_m x^m with distinct integer exponents m."""

    def __init__(self, terms: Mapping[Sequence[int], ValuedCoefficient | Fraction | int | str]):
        if not terms:
            raise ValueError("a polynomial needs at least one term")
        clean = {}
        for m, c in terms.items():
            m = tuple(int(x) for x in m)
            if not isinstance(c, ValuedCoefficient):
                c = ValuedCoefficient(Fraction(c))
            if m in clean:
                raise ValueError(f"duplicate exponent {m}")
            clean[m] = c
        ranks = {len(m) for m in clean}
        if len(ranks) != 1:
            raise ValueError("exponents of different lengths")
        self.rank = ranks.pop()
        self.terms: dict[tuple[int, ...], ValuedCoefficient] = dict(sorted(clean.items()))

    @classmethod
    def from_list(cls, items: Iterable[tuple[Sequence[int], object]]) -> "ValuedLaurentPolynomial":
        terms = {}
        for m, c in items:
            m = tuple(m)
            if m in terms:
                raise ValueError(f"duplicate exponent {m}")
            terms[m] = c
        return cls(terms)

    @property
    def exponents(self) -> list[tuple[int, ...]]:
        return list(self.terms)

    @property
    def is_constant_coefficient(self) -> bool:
        return all(c.valuation == 0 for c in self.terms.values())

    def tropical_value(self, w: Sequence) -> Fraction:
        return min(c.valuation + dot(w, m) for m, c in self.terms.items())

    def __eq__(self, other):
        return isinstance(other, ValuedLaurentPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __repr__(self):
        body = " + ".join(f"t^{c.valuation}·x^{list(m)}" for m, c in self.terms.items())
        return f"ValuedLaurentPolynomial({body})"


@dataclass(frozen=True)
class InitialForm:
    terms: tuple[tuple[tuple[int, ...], str], ...]
    value: Fraction

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def exponents(self) -> tuple[tuple[int, ...], ...]:
        return tuple(m for m, _ in self.terms)


def initial_form(f: ValuedLaurentPolynomial, w: Sequence) -> InitialForm:
    if len(w) != f.rank:
        raise ValueError("weight rank does not match the polynomial")
    w = [Fraction(x) for x in w]
    vals = {m: c.valuation + dot(w, m) for m, c in f.terms.items()}
    low = min(vals.values())
    return InitialForm(tuple((m, f.terms[m].residue) for m in f.terms if vals[m] == low), low)


@dataclass(frozen=True)
class TropicalCertificate:
    """Either an exclusion witness (a generator with monomial initial form) or undetermined."""

    excluded: bool
    witness_index: int | None = None
    witness: ValuedLaurentPolynomial | None = None
    initial: InitialForm | None = None


def is_in_tropicalization_certificate(generators: Sequence[ValuedLaurentPolynomial], w: Sequence) -> TropicalCertificate:
    """Sound exclusion test. Without a tropical basis, no witness proves nothing."""
    if not generators:
        raise ValueError("need at least one generator")
    for i, f in enumerate(generators):
        init = initial_form(f, w)
        if init.is_monomial:
            return TropicalCertificate(True, i, f, init)
    return TropicalCertificate(False)


@dataclass(frozen=True)
class TropicalCell:
    polyhedron: Polyhedron
    terms: tuple[tuple[int, ...], ...]  # the exponents tying for the minimum on the cell's interior


@dataclass(frozen=True)
class TropicalHypersurface:
    complex: PolyhedralComplex
    cells: tuple[TropicalCell, ...]
    monomial_input: bool = False

    @property
    def is_empty(self) -> bool:
        return self.complex.is_empty

    def contains(self, w: Sequence) -> bool:
        return self.complex.contains(w)

    @property
    def bounded_cells(self) -> list[TropicalCell]:
        return [c for c in self.cells if c.polyhedron.is_bounded]


def tropical_hypersurface(f: ValuedLaurentPolynomial) -> TropicalHypersurface:
    """Maximal cells of trop(f), dual to the edges of the regular subdivision.

    For every pair of terms the closed tie locus {w : both attain the minimum}
    is a polyhedron; it is a maximal cell exactly when the pair spans a lower
    edge of the Newton polytope lifted by the valuations, i.e. when the locus
    has dimension rank - 1.
    """
    n = f.rank
    if len(f.terms) < 2:
        return TropicalHypersurface(PolyhedralComplex([], n), (), True)
    items = list(f.terms.items())
    cells: dict = {}
    for (mi, ci), (mj, cj) in combinations(items, 2):
        ineqs = [tuple(a - b for a, b in zip(mk, mi)) + (ck.valuation - ci.valuation,) for mk, ck in items]
        ineqs.append((0,) * n + (1,))
        eq = tuple(a - b for a, b in zip(mj, mi)) + (cj.valuation - ci.valuation,)
        P = Polyhedron.from_cone(Cone.from_inequalities(ineqs, [eq], n + 1))
        if P is None or P.dim != n - 1 or P.key in cells:
            continue
        init = initial_form(f, P.relative_interior_point())
        cells[P.key] = TropicalCell(P, init.exponents)
    ordered = tuple(sorted(cells.values(), key=lambda c: c.polyhedron.key))
    return TropicalHypersurface(PolyhedralComplex([c.polyhedron for c in ordered], n), ordered)


def constant_coefficient_fan(f: ValuedLaurentPolynomial) -> Fan:
    """trop(f) as a fan, for f with all coefficient valuations zero."""
    if not f.is_constant_coefficient:
        raise ValueError("constant_coefficient_fan needs all valuations equal to 0")
    hyp = tropical_hypersurface(f)
    if hyp.is_empty:
        raise ValueError("a monomial has empty tropicalization")
    cones = [Cone(P.rays, P.lineality, f.rank) for P in hyp.complex.maximal_cells]
    result = validate_fan(cones)
    if isinstance(result, FanViolation):
        raise AssertionError(f"tropical hypersurface cells do not form a fan: {result.describe()}")
    return result
