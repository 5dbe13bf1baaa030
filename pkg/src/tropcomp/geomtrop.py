"""Tropicalization from boundary-divisor data, and lattice checks on the result.

The input is a list of boundary divisors with their valuation vectors in N
and the nerve of the boundary: the sets of divisors with nonempty common
intersection. Each stratum S contributes the cone spanned by the valuations of
its divisors.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .fan import Fan, FanViolation, coarsen, star, support_translation_space, validate_fan
from .lattice import IntegerSolution, is_lattice_basis_part, quotient_map, solve_integer_linear
from .polyhedral import Cone

CONDITION1_NOTE = "condition 1 (affine open strata, surjective restriction) is not machine-checked"


@dataclass(frozen=True)
class Divisor:
    id: str
    val: tuple[int, ...]


class BoundaryData:
    def __init__(self, divisors: Sequence[Divisor | tuple], strata: Sequence, rank: int):
        divs = [d if isinstance(d, Divisor) else Divisor(str(d[0]), tuple(int(x) for x in d[1])) for d in divisors]
        ids = [d.id for d in divs]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate divisor id")
        if any(len(d.val) != rank for d in divs):
            raise ValueError("valuation vector rank mismatch")
        nerve = {frozenset(str(i) for i in s) for s in strata}
        nerve.add(frozenset())
        known = set(ids)
        for s in nerve:
            if not s <= known:
                raise ValueError(f"stratum {sorted(s)} names unknown divisors")
            for d in s:
                if s - {d} not in nerve:
                    raise ValueError(f"malformed nerve: {sorted(s - {d})} missing below {sorted(s)}")
        self.divisors = tuple(divs)
        self.rank = rank
        order = {d: k for k, d in enumerate(ids)}
        self.strata = tuple(sorted(nerve, key=lambda s: (len(s), sorted(order[d] for d in s))))
        self._val = {d.id: d.val for d in divs}

    @classmethod
    def from_maximal_strata(cls, divisors, maximal, rank: int) -> "BoundaryData":
        """Close a list of maximal strata under subsets."""
        nerve = set()
        for s in maximal:
            s = [str(i) for i in s]
            for k in range(len(s) + 1):
                nerve.update(frozenset(c) for c in combinations(s, k))
        return cls(divisors, nerve, rank)

    def val(self, divisor_id: str) -> tuple[int, ...]:
        return self._val[divisor_id]

    def ordered(self, stratum) -> list[str]:
        """Divisor ids of a stratum in input order."""
        return [d.id for d in self.divisors if d.id in stratum]


@dataclass(frozen=True)
class StratumCone:
    stratum: tuple[str, ...]
    cone: Cone
    strictly_simplicial: bool


@dataclass(frozen=True)
class GeomTropResult:
    cones: tuple[StratumCone, ...]
    fan_status: Fan | FanViolation

    @property
    def is_fan(self) -> bool:
        return isinstance(self.fan_status, Fan)


def geometric_tropicalization(data: BoundaryData) -> GeomTropResult:
    out = []
    for s in data.strata:
        ids = data.ordered(s)
        vals = [data.val(i) for i in ids]
        out.append(StratumCone(tuple(ids), Cone(vals, (), data.rank), is_lattice_basis_part(vals)))
    return GeomTropResult(tuple(out), validate_fan([c.cone for c in out]))


def check_condition2(data: BoundaryData, stratum, pivot: str) -> IntegerSolution | None:
    """Integer m with <m, val(pivot)> = 1 and <m, val(D)> = 0 for the other D in the stratum."""
    ids = data.ordered(frozenset(stratum))
    if pivot not in ids:
        raise ValueError("pivot divisor is not in the stratum")
    A = [data.val(i) for i in ids]
    b = [int(i == pivot) for i in ids]
    sol = solve_integer_linear(A, b)
    if sol is not None:
        assert all(sum(x * y for x, y in zip(row, sol.solution)) == bi for row, bi in zip(A, b))
    return sol


@dataclass(frozen=True)
class SchoenCertificate:
    condition2: tuple[tuple[tuple[str, ...], str, tuple[int, ...] | None], ...]
    condition3: Fan | FanViolation
    notes: tuple[str, ...] = (CONDITION1_NOTE,)

    @property
    def lattice_conditions_hold(self) -> bool:
        return isinstance(self.condition3, Fan) and all(m is not None for _, _, m in self.condition2)


def schoen_check(data: BoundaryData) -> SchoenCertificate:
    rows = []
    for s in data.strata:
        ids = tuple(data.ordered(s))
        for d in ids:
            sol = check_condition2(data, s, d)
            rows.append((ids, d, sol.solution if sol else None))
    return SchoenCertificate(tuple(rows), geometric_tropicalization(data).fan_status)


@dataclass(frozen=True)
class StarReport:
    cone: Cone
    translation_space: tuple[tuple[int, ...], ...]

    @property
    def rigid(self) -> bool:
        return not self.translation_space


@dataclass(frozen=True)
class HubschReport:
    stars: tuple[StarReport, ...]
    minimality: str  # "coarse", "not-minimal" or "undetermined"
    coarsening: Fan

    @property
    def passed(self) -> bool:
        return all(s.rigid for s in self.stars) and self.minimality != "not-minimal"

    @property
    def failures(self) -> tuple[StarReport, ...]:
        return tuple(s for s in self.stars if not s.rigid)


def projected_star(fan: Fan, sigma: Cone) -> Fan:
    """Star of sigma pushed to N / (span sigma ∩ N)."""
    P = quotient_map(sigma.generators(), fan.rank)
    k = len(P[0]) if P and P[0] else 0
    if k == 0:
        return Fan([Cone.zero(1)], 1)  # a point; rank 1 stands in for the zero space

    def push(v):
        return tuple(sum(v[i] * P[i][j] for i in range(fan.rank)) for j in range(k))

    images = [Cone([push(g) for g in c.generators()], (), k) for c in star(fan, sigma).maximal_cones]
    return Fan(images, k)


def hubsch_check(fan: Fan) -> HubschReport:
    """Translation rigidity of every star in the quotient by the cone's span."""
    stars = []
    for sigma in fan.cones:
        if sigma.dim == fan.rank:
            stars.append(StarReport(sigma, ()))
            continue
        stars.append(StarReport(sigma, support_translation_space(projected_star(fan, sigma))))
    res = coarsen(fan)
    if not res.is_fixpoint:
        minimality = "undetermined"
    else:
        minimality = "not-minimal" if res.merges else "coarse"
    return HubschReport(tuple(stars), minimality, res.fan)
