"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run standalone with ``python3 tests/test_acceptance.py`` or under pytest.
All checks are exact; the only tolerances are wall-clock budgets.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from functools import reduce
from itertools import product
from math import lcm
from pathlib import Path


from tropcomp.fan import Fan, FanViolation, PolyhedralComplex, slice_at_height_one, validate_fan
from tropcomp.geomtrop import BoundaryData, check_condition2, hubsch_check
from tropcomp.lattice import dot
from tropcomp.oracles import brute_force_integer_solutions, hypersurface_grid_check
from tropcomp.polyhedral import Cone, Polyhedron, dual_cone, hilbert_basis, relative_interior_point
from tropcomp.toric_dvr import (
    AdmissibleFan,
    divisorial_valuation,
    rescale,
    special_fiber_report,
    tcone_build,
    uniformizer,
)
from tropcomp.tropical import ValuedLaurentPolynomial, tropical_hypersurface

SEED = 20240611

# collected for the pytest terminal summary (see conftest.py)
RESULTS: list[str] = []


def report(number: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    RESULTS.append(line)
    if __name__ == "__main__":
        print(line)


# -- generators ------------------------------------------------------------------------


def stellar_subdivision(cones: list[Cone], v) -> list[Cone]:
    """Replace every cone containing v by the joins of v with its facets avoiding v."""
    out = []
    for c in cones:
        if not c.contains(v):
            out.append(c)
            continue
        for F in c.facets():
            if not F.contains(v):
                out.append(Cone(list(F.rays) + [v], (), c.rank))
    return out


def random_subdivided_fan(rng: random.Random) -> list[Cone]:
    n = rng.randint(2, 4)
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    if n <= 3 and rng.random() < 0.5:
        cones = [Cone([tuple(s * x for x in b) for s, b in zip(signs, basis)], (), n)
                 for signs in product((1, -1), repeat=n)]
    else:
        cones = [Cone(basis, (), n)]
    for _ in range(rng.randint(1, 3)):
        c = rng.choice(cones)
        k = rng.randint(1, len(c.rays))
        v = [0] * n
        for r in rng.sample(list(c.rays), k):
            w = rng.randint(1, 2)
            v = [a + w * b for a, b in zip(v, r)]
        cones = stellar_subdivision(cones, tuple(v))
    return cones


def mutate(cones: list[Cone], rng: random.Random):
    """Enlarge one maximal cone by an interior point of a neighbour."""
    full = [i for i, c in enumerate(cones) if c.dim == c.rank]
    i, j = rng.sample(full, 2)
    p = relative_interior_point(cones[j])
    bigger = Cone(list(cones[i].rays) + [p], (), cones[i].rank)
    out = list(cones)
    out[i] = bigger
    return out, i, j


def interiors_overlap(a: Cone, b: Cone) -> bool:
    """Brute-force certificate: an explicit point interior to both full-dimensional cones."""
    pa, pb = relative_interior_point(a), relative_interior_point(b)
    for k in range(1, 60):
        q = tuple(x + Fraction(1, 2**k) * y for x, y in zip(pb, pa))
        if all(dot(h, q) > 0 for h in a.normals) and all(dot(h, q) > 0 for h in b.normals):
            return True
    return False


def random_poly(rng: random.Random, n: int | None = None, max_terms: int = 6) -> ValuedLaurentPolynomial:
    n = n or rng.randint(1, 3)
    k = rng.randint(2, min(max_terms, 5**n))
    exps = set()
    while len(exps) < k:
        exps.add(tuple(rng.randint(-2, 2) for _ in range(n)))
    return ValuedLaurentPolynomial({m: rng.choice([0, Fraction(1, 2), 1]) for m in sorted(exps)})


def scan_generator(v, d):
    """First multiple of v in Z^(n-1) + dZ, by scanning k/D for k = 1, 2, ..."""
    D = reduce(lcm, (Fraction(x).denominator for x in v), 1) * 12
    for k in range(1, 10**6):
        w = [Fraction(k, D) * x for x in v]
        if all(x.denominator == 1 for x in w) and w[-1] % d == 0:
            return tuple(int(x) for x in w)
    raise AssertionError("scan failed")


def random_admissible_fan(rng: random.Random) -> Fan:
    n = rng.randint(2, 3)
    if rng.random() < 0.5:
        rays = {}
        for _ in range(rng.randint(1, 4)):
            v = tuple(rng.randint(-3, 3) for _ in range(n - 1)) + (rng.randint(0, 5),)
            if any(v):
                rays[Cone([v], (), n).key] = Cone([v], (), n)
        return Fan(rays.values() or [Cone([(0,) * (n - 1) + (1,)], (), n)], n)
    base = [tuple(int(i == j) for j in range(n - 1)) + (0,) for i in range(n - 1)] + [(0,) * (n - 1) + (1,)]
    cones = [Cone(base, (), n)]
    for _ in range(rng.randint(1, 3)):
        c = rng.choice(cones)
        v = [0] * n
        for r in c.rays:
            v = [a + rng.randint(0, 3) * b for a, b in zip(v, r)]
        if any(v):
            cones = stellar_subdivision(cones, tuple(v))
    return Fan(cones, n)


# -- criteria --------------------------------------------------------------------------------


def test_criterion_1_fan_axioms():
    rng = random.Random(SEED + 1)
    valid = []
    while len(valid) < 50:
        cones = random_subdivided_fan(rng)
        if sum(c.dim == c.rank for c in cones) >= 2:
            valid.append(cones)
    mutated = []
    for cones in valid:
        while True:
            bad, i, j = mutate(cones, rng)
            if interiors_overlap(bad[i], cones[j]):
                mutated.append(bad)
                break
    start = time.perf_counter()
    accepted = sum(isinstance(validate_fan(c), Fan) for c in valid)
    rejected = sum(isinstance(validate_fan(c), FanViolation) for c in mutated)
    elapsed = time.perf_counter() - start
    ok = accepted == 50 and rejected == 50 and elapsed < 10
    report(1, ok, f"accepted {accepted}/50 valid, rejected {rejected}/50 mutated, {elapsed:.2f}s (< 10s)")
    assert ok


def test_criterion_2_hypersurface_grid():
    rng = random.Random(SEED + 2)
    polys = [random_poly(rng) for _ in range(100)]
    start = time.perf_counter()
    bad = probes = 0
    for f in polys:
        rep = hypersurface_grid_check(f, tropical_hypersurface(f))
        probes += rep.probes
        bad += len(rep.disagreements)
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 60
    report(2, ok, f"100 polynomials, {probes} probes on 21^rank grids, {bad} disagreements, {elapsed:.2f}s (< 60s)")
    assert ok


def random_complexes(rng: random.Random) -> list[PolyhedralComplex]:
    out = []
    while len(out) < 50:
        kind = len(out) % 3
        if kind == 0:
            f = random_poly(rng, rng.randint(2, 3), 5)
            C = tropical_hypersurface(f).complex
        elif kind == 1:
            f = random_poly(rng, 2, 6)
            cells = tropical_hypersurface(f).complex.maximal_cells
            if not cells:
                continue
            C = PolyhedralComplex(rng.sample(cells, rng.randint(1, len(cells))), 2)
        else:
            pts = sorted({Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(rng.randint(1, 4))})
            cells = [Polyhedron([(a,), (b,)]) for a, b in zip(pts, pts[1:])]
            if rng.random() < 0.7:
                cells.append(Polyhedron([(pts[-1],)], [(1,)]))
            if rng.random() < 0.7:
                cells.append(Polyhedron([(pts[0],)], [(-1,)]))
            if not cells:
                cells = [Polyhedron([(pts[0],)])]
            C = PolyhedralComplex(cells, 1)
        if not C.is_empty:
            out.append(C)
    return out


def test_criterion_3_tcone_roundtrip():
    rng = random.Random(SEED + 3)
    complexes = random_complexes(rng)
    bounded = sum(any(P.is_bounded for P in C.maximal_cells) for C in complexes)
    start = time.perf_counter()
    good = 0
    for C in complexes:
        T = tcone_build(C)
        if isinstance(T.status, Fan) and slice_at_height_one(T.fan) == C:
            good += 1
    elapsed = time.perf_counter() - start
    ok = good == 50 and bounded > 0 and elapsed < 30
    report(3, ok, f"{good}/50 complexes ({bounded} with bounded cells) survive the round trip, {elapsed:.2f}s (< 30s)")
    assert ok


def test_criterion_4_semistable_rescaling():
    rng = random.Random(SEED + 4)
    fans = [random_admissible_fan(rng) for _ in range(50)]
    start = time.perf_counter()
    good = 0
    checked = 0
    for fan in fans:
        af = AdmissibleFan(fan)
        rep = special_fiber_report(af)
        fine = True
        for scale_af in (af, rescale(af, rep.reduction_index)):
            r = special_fiber_report(scale_af)
            for c in r.components:
                checked += 1
                expected = scan_generator(c.ray, scale_af.scale)
                fine &= c.generator == expected and c.multiplicity * scale_af.scale == expected[-1]
                fine &= divisorial_valuation(uniformizer(scale_af.ctx), c.ray, scale_af.ctx) == c.multiplicity
        fine &= special_fiber_report(rescale(af, rep.reduction_index)).reduced
        good += fine
    elapsed = time.perf_counter() - start
    ok = good == 50 and elapsed < 30
    report(4, ok, f"{good}/50 admissible fans reduced after rescaling, {checked} component checks, {elapsed:.2f}s (< 30s)")
    assert ok


def test_criterion_5_condition2_brute_force():
    rng = random.Random(SEED + 5)
    agree = feasible = 0
    for _ in range(100):
        n = rng.randint(1, 3)
        k = rng.randint(1, 3)
        divs = [(f"D{i}", tuple(rng.randint(-3, 3) for _ in range(n))) for i in range(k)]
        data = BoundaryData.from_maximal_strata(divs, [[d for d, _ in divs]], n)
        pivot = rng.choice(divs)[0]
        ids = [d for d, _ in divs]
        sol = check_condition2(data, ids, pivot)
        A = [data.val(i) for i in ids]
        b = [int(i == pivot) for i in ids]
        box = brute_force_integer_solutions(A, b, 6)
        if sol is None:
            agree += box == []
        else:
            feasible += 1
            agree += all(dot(row, sol.solution) == bi for row, bi in zip(A, b))
    ok = agree == 100
    report(5, ok, f"{agree}/100 instances agree with exhaustive search over |m_i| <= 6 ({feasible} feasible)")
    assert ok


def test_criterion_6_hubsch_smoke():
    line = hubsch_check(Fan([Cone([(1, 0)]), Cone([(0, 1)]), Cone([(-1, -1)])]))
    q1 = hubsch_check(Fan([Cone([(1,)]), Cone([(-1,)])]))
    fails = [(s.cone, len(s.translation_space)) for s in q1.failures]
    ok = line.passed and not q1.passed and fails == [(Cone.zero(1), 1)]
    report(6, ok, f"tropical line passes: {line.passed}; complete fan of Q^1 fails at the zero cone with rank {fails[0][1] if fails else None}")
    assert ok


def test_criterion_7_double_dual_and_hilbert():
    rng = random.Random(SEED + 7)
    start = time.perf_counter()
    dd = hb = pointed = 0
    for _ in range(200):
        n = rng.randint(1, 4)
        rays = [v for v in (tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(rng.randint(1, 4))) if any(v)]
        C = Cone(rays, (), n)
        D = dual_cone(dual_cone(C))
        dd += D.same_set(C) and all(C.contains(g) for g in D.generators()) and all(D.contains(g) for g in C.generators())
        if not C.is_pointed:
            hb += 1
            continue
        pointed += 1
        H = hilbert_basis(C)
        fine = all(C.contains(h) for h in H) and all(tuple(int(x) for x in r) in H for r in C.rays)
        for h in H:
            for g in H:
                diff = tuple(a - b for a, b in zip(h, g))
                if g != h and C.contains(diff):
                    fine = False
        hb += fine
    elapsed = time.perf_counter() - start
    ok = dd == 200 and hb == 200 and elapsed < 60
    report(7, ok, f"double dual {dd}/200, Hilbert irreducibility {hb}/200 ({pointed} pointed), {elapsed:.2f}s (< 60s)")
    assert ok


def test_criterion_8_cli_golden():
    from test_cli import CASES, GOLDEN, render_case
    from tropcomp.cli import COMMANDS

    same = sum(render_case(argv) == (GOLDEN / "expected" / f"{name}.out").read_text() for name, argv in CASES)
    covered = {tuple(argv[:2]) for _, argv in CASES} >= set(COMMANDS)
    ok = same == len(CASES) and covered
    report(8, ok, f"{same}/{len(CASES)} golden reports byte-identical; all {len(COMMANDS)} commands covered: {covered}")
    assert ok


if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).parent))
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
