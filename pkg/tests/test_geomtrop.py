from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from tropcomp.fan import Fan, FanViolation
from tropcomp.geomtrop import (
    BoundaryData,
    check_condition2,
    geometric_tropicalization,
    hubsch_check,
    schoen_check,
)
from tropcomp.lattice import smith_normal_form
from tropcomp.oracles import brute_force_integer_solutions
from tropcomp.polyhedral import Cone

LINE = Fan([Cone([(1, 0)]), Cone([(0, 1)]), Cone([(-1, -1)])])


def line_data():
    return BoundaryData.from_maximal_strata(
        [("a", (1, 0)), ("b", (0, 1)), ("c", (-1, -1))], [["a", "b"], ["b", "c"], ["a", "c"]], 2
    )


def test_single_divisor():
    res = geometric_tropicalization(BoundaryData([("1", (1, 0))], [["1"]], 2))
    assert res.is_fan
    assert [c.cone for c in res.cones] == [Cone.zero(2), Cone([(1, 0)])]


def test_ray_inside_quadrant_is_not_a_fan():
    data = BoundaryData.from_maximal_strata([("1", (1, 0)), ("2", (0, 1)), ("3", (1, 1))], [["1", "2"], ["3"]], 2)
    res = geometric_tropicalization(data)
    assert isinstance(res.fan_status, FanViolation)
    assert res.fan_status.intersection == Cone([(1, 1)])


def test_line_complement_is_a_fan():
    res = geometric_tropicalization(line_data())
    assert res.is_fan
    assert res.fan_status.rays == ((-1, -1), (0, 1), (1, 0))
    flags = {c.stratum: c.strictly_simplicial for c in res.cones}
    assert flags[("a", "b")] and flags[("b", "c")] and flags[("a", "c")]


def test_cones_generated_by_valuations():
    data = line_data()
    for sc in geometric_tropicalization(data).cones:
        vals = [data.val(i) for i in sc.stratum]
        assert sc.cone.same_set(Cone(vals, (), 2))
        assert all(sc.cone.contains(v) for v in vals)


def test_simplicial_flag_matches_smith_form():
    data = BoundaryData.from_maximal_strata([("1", (1, 1)), ("2", (1, -1)), ("3", (0, 1))], [["1", "2"], ["2", "3"]], 2)
    for sc in geometric_tropicalization(data).cones:
        vals = [data.val(i) for i in sc.stratum]
        if vals:
            snf = smith_normal_form(vals)
            expected = snf.rank == len(vals) and all(d == 1 for d in snf.elementary_divisors)
        else:
            expected = True
        assert sc.strictly_simplicial == expected
    flags = {c.stratum: c.strictly_simplicial for c in geometric_tropicalization(data).cones}
    assert not flags[("1", "2")] and flags[("2", "3")]


def test_malformed_nerve():
    with pytest.raises(ValueError, match="nerve"):
        BoundaryData([("1", (1, 0)), ("2", (0, 1))], [["1", "2"]], 2)
    with pytest.raises(ValueError):
        BoundaryData([("1", (1, 0))], [["9"]], 2)


def test_condition2_examples():
    d = BoundaryData([("1", (2, 0))], [["1"]], 2)
    assert check_condition2(d, ["1"], "1") is None
    d = BoundaryData.from_maximal_strata([("1", (1, 0)), ("2", (0, 1))], [["1", "2"]], 2)
    assert check_condition2(d, ["1", "2"], "1").solution == (1, 0)
    d = BoundaryData.from_maximal_strata([("1", (1, 1)), ("2", (1, -1))], [["1", "2"]], 2)
    assert check_condition2(d, ["1", "2"], "1") is None
    assert brute_force_integer_solutions([(1, 1), (1, -1)], [1, 0], 4) == []
    with pytest.raises(ValueError):
        check_condition2(d, ["1"], "2")


@st.composite
def strata_data(draw):
    n = draw(st.integers(1, 3))
    k = draw(st.integers(1, 3))
    vals = [draw(st.tuples(*[st.integers(-3, 3)] * n)) for _ in range(k)]
    return BoundaryData.from_maximal_strata([(str(i), v) for i, v in enumerate(vals)], [[str(i) for i in range(k)]], n)


@settings(max_examples=60, deadline=None)
@given(strata_data(), st.integers(0, 2))
def test_condition2_brute_force(data, p):
    ids = [d.id for d in data.divisors]
    pivot = ids[p % len(ids)]
    sol = check_condition2(data, ids, pivot)
    A = [data.val(i) for i in ids]
    b = [int(i == pivot) for i in ids]
    box = brute_force_integer_solutions(A, b, 6)
    if sol is None:
        assert box == []
    else:
        assert all(sum(a * x for a, x in zip(row, sol.solution)) == bi for row, bi in zip(A, b))


def test_schoen_certificate():
    cert = schoen_check(line_data())
    assert cert.lattice_conditions_hold
    assert any("not machine-checked" in n for n in cert.notes)
    bad = BoundaryData([("1", (2, 0))], [["1"]], 2)
    assert not schoen_check(bad).lattice_conditions_hold


def test_hubsch_examples():
    rep = hubsch_check(Fan([Cone([(1, 0), (0, 1)])]))
    top = [s for s in rep.stars if s.cone.dim == 2][0]
    assert top.rigid
    q1 = hubsch_check(Fan([Cone([(1,)]), Cone([(-1,)])]))
    assert not q1.passed
    assert [(s.cone, len(s.translation_space)) for s in q1.failures] == [(Cone.zero(1), 1)]
    rep = hubsch_check(LINE)
    assert rep.passed and rep.minimality == "coarse"
    assert all(s.rigid for s in rep.stars)


def test_hubsch_relabeling_invariant():
    a = hubsch_check(LINE)
    b = hubsch_check(Fan(LINE.maximal_cones[::-1], 2))
    assert [(s.cone, s.translation_space) for s in a.stars] == [(s.cone, s.translation_space) for s in b.stars]


def test_hubsch_flags_non_minimal_structure():
    split = Fan([Cone([(1, 0), (1, 1)]), Cone([(1, 1), (0, 1)])])
    rep = hubsch_check(split)
    assert rep.minimality == "not-minimal" and not rep.passed
