import random
from fractions import Fraction
from itertools import product

import pytest

from tropcomp.fan import (
    Fan,
    FanViolation,
    PolyhedralComplex,
    coarsen,
    common_refinement,
    complex_violation,
    refines,
    same_support,
    slice_at_height_one,
    star,
    support_membership,
    support_translation_space,
    support_witness,
    validate_fan,
)
from tropcomp.polyhedral import Cone, Polyhedron

ORTHANT = Fan([Cone([(1, 0), (0, 1)])])
SPLIT = Fan([Cone([(1, 0), (1, 1)]), Cone([(1, 1), (0, 1)])])
SPLIT12 = Fan([Cone([(1, 0), (1, 2)]), Cone([(1, 2), (0, 1)])])
COMPLETE = Fan([Cone([(a, 0), (0, b)]) for a in (1, -1) for b in (1, -1)])
LINE = Fan([Cone([(1, 0)]), Cone([(0, 1)]), Cone([(-1, -1)])])


def grid_points(rank, r=3, den=2):
    return [tuple(Fraction(x, den) for x in p) for p in product(range(-r * den, r * den + 1), repeat=rank)]


def in_support(fan, p):
    return any(c.contains(p) for c in fan.maximal_cones)


def test_validate_examples():
    assert isinstance(validate_fan(ORTHANT.cones), Fan)
    assert isinstance(validate_fan([Cone([(1, 0), (1, 1)]), Cone([(1, 1), (0, 1)])]), Fan)
    bad = validate_fan([Cone([(1, 0), (0, 1)]), Cone([(1, 1), (-1, 1)])])
    assert isinstance(bad, FanViolation)
    assert (bad.i, bad.j) == (0, 1)
    # the two cones overlap in the 2-cone between (0,1) and (1,1)
    assert bad.intersection == Cone([(0, 1), (1, 1)])
    assert "not a face" in bad.describe()


def test_validate_rank_mismatch():
    with pytest.raises(ValueError):
        validate_fan([Cone([(1, 0)]), Cone([(1, 0, 0)])])


def test_face_closure_is_a_fan():
    for f in (ORTHANT, SPLIT, COMPLETE, LINE):
        assert isinstance(validate_fan(f.cones), Fan)
    assert len(ORTHANT.cones) == 4
    assert len(COMPLETE.cones) == 9


def test_support_membership_examples():
    assert support_membership(ORTHANT, (0, 0)).contained
    q = support_membership(ORTHANT, (1, 1))
    assert q.contained and q.cone.contains(q.point)
    assert not support_membership(ORTHANT, (-1, -1)).contained


def test_refines_examples():
    assert refines(ORTHANT, ORTHANT)
    assert refines(SPLIT, ORTHANT)
    assert not refines(ORTHANT, SPLIT)
    assert not refines(Fan([Cone([(1, 0)])]), ORTHANT)


def test_common_refinement_examples():
    assert common_refinement(ORTHANT, ORTHANT).maximal_cones == ORTHANT.maximal_cones
    r = common_refinement(ORTHANT, SPLIT)
    assert set(r.maximal_cones) == set(SPLIT.maximal_cones)
    r = common_refinement(SPLIT, SPLIT12)
    assert len(r.maximal_cones) == 3
    assert isinstance(validate_fan(r.maximal_cones), Fan)
    assert refines(r, SPLIT) and refines(r, SPLIT12)
    with pytest.raises(ValueError):
        common_refinement(ORTHANT, COMPLETE)


def test_star_examples():
    assert star(SPLIT, Cone.zero(2)).maximal_cones == SPLIT.maximal_cones
    s = star(SPLIT, SPLIT.maximal_cones[0])
    assert s.maximal_cones == (SPLIT.maximal_cones[0],)
    assert len(star(SPLIT, Cone([(1, 1)])).maximal_cones) == 2
    with pytest.raises(ValueError):
        star(ORTHANT, Cone([(1, 1)]))


def test_translation_space_examples():
    assert len(support_translation_space(COMPLETE)) == 2
    assert support_translation_space(ORTHANT) == ()
    assert support_translation_space(LINE) == ()
    half = Fan([Cone([(1, 0)], [(0, 1)])])
    assert support_translation_space(half) == ((0, 1),)
    # the two closed halfplanes x >= 0 and x <= 0 cover the plane, so L is everything
    two = Fan([Cone([(1, 0)], [(0, 1)]), Cone([(-1, 0)], [(0, 1)])])
    assert len(support_translation_space(two)) == 2


def test_translation_space_on_sampled_points():
    rng = random.Random(5)
    fans = [COMPLETE, Fan([Cone([(1, 0, 0)], [(0, 1, 0)]), Cone([(0, 0, 1)], [(0, 1, 0)])]),
            Fan([Cone([(1, 0), (0, 1)], [(0, 0)]), Cone([(1, 0), (0, -1)])])]
    for fan in fans:
        L = support_translation_space(fan)
        pts = [p for p in grid_points(fan.rank, 2, 1) if in_support(fan, p)]
        for p in rng.sample(pts, min(100, len(pts))):
            for v in L:
                for s in (1, -1):
                    assert in_support(fan, tuple(a + s * b for a, b in zip(p, v)))


def test_coarsen_examples():
    r = coarsen(SPLIT)
    assert r.is_fixpoint and r.fan.maximal_cones == ORTHANT.maximal_cones
    r = coarsen(ORTHANT)
    assert r.is_fixpoint and r.merges == () and r.fan.maximal_cones == ORTHANT.maximal_cones


def test_coarsen_order_independent_support():
    cones = [Cone([(1, 0), (1, 1)]), Cone([(1, 1), (-1, 1)]), Cone([(-1, 1), (-1, 0)])]
    results = [coarsen(Fan(order, 2)) for order in (cones, cones[::-1], [cones[1], cones[0], cones[2]])]
    for r in results:
        assert r.is_fixpoint
        assert same_support(r.fan, results[0].fan)
        assert all(c.is_pointed for c in r.fan.maximal_cones)
        assert same_support(r.fan, Fan(cones, 2))


def test_slice_examples():
    C = slice_at_height_one(Fan([Cone([(0, 1)])]))
    assert [P.vertices for P in C.maximal_cells] == [((0,),)]
    C = slice_at_height_one(Fan([Cone([(1, 1), (0, 1)])]))
    assert [P.vertices for P in C.maximal_cells] == [((0,), (1,))]
    assert slice_at_height_one(Fan([Cone([(1, 0)])])).is_empty
    with pytest.raises(ValueError):
        slice_at_height_one(Fan([Cone([(0, -1)])]))


def test_star_contains_sigma():
    for fan in (SPLIT, COMPLETE, LINE):
        for sigma in fan.cones:
            s = star(fan, sigma)
            assert any(c.contains_cone(sigma) for c in s.maximal_cones)


def test_support_witness():
    assert support_witness(SPLIT, ORTHANT) is None
    w = support_witness(COMPLETE, ORTHANT)
    assert in_support(COMPLETE, w) and not in_support(ORTHANT, w)


def test_complex_violation():
    a = Polyhedron([(0, 0), (2, 0)])
    b = Polyhedron([(1, 0), (1, 1)])
    assert complex_violation([a, b]) == (0, 1)
    c = Polyhedron([(2, 0), (2, 1)])
    assert complex_violation([a, c]) is None
    assert PolyhedralComplex([a, c]) == PolyhedralComplex([c, a])
