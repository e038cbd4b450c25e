import itertools

import pytest

from segalspans.finset import is_equivalence_span, spans_isomorphic
from segalspans.generators import (
    cyclic_group_table,
    flag_decomposition,
    min_monoid_table,
    nerve_of_monoid,
)
from segalspans.segal import check_1segal, check_2segal
from segalspans.spanalg import (
    DeltaStarMor,
    DeltaStarObj,
    StarFunctor,
    all_delta_star_mors,
    assembly_mor,
    build_star_functor,
    check_algebra_conditions,
    check_associativity,
    identity_star,
    multiplication_span,
    projection_mor,
    single_interval_mor,
    unit_span,
)

from test_segal import drop_top_simplex

Z2 = cyclic_group_table(2)


def test_obj_validation():
    assert len(DeltaStarObj((2, 1))) == 2
    with pytest.raises(ValueError):
        DeltaStarObj(())
    with pytest.raises(ValueError):
        DeltaStarObj((1, -1))


def test_identity_and_basic_mors():
    obj = DeltaStarObj((2, 1))
    ident = identity_star(obj)
    assert ident.compose(ident) == ident
    asm = assembly_mor(3, (2, 1))
    assert asm.fiber(0) == (0, 1)
    proj = projection_mor(obj, 1)
    assert proj.phi == (1,)


def test_mor_validation_rules():
    src = DeltaStarObj((2, 1, 2))
    dst = DeltaStarObj((1,))
    # skipping the middle slot of nonzero rank is forbidden when both
    # outer slots are hit
    with pytest.raises(ValueError):
        DeltaStarMor(
            DeltaStarObj((1, 2, 1)),
            DeltaStarObj((1, 1)),
            (0, 2),
            ((0, (0, 1)), (2, (0, 1))),
        )
    # fine when the skipped slot has rank zero
    DeltaStarMor(
        DeltaStarObj((1, 0, 1)),
        DeltaStarObj((1, 1)),
        (0, 2),
        ((0, (0, 1)), (2, (0, 1))),
    )
    # boundary-hitting: a later hit slot forces the earlier glued map to
    # end at the top of its interval
    with pytest.raises(ValueError):
        DeltaStarMor(
            DeltaStarObj((2, 1)),
            DeltaStarObj((1, 1)),
            (0, 1),
            ((0, (0, 1)), (1, (0, 1))),
        )
    DeltaStarMor(
        DeltaStarObj((2, 1)),
        DeltaStarObj((1, 1)),
        (0, 1),
        ((0, (0, 2)), (1, (0, 1))),
    )


def test_enumeration_counts():
    # single intervals: plain monotone map counts
    assert len(all_delta_star_mors(DeltaStarObj((2,)), DeltaStarObj((2,)))) == 10
    assert len(all_delta_star_mors(DeltaStarObj((2,)), DeltaStarObj((1, 1)))) == 10
    # either projection slot, then any dual map of the interval
    assert len(all_delta_star_mors(DeltaStarObj((1, 1)), DeltaStarObj((2,)))) == 8


_UNIVERSE = [DeltaStarObj((1,)), DeltaStarObj((2,)), DeltaStarObj((1, 1))]


def test_composition_associative_exhaustive_small():
    homs = {
        (i, j): all_delta_star_mors(a, b)
        for i, a in enumerate(_UNIVERSE)
        for j, b in enumerate(_UNIVERSE)
    }
    count = 0
    for i, j, k in itertools.product(range(len(_UNIVERSE)), repeat=3):
        for f in homs[(i, j)][:6]:
            for g in homs[(j, k)][:6]:
                for l in range(len(_UNIVERSE)):
                    for h in homs[(k, l)][:4]:
                        assert h.compose(g).compose(f) == h.compose(g.compose(f))
                        count += 1
    assert count > 2000


def test_functor_value_sizes():
    f = build_star_functor(nerve_of_monoid(Z2, 3))
    assert len(f.value(DeltaStarObj((2, 1, 2)))) == 32
    assert len(f.value(DeltaStarObj((3,)))) == 8
    with pytest.raises(ValueError):
        f.value(DeltaStarObj((4,)))


def test_functor_respects_composition_exhaustive():
    f = build_star_functor(nerve_of_monoid(Z2, 3))
    for a, b in itertools.product(_UNIVERSE, repeat=2):
        for c in _UNIVERSE:
            for mu in all_delta_star_mors(a, b):
                for nu in all_delta_star_mors(b, c):
                    lhs = f.action(nu.compose(mu))
                    rhs = f.action(nu).compose(f.action(mu))
                    assert lhs.assignment == rhs.assignment


def test_functor_identity_action():
    f = build_star_functor(nerve_of_monoid(Z2, 3))
    obj = DeltaStarObj((2, 1))
    act = f.action(identity_star(obj))
    assert act.assignment == f.value(obj).elements


def test_single_interval_action_is_structure_map():
    x = nerve_of_monoid(Z2, 3)
    f = build_star_functor(x)
    mor = single_interval_mor(2, 1, (0, 2))
    act = f.action(mor)
    # the long edge of a 2-simplex is its inner face
    for (e,) in f.value(DeltaStarObj((2,))).elements:
        assert act((e,)) == (x.face(2, 1)(e),)


def test_algebra_conditions_on_corpus():
    for x in (
        nerve_of_monoid(Z2, 4),
        nerve_of_monoid(min_monoid_table(3), 4, unit=2),
        flag_decomposition(2, 4),
    ):
        assert check_algebra_conditions(x).ok


def test_algebra_conditions_match_2segal_verdict():
    good = nerve_of_monoid(Z2, 3)
    bad = drop_top_simplex(good, (1, 1, 1))
    for x in (good, bad):
        assert check_algebra_conditions(x).ok == check_2segal(x).ok
    rep = check_algebra_conditions(bad)
    assert any(f.check == "reduced-square" for f in rep.findings)


def test_multiplication_left_leg_vs_1segal():
    for x in (nerve_of_monoid(Z2, 3), flag_decomposition(2, 3)):
        mu = multiplication_span(x)
        spine_ok = check_1segal(x).ok
        assert mu.left_leg.is_bijection() == spine_ok


def test_unit_span_is_equivalence_iff_x0_matches_x1_units():
    x = nerve_of_monoid(Z2, 3)
    u = unit_span(x)
    assert len(u.apex) == 1
    assert u.right_leg((())) == (0,)


def test_associativity_and_units_on_corpus():
    for x in (
        nerve_of_monoid(Z2, 3),
        nerve_of_monoid(min_monoid_table(2), 3, unit=1),
        flag_decomposition(2, 3),
    ):
        assert check_associativity(x).ok


def test_associativity_fails_on_corrupted_object():
    bad = drop_top_simplex(nerve_of_monoid(Z2, 3), (1, 1, 1))
    rep = check_associativity(bad)
    assert not rep.ok
    assert {f.check for f in rep.findings} & {"assoc-left", "assoc-right"}


def test_three_way_equivalence_on_corpus():
    objs = [
        nerve_of_monoid(Z2, 3),
        flag_decomposition(2, 3),
        drop_top_simplex(nerve_of_monoid(Z2, 3), (1, 1, 1)),
    ]
    for x in objs:
        a = check_2segal(x).ok
        b = check_algebra_conditions(x).ok
        c = check_associativity(x).ok
        assert a == b == c
