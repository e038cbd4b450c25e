"""Tests for the cyclic algebra layer: ordered pointed maps, family and
cyclic-rank morphisms, the induced set-valued functor, and the checks."""

import itertools

import pytest

from segalspans.cycy import (
    DIAMOND,
    ID_DIAMOND,
    AssMor,
    CycRankMor,
    CycToFamilyMor,
    CyclicRank,
    DiamondMor,
    FamilyMor,
    FamilyObj,
    LambdaStarFunctor,
    all_ass_mors,
    all_diamond_mors,
    all_lambda_star_mors,
    ass_compose,
    ass_identity,
    check_cy_conditions,
    check_nondegeneracy,
    cyclic_edge_decomposition,
    family_union_cycle,
    forget_cyclic_to_pointed,
    lambda_star_compose,
    lambda_star_identity,
    long_edge_morphism,
    pairing_span,
    unit_edges_morphism,
)
from segalspans.dualities import PointedSet
from segalspans.finset import FinMap
from segalspans.generators import (
    cyclic_group_table,
    cyclic_nerve_of_group,
    groups_up_to_order,
)
from segalspans.orders import CycOrd, CycMap, standard_cycle
from segalspans.sobj import CycObj, SimpObj


# --------------------------------------------------------------------------
# ordered-fiber pointed maps


def test_ass_identity_neutral():
    s = PointedSet((0, 1))
    t = PointedSet(("a",))
    for f in all_ass_mors(s, t):
        assert ass_compose(ass_identity(t), f) == f
        assert ass_compose(f, ass_identity(s)) == f


def test_ass_mor_counts():
    # sum over k of C(s,k) k! C(k+t-1, k) with s = t = 2
    s = PointedSet((0, 1))
    assert len(list(all_ass_mors(s, s))) == 11
    assert len(list(all_diamond_mors(s))) == 4


def test_ass_composition_associative_exhaustive():
    sets = [PointedSet(()), PointedSet((0,)), PointedSet((0, 1))]
    for a, b, c, d in itertools.product(sets, repeat=4):
        for f in all_ass_mors(a, b):
            for g in all_ass_mors(b, c):
                gf = ass_compose(g, f)
                for h in all_ass_mors(c, d):
                    assert ass_compose(h, gf) == ass_compose(
                        ass_compose(h, g), f
                    )


def test_diamond_absorbs():
    s = PointedSet((0, 1, 2))
    d = DiamondMor(s, CycOrd((0, 2)))
    assert d.dst is DIAMOND
    assert d.subset == frozenset((0, 2))
    assert ass_compose(ID_DIAMOND, d) == d
    assert ass_compose(ID_DIAMOND, ID_DIAMOND) is ID_DIAMOND
    with pytest.raises(ValueError):
        ass_compose(d, ID_DIAMOND)


def test_diamond_composition_reads_fibers_cyclically():
    s = PointedSet((0, 1))
    t = PointedSet(("a", "b"))
    f = AssMor(s, t, (("a", (1,)), ("b", (0,))))
    d = DiamondMor(t, CycOrd(("a", "b")))
    out = ass_compose(d, f)
    assert out.cycle == CycOrd((1, 0))
    empty = DiamondMor(t, None)
    assert ass_compose(empty, f) == DiamondMor(s, None)


def test_diamond_composition_associative():
    a = PointedSet((0,))
    b = PointedSet((0, 1))
    for f in all_ass_mors(a, b):
        for g in all_ass_mors(b, b):
            for d in all_diamond_mors(b):
                lhs = ass_compose(d, ass_compose(g, f))
                rhs = ass_compose(ass_compose(d, g), f)
                assert lhs == rhs


def test_basepoint_is_implicit():
    s = PointedSet((0, 1))
    t = PointedSet(("a",))
    f = AssMor(s, t, (("a", (1,)),))
    from segalspans.labels import BASE

    assert f(0) is BASE
    assert f(1) == "a"


def test_forget_cyclic_to_pointed_respects_composition():
    u = standard_cycle(2)
    v = standard_cycle(1)
    f = CycMap(u, v, ((0, (0,)), (1, (1, 2))))
    g = CycMap(v, v, ((0, (1,)), (1, (0,))))
    lhs = forget_cyclic_to_pointed(g.compose(f))
    rhs = ass_compose(
        forget_cyclic_to_pointed(g), forget_cyclic_to_pointed(f)
    )
    assert lhs == rhs
    assert forget_cyclic_to_pointed(f).fiber(1) == (1, 2)


# --------------------------------------------------------------------------
# family and cyclic-rank morphisms


def test_family_obj_canonicalizes_slots():
    f = FamilyObj(((1, 2), (0, 1)))
    assert f.index == (0, 1)
    assert f.rank_of(1) == 2
    with pytest.raises(ValueError):
        FamilyObj(((0, 1), (0, 2)))
    with pytest.raises(ValueError):
        CyclicRank(-1)


def test_family_union_cycle_layout():
    fam = FamilyObj(((0, 1), (1, 0)))
    u = family_union_cycle(fam, CycOrd((0, 1)))
    assert u.cycle == ((0, 0), (0, 1), (1, 0))


def test_morphism_enumeration_counts():
    fa = FamilyObj(((0, 1),))
    fb = FamilyObj((("a", 0), ("b", 1)))
    c0, c1 = CyclicRank(0), CyclicRank(1)
    assert len(list(all_lambda_star_mors(fa, fa))) == 3
    assert len(list(all_lambda_star_mors(c0, fa))) == 2
    assert len(list(all_lambda_star_mors(c1, c0))) == 2
    assert len(list(all_lambda_star_mors(c1, c1))) == 6
    assert len(list(all_lambda_star_mors(fa, fb))) == 8
    assert len(list(all_lambda_star_mors(c1, fb))) == 12
    # families never map to bare cyclic ranks
    assert list(all_lambda_star_mors(fa, c0)) == []


def test_identity_laws():
    fa = FamilyObj(((0, 1),))
    fb = FamilyObj((("a", 0), ("b", 1)))
    c0, c1 = CyclicRank(0), CyclicRank(1)
    for src, dst in ((fa, fb), (c1, c0), (c1, fb), (c0, fa)):
        for f in all_lambda_star_mors(src, dst):
            assert lambda_star_compose(lambda_star_identity(dst), f) == f
            assert lambda_star_compose(f, lambda_star_identity(src)) == f


def test_composition_associative_across_shapes():
    """Triple composites agree for every mix of morphism shapes."""
    fa = FamilyObj(((0, 1),))
    fb = FamilyObj((("a", 0), ("b", 1)))
    c0, c1 = CyclicRank(0), CyclicRank(1)
    chains = [
        (c1, c1, c1, c1),
        (c1, c0, fa, fb),
        (c0, fa, fb, fa),
        (fa, fb, fa, fb),
    ]
    for a, b, c, d in chains:
        for f in all_lambda_star_mors(a, b):
            for g in all_lambda_star_mors(b, c):
                gf = lambda_star_compose(g, f)
                for h in all_lambda_star_mors(c, d):
                    assert lambda_star_compose(h, gf) == lambda_star_compose(
                        lambda_star_compose(h, g), f
                    )


def test_empty_family_is_terminal():
    c1 = CyclicRank(1)
    empty = FamilyObj(())
    degenerate = CycToFamilyMor(c1, empty, None, None)
    assert list(all_lambda_star_mors(c1, empty)) == [degenerate]
    fa = FamilyObj(((0, 1),))
    # the empty product cone: exactly one collapse from any family
    collapses = list(all_lambda_star_mors(fa, empty))
    assert len(collapses) == 1
    assert collapses[0].phi == ()
    for f in all_lambda_star_mors(c1, c1):
        assert lambda_star_compose(degenerate, f) == CycToFamilyMor(
            c1, empty, None, None
        )


def test_invalid_morphism_data_rejected():
    fa = FamilyObj(((0, 1),))
    fb = FamilyObj(((0, 1), (1, 1)))
    with pytest.raises(ValueError):
        # fiber order fails to list the whole fiber
        FamilyMor(fa, fb, ((0, 0), (1, 0)), ((0, (0,)),), ((0, (0, 0, 1, 1)),))
    with pytest.raises(ValueError):
        # non-monotone gluing map
        FamilyMor(fa, fa, ((0, 0),), ((0, (0,)),), ((0, (1, 0)),))
    with pytest.raises(ValueError):
        CycToFamilyMor(CyclicRank(0), FamilyObj(()), CycOrd((0,)), None)


# --------------------------------------------------------------------------
# the functor out of a cyclic nerve


@pytest.fixture(scope="module")
def z2():
    return cyclic_nerve_of_group(cyclic_group_table(2), 3)


@pytest.fixture(scope="module")
def z2_fn(z2):
    return LambdaStarFunctor(z2)


def test_functor_values(z2_fn):
    assert len(z2_fn.value(CyclicRank(2))) == 8
    assert len(z2_fn.value(FamilyObj(()))) == 1
    assert len(z2_fn.value(FamilyObj(((0, 1), (1, 2))))) == 32


def test_functor_truncation_guard(z2_fn):
    with pytest.raises(ValueError):
        z2_fn.value(CyclicRank(4))
    with pytest.raises(ValueError):
        z2_fn.value(FamilyObj(((0, 4),)))


def test_edge_decomposition_shapes():
    sigma = cyclic_edge_decomposition(2)
    assert len(sigma.dst) == 3
    assert all(r == 1 for _, r in sigma.dst.slots)
    fam = FamilyObj(((0, 2),))
    t = long_edge_morphism(fam)
    assert t.comp(0) == (0, 2)
    s = unit_edges_morphism(fam)
    assert s.comp(0) == (0, 1, 1, 2)
    # a rank-0 slot contributes no unit edges
    s0 = unit_edges_morphism(FamilyObj(((0, 0),)))
    assert len(s0.dst) == 0
    assert s0.comp(0) == ()


def test_edge_decomposition_action(z2_fn):
    act = z2_fn.action(cyclic_edge_decomposition(2))
    assert len(act.dst) == 64
    assert act((1, 0, 1)) == ((0, 0), (1, 1), (1, 1))


def test_long_and_unit_edge_actions(z2_fn):
    fam = FamilyObj(((0, 2),))
    t = z2_fn.action(long_edge_morphism(fam))
    s = z2_fn.action(unit_edges_morphism(fam))
    assert t(((1, 0, 1),)) == ((1, 1),)
    assert s(((1, 0, 1),)) == ((0, 0), (1, 1))


def test_functor_respects_composition(z2_fn):
    """Actions of composites equal composites of actions."""
    fa = FamilyObj(((0, 1),))
    fb = FamilyObj((("a", 0), ("b", 1)))
    objs = [CyclicRank(0), CyclicRank(1), FamilyObj(()), fa, fb]
    for a, b in itertools.product(objs, repeat=2):
        for f in all_lambda_star_mors(a, b):
            af = z2_fn.action(f)
            assert af.src == z2_fn.value(a)
            assert af.dst == z2_fn.value(b)
            for c in objs:
                for g in all_lambda_star_mors(b, c):
                    lhs = z2_fn.action(lambda_star_compose(g, f))
                    rhs = z2_fn.action(g).compose(af)
                    assert lhs == rhs


def test_functor_identity_action(z2_fn):
    for obj in (CyclicRank(2), FamilyObj(((0, 1), (1, 2)))):
        act = z2_fn.action(lambda_star_identity(obj))
        assert act.assignment == act.src.elements


# --------------------------------------------------------------------------
# the condition checks


def test_check_cy_passes_small_groups():
    for k in (2, 3):
        x = cyclic_nerve_of_group(cyclic_group_table(k), 3)
        rep = check_cy_conditions(x)
        assert rep.ok, rep.findings[:3]


def test_check_cy_needs_rank_three(z2):
    shallow = CycObj(
        SimpObj(z2.base.sets[:3], z2.base.faces[:2], z2.base.degens[:2]),
        z2.tau[:3],
    )
    with pytest.raises(ValueError):
        check_cy_conditions(shallow)
    with pytest.raises(ValueError):
        check_nondegeneracy(shallow)


def _with_tau(x, n, new_map):
    tau = list(x.tau)
    tau[n] = new_map
    return CycObj(x.base, tuple(tau))


def _with_face(x, n, i, new_map):
    faces = [list(row) for row in x.base.faces]
    faces[n - 1][i] = new_map
    return CycObj(
        SimpObj(x.base.sets, tuple(tuple(r) for r in faces), x.base.degens),
        x.tau,
    )


def test_check_cy_catches_corrupted_rotation(z2):
    t1 = z2.rot(1)
    a = list(t1.assignment)
    a[0], a[1] = a[1], a[0]
    bad = _with_tau(z2, 1, FinMap(t1.src, t1.dst, tuple(a)))
    rep = check_cy_conditions(bad)
    assert not rep.ok
    hit = {f.check for f in rep.findings}
    assert "cyclic-subdivision" in hit or "localization-rotation" in hit


def test_check_cy_catches_corrupted_face(z2):
    f21 = z2.face(2, 1)
    a = list(f21.assignment)
    a[0] = a[1]
    bad = _with_face(z2, 2, 1, FinMap(f21.src, f21.dst, tuple(a)))
    rep = check_cy_conditions(bad)
    assert not rep.ok
    assert "cell-subdivision" in {f.check for f in rep.findings}


def test_nondegeneracy_pairing_apex(z2):
    g = pairing_span(z2)
    assert len(g.apex) == 4
    rep = check_nondegeneracy(z2)
    assert rep.ok


def test_nondegeneracy_passes_z3():
    x = cyclic_nerve_of_group(cyclic_group_table(3), 3)
    assert check_nondegeneracy(x).ok


def test_nondegeneracy_criteria_agree_even_when_failing(z2):
    # corrupting a face breaks the pairing; both readings must agree
    f21 = z2.face(2, 1)
    a = list(f21.assignment)
    a[0] = a[1]
    bad = _with_face(z2, 2, 1, FinMap(f21.src, f21.dst, tuple(a)))
    rep = check_nondegeneracy(bad)
    assert not rep.ok
    assert "nondegeneracy-internal" not in {f.check for f in rep.findings}


def test_check_cy_all_small_groups_smoke():
    # orders 1 and 4 exercise both abelian shapes cheaply
    for name, table in groups_up_to_order(4):
        x = cyclic_nerve_of_group(table, 3)
        rep = check_cy_conditions(x)
        assert rep.ok, (name, rep.findings[:2])
