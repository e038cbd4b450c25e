import itertools
from math import comb

import pytest

from segalspans.labels import label_key
from segalspans.orders import (
    CompatLinOrder,
    CycMap,
    CycOrd,
    IntervalMap,
    LexSumWitness,
    LinMap,
    LinOrd,
    all_cyc_maps,
    all_interval_maps,
    all_lin_maps,
    compare_lex_sum,
    compat_linear_orders,
    cyc_map_by,
    cyclic_mismatch,
    identity_cyc,
    identity_lin,
    imbrication,
    imbrication_map,
    lex_cyclic_union,
    ordinal_sum,
    ordinal_sum_many,
    ordinal_sum_map,
    rotation_map,
    skeletalize,
    standard_cycle,
    standard_order,
    tag_order,
)


# ---------------------------------------------------------------- linear


def test_linord_basics():
    s = LinOrd((3, "a", (1, 2)))
    assert s.skeletal_rank == 2
    assert s.bottom == 3 and s.top == (1, 2)
    assert s.position("a") == 1
    assert list(s) == [3, "a", (1, 2)]


def test_empty_order_is_first_class():
    e = standard_order(-1)
    assert e.skeletal_rank == -1
    assert len(e) == 0
    with pytest.raises(ValueError):
        e.bottom


def test_linord_rejects_duplicates_and_bools():
    with pytest.raises(ValueError):
        LinOrd((1, 1))
    with pytest.raises(TypeError):
        LinOrd((True, 2))


def test_between_and_restrict():
    s = standard_order(5)
    assert s.between(1, 3).elements == (1, 2, 3)
    assert s.restrict([4, 0, 2]).elements == (0, 2, 4)
    with pytest.raises(ValueError):
        s.between(3, 1)
    with pytest.raises(ValueError):
        s.restrict([9])


def test_linmap_validation_and_action():
    f = LinMap(standard_order(2), standard_order(2), (0, 0, 2))
    assert f(1) == 0
    assert f.fiber(0) == (0, 1)
    assert f.positions == (0, 0, 2)
    with pytest.raises(ValueError):
        LinMap(standard_order(1), standard_order(1), (1, 0))
    with pytest.raises(ValueError):
        LinMap(standard_order(1), standard_order(1), (0,))


def test_linmap_compose_and_inverse():
    f = LinMap(standard_order(1), standard_order(2), (0, 2))
    g = LinMap(standard_order(2), standard_order(1), (0, 1, 1))
    assert g.compose(f).images == (0, 1)
    ident = identity_lin(standard_order(3))
    assert ident.inverse() == ident
    with pytest.raises(ValueError):
        f.inverse()


def test_all_lin_maps_count_matches_binomial():
    for a in range(-1, 4):
        for b in range(-1, 4):
            n = sum(1 for _ in all_lin_maps(standard_order(a), standard_order(b)))
            if a == -1:
                assert n == 1
            elif b == -1:
                assert n == 0
            else:
                assert n == comb(a + b + 1, a + 1)


def test_interval_map_requires_endpoints():
    f = LinMap(standard_order(1), standard_order(2), (0, 2))
    assert IntervalMap(f)(0) == 0
    with pytest.raises(ValueError):
        IntervalMap(LinMap(standard_order(1), standard_order(2), (0, 1)))
    n = sum(1 for _ in all_interval_maps(standard_order(2), standard_order(2)))
    # endpoint-preserving [2] -> [2]: middle goes anywhere
    assert n == 3


# ---------------------------------------------------------------- sums


def test_ordinal_sum_examples():
    assert ordinal_sum(standard_order(1), tag_order("t", standard_order(0))).skeletal_rank == 2
    assert ordinal_sum(standard_order(-1), standard_order(3)) == standard_order(3)
    s = ordinal_sum(LinOrd((0,)), LinOrd((1,)))
    assert s.elements == (0, 1)
    with pytest.raises(ValueError):
        ordinal_sum(standard_order(2), standard_order(0))


def test_imbrication_examples():
    a = LinOrd((0, 1))
    b = LinOrd((1, 2))
    assert imbrication(a, b).elements == (0, 1, 2)
    assert imbrication(LinOrd((0,)), LinOrd((0, 1, 2, 3))).skeletal_rank == 3
    assert imbrication(standard_order(2), LinOrd((2, 3))).skeletal_rank == 3
    with pytest.raises(ValueError):
        imbrication(standard_order(-1), a)
    with pytest.raises(ValueError):
        imbrication(LinOrd((0, 1)), LinOrd((5, 1)))


def test_imbrication_drops_min_label_of_second_factor():
    out = imbrication(LinOrd(("x", "y")), LinOrd(("z", "w")))
    assert out.elements == ("x", "y", "w")


def test_sum_and_join_associative_and_unital():
    for p, q, r in itertools.product(range(0, 7), repeat=3):
        s = tag_order("a", standard_order(p - 1))
        t = tag_order("b", standard_order(q - 1))
        u = tag_order("c", standard_order(r - 1))
        lhs = ordinal_sum(ordinal_sum(s, t), u)
        rhs = ordinal_sum(s, ordinal_sum(t, u))
        assert lhs == rhs == ordinal_sum_many([s, t, u])
        if p and q and r:
            assert imbrication(imbrication(s, t), u) == imbrication(s, imbrication(t, u))
            assert len(imbrication(s, t)) == p + q - 1
    e = standard_order(-1)
    x = tag_order("x", standard_order(2))
    assert ordinal_sum(e, x) == ordinal_sum(x, e) == x
    pt = LinOrd((x.bottom,))
    assert imbrication(pt, x) == x
    assert imbrication(x, LinOrd((x.top,))) == x


def test_ordinal_sum_map_and_imbrication_map():
    f = LinMap(standard_order(1), standard_order(1), (0, 0))
    g = LinMap(tag_order("t", standard_order(0)), tag_order("t", standard_order(1)), (("t", 1),))
    sf = ordinal_sum_map(f, g)
    assert sf.images == (0, 0, ("t", 1))
    a = LinMap(standard_order(1), standard_order(1), (0, 1))
    b = LinMap(LinOrd((1, 2)), LinOrd((1, 2)), (1, 2))
    j = imbrication_map(a, b)
    assert j.src.elements == (0, 1, 2)
    assert j.images == (0, 1, 2)


# ---------------------------------------------------------------- cyclic


def test_cycord_canonical_rotation():
    assert CycOrd((2, 0, 1)) == CycOrd((0, 1, 2)) == standard_cycle(2)
    assert CycOrd(("b", "a")).cycle == ("a", "b")
    with pytest.raises(ValueError):
        CycOrd(())
    with pytest.raises(ValueError):
        CycOrd((0, 0))


def test_cycord_successor_and_arc():
    c = standard_cycle(3)
    assert c.successor(3) == 0
    assert c.predecessor(0) == 3
    assert c.arc(2, 1) == (2, 3, 0, 1)
    assert c.arc(1, 1) == (1,)
    assert c.linear_from(2).elements == (2, 3, 0, 1)


def test_compat_linear_orders_count_equals_size():
    for cyc in [
        standard_cycle(0),
        standard_cycle(3),
        standard_cycle(5),
        CycOrd(("p", "q", "r", 7, (1,), "z")),
    ]:
        orders = compat_linear_orders(cyc)
        assert len(orders) == len(cyc)
        assert len({o.listing for o in orders}) == len(cyc)
        for o in orders:
            assert o.rank == cyc.skeletal_rank
            assert o.iso(0) == o.listing[0]
    with pytest.raises(ValueError):
        CompatLinOrder(standard_cycle(2), (0, 2, 1))


def test_cycmap_validation():
    c2, c1 = standard_cycle(2), standard_cycle(1)
    m = CycMap(c2, c1, ((0, (0, 1)), (1, (2,))))
    assert m(1) == 0 and m.fiber(1) == (2,)
    # fiber orders reversed against the source cycle
    with pytest.raises(ValueError):
        CycMap(c2, c1, ((0, (1, 0)), (1, (2,))))
    # missing fiber key
    with pytest.raises(ValueError):
        CycMap(c2, c1, ((0, (0, 1, 2)),))
    # element listed twice
    with pytest.raises(ValueError):
        CycMap(c2, c1, ((0, (0, 1)), (1, (1,))))


def test_cycmap_counts_match_cyclic_category():
    for n in range(0, 4):
        for m in range(0, 4):
            got = sum(1 for _ in all_cyc_maps(standard_cycle(n), standard_cycle(m)))
            assert got == (n + 1) * comb(n + m + 1, n + 1)


def test_cycmap_identity_and_rotations():
    c = standard_cycle(3)
    ident = identity_cyc(c)
    r = rotation_map(c, 1)
    assert r.compose(r.inverse()) == ident
    assert rotation_map(c, 4) == ident
    assert rotation_map(c, -1) == r.inverse()
    for n in range(0, 4):
        cc = standard_cycle(n)
        for f in all_cyc_maps(cc, standard_cycle(1)):
            assert f.compose(identity_cyc(cc)) == f
            assert identity_cyc(f.dst).compose(f) == f


def test_cycmap_composition_associative_small_ranks():
    cycles = [standard_cycle(n) for n in range(0, 3)]
    maps = {}
    for a in cycles:
        for b in cycles:
            maps[(a, b)] = list(all_cyc_maps(a, b))
    for a, b, c, d in itertools.product(cycles, repeat=4):
        for f in maps[(a, b)]:
            for g in maps[(b, c)]:
                gf = g.compose(f)
                for h in maps[(c, d)]:
                    assert h.compose(gf) == h.compose(g).compose(f)


def test_cycmap_composition_associative_sampled_rank3(rng):
    c3 = standard_cycle(3)
    pool = list(all_cyc_maps(c3, c3))
    for _ in range(200):
        f, g, h = (rng.choice(pool) for _ in range(3))
        assert h.compose(g.compose(f)) == h.compose(g).compose(f)


def test_cyc_map_by_recovers_fiber_orders():
    c3, c1 = standard_cycle(3), standard_cycle(1)
    m = cyc_map_by(c3, c1, lambda x: 0 if x in (1, 2) else 1)
    assert m.fiber(0) == (1, 2)
    assert m.fiber(1) == (3, 0)
    const = cyc_map_by(c3, c1, lambda x: 0, fiber_start=2)
    assert const.fiber(0) == (2, 3, 0, 1)
    with pytest.raises(ValueError):
        cyc_map_by(c3, c1, lambda x: 0)


# ---------------------------------------------------------------- unions


def test_lex_cyclic_union_examples():
    two = CycOrd(("a", "b"))
    u = lex_cyclic_union(two, {"a": LinOrd((("a", 0),)), "b": LinOrd((("b", 0),))})
    assert len(u) == 2
    one = standard_cycle(0)
    w = lex_cyclic_union(one, {0: LinOrd(("p", "q", "r"))})
    assert w.successor("r") == "p" and w.successor("p") == "q"
    v = lex_cyclic_union(two, {"a": LinOrd((("a", 0), ("a", 1))), "b": LinOrd((("b", 0),))})
    assert v.successor(("a", 1)) == ("b", 0)
    assert v.successor(("b", 0)) == ("a", 0)


def test_lex_cyclic_union_skips_empty_members():
    c = standard_cycle(2)
    fam = {0: LinOrd(("x",)), 1: standard_order(-1), 2: LinOrd(("y",))}
    u = lex_cyclic_union(c, fam)
    assert u.successor("x") == "y" and u.successor("y") == "x"
    with pytest.raises(ValueError):
        lex_cyclic_union(c, {0: standard_order(-1), 1: standard_order(-1), 2: standard_order(-1)})
    with pytest.raises(ValueError):
        lex_cyclic_union(c, {0: LinOrd(("x",)), 1: LinOrd(("x",)), 2: LinOrd(("y",))})
    with pytest.raises(ValueError):
        lex_cyclic_union(c, {0: LinOrd(("x",))})


def test_compare_lex_sum_certifies_identity():
    c = standard_cycle(2)
    fam = {0: LinOrd((("a", 0), ("a", 1))), 1: LinOrd((("b", 0),)), 2: LinOrd((("c", 0),))}
    for phi in compat_linear_orders(c):
        w = compare_lex_sum(c, phi, fam)
        assert isinstance(w, LexSumWitness)
        assert w.equal and w.mismatch is None
        assert w.carrier == tuple(sorted(w.carrier, key=label_key))


def test_compare_lex_sum_flags_corruption():
    c = CycOrd(("a", "b"))
    fam = {"a": LinOrd((("a", 0), ("a", 1))), "b": LinOrd((("b", 0),))}
    phi = compat_linear_orders(c)[0]
    good = lex_cyclic_union(c, fam)
    corrupted = CycOrd((("a", 0), ("b", 0), ("a", 1)))
    w = compare_lex_sum(c, phi, fam, claimed_union=corrupted)
    assert not w.equal
    element, left, right = w.mismatch
    assert left != right


def test_cyclic_mismatch_requires_same_carrier():
    with pytest.raises(ValueError):
        cyclic_mismatch(standard_cycle(1), standard_cycle(2))
    assert cyclic_mismatch(standard_cycle(2), standard_cycle(2)) is None


def test_skeletalize():
    s = LinOrd(("p", "q", "r"))
    std, back = skeletalize(s)
    assert std == standard_order(2)
    assert back == {"p": 0, "q": 1, "r": 2}
