import itertools

import pytest

from segalspans.finset import (
    FinDiagram,
    FinMap,
    FinSet,
    Span,
    big_product,
    compose_spans,
    constant_map,
    fin_map_by,
    identity_fin,
    identity_span,
    is_equivalence_span,
    limit,
    product_set,
    pullback,
    reverse_span,
    span_from_maps,
    spans_isomorphic,
    tensor_spans,
    terminal_map,
    terminal_set,
)


def test_finset_canonical_order_and_dedup():
    s = FinSet((3, 1, 2))
    assert s.elements == (1, 2, 3)
    with pytest.raises(ValueError):
        FinSet((1, 1))


def test_finmap_validation_and_compose():
    a = FinSet(("x", "y"))
    b = FinSet((0, 1, 2))
    f = FinMap(a, b, (0, 2))
    assert f("x") == 0 and f("y") == 2
    g = fin_map_by(b, a, lambda n: "x" if n < 2 else "y")
    assert g.compose(f).assignment == ("x", "y")
    with pytest.raises(ValueError):
        FinMap(a, b, (0, 7))
    with pytest.raises(ValueError):
        FinMap(a, b, (0,))


def test_finmap_inverse_and_fibers():
    a = FinSet((0, 1, 2))
    f = FinMap(a, a, (2, 0, 1))
    assert f.inverse().compose(f).assignment == a.elements
    assert f.fiber(0) == (1,)
    assert constant_map(a, a, 1).fiber(1) == (0, 1, 2)
    with pytest.raises(ValueError):
        constant_map(a, a, 1).inverse()


def test_pullback_elements_and_projections():
    a = FinSet((0, 1, 2, 3))
    b = FinSet(("u", "v"))
    c = FinSet(("p", "q"))
    f = fin_map_by(a, c, lambda n: "p" if n % 2 == 0 else "q")
    g = FinMap(b, c, ("p", "q"))
    p, p1, p2 = pullback(f, g)
    assert p.elements == ((0, "u"), (1, "v"), (2, "u"), (3, "v"))
    for ab in p:
        assert f(p1(ab)) == g(p2(ab))


def _cones_satisfying(f, g, size):
    """All cones (h1: Z -> src f, h2: Z -> src g) with f h1 == g h2, |Z| == size."""
    z = FinSet(tuple(range(size)))
    out = []
    for im1 in itertools.product(f.src.elements, repeat=size):
        for im2 in itertools.product(g.src.elements, repeat=size):
            if all(f(x) == g(y) for x, y in zip(im1, im2)):
                out.append((z, FinMap(z, f.src, im1), FinMap(z, g.src, im2)))
    return out


def test_pullback_universal_property_small():
    # every cone factors uniquely through the pullback
    a = FinSet((0, 1, 2))
    b = FinSet((0, 1))
    c = FinSet(("p", "q"))
    f = FinMap(a, c, ("p", "q", "p"))
    g = FinMap(b, c, ("p", "q"))
    p, p1, p2 = pullback(f, g)
    for size in (1, 2, 3):
        for z, h1, h2 in _cones_satisfying(f, g, size):
            factorings = [
                u
                for images in itertools.product(p.elements, repeat=size)
                for u in [FinMap(z, p, images)]
                if p1.compose(u).assignment == h1.assignment
                and p2.compose(u).assignment == h2.assignment
            ]
            assert len(factorings) == 1


def test_limit_empty_diagram_is_terminal():
    obj, projs = limit(FinDiagram((), ()))
    assert obj.elements == ((),)
    assert projs == {}


def test_limit_discrete_diagram_is_product():
    a = FinSet((0, 1))
    b = FinSet(("x", "y", "z"))
    obj, projs = limit(FinDiagram((("a", a), ("b", b)), ()))
    assert len(obj) == 6
    prod, _ = big_product([a, b])
    assert {(projs["a"](e), projs["b"](e)) for e in obj} == set(prod.elements)


def test_limit_cospan_matches_pullback():
    a = FinSet((0, 1, 2, 3))
    b = FinSet(("u", "v"))
    c = FinSet(("p", "q"))
    f = fin_map_by(a, c, lambda n: "p" if n % 2 == 0 else "q")
    g = FinMap(b, c, ("p", "q"))
    p, _, _ = pullback(f, g)
    obj, projs = limit(
        FinDiagram(
            (("a", a), ("b", b), ("c", c)),
            (("a", "c", f), ("b", "c", g)),
        )
    )
    assert len(obj) == len(p)
    assert {(projs["a"](e), projs["b"](e)) for e in obj} == set(p.elements)


def test_limit_prunes_with_parallel_arrows():
    a = FinSet((0, 1))
    f = identity_fin(a)
    g = FinMap(a, a, (1, 0))
    # equalizer-style diagram: both arrows must agree, which never happens
    obj, _ = limit(FinDiagram((("a", a), ("b", a)), (("a", "b", f), ("a", "b", g))))
    assert len(obj) == 0


def test_span_validation():
    a = FinSet((0, 1))
    with pytest.raises(ValueError):
        Span(a, a, a, identity_fin(a), FinMap(FinSet((5,)), a, (0,)))


def test_compose_spans_with_identity():
    a = FinSet((0, 1, 2))
    b = FinSet(("x", "y"))
    s = span_from_maps(
        fin_map_by(a, a, lambda n: n),
        fin_map_by(a, b, lambda n: "x" if n else "y"),
    )
    left = compose_spans(identity_span(a), s)
    right = compose_spans(s, identity_span(b))
    assert spans_isomorphic(left, s)
    assert spans_isomorphic(right, s)


def test_compose_spans_boundary_mismatch():
    a = FinSet((0,))
    b = FinSet((1,))
    with pytest.raises(ValueError):
        compose_spans(identity_span(a), identity_span(b))


def _random_span(rng, left, right, apex_size):
    apex = FinSet(tuple(range(apex_size)))
    ll = FinMap(apex, left, tuple(rng.choice(left.elements) for _ in apex.elements))
    rl = FinMap(apex, right, tuple(rng.choice(right.elements) for _ in apex.elements))
    return Span(left, right, apex, ll, rl)


def test_compose_spans_associative_up_to_iso(rng):
    objs = [FinSet(tuple(range(1, n + 1))) for n in (1, 2, 3)]
    for _ in range(60):
        a, b, c, d = (rng.choice(objs) for _ in range(4))
        s = _random_span(rng, a, b, rng.randrange(4))
        t = _random_span(rng, b, c, rng.randrange(4))
        u = _random_span(rng, c, d, rng.randrange(4))
        lhs = compose_spans(compose_spans(s, t), u)
        rhs = compose_spans(s, compose_spans(t, u))
        assert spans_isomorphic(lhs, rhs)


def test_equivalence_span_witness():
    a = FinSet((0, 1, 2))
    b = FinSet(("x", "y", "z"))
    apex = FinSet((10, 11, 12))
    s = Span(a, b, apex, FinMap(apex, a, (2, 1, 0)), FinMap(apex, b, ("x", "z", "y")))
    ok, w = is_equivalence_span(s)
    assert ok
    assert w.src == a and w.dst == b
    # witness sends left-leg values to right-leg values apexwise
    for x in apex:
        assert w(s.left_leg(x)) == s.right_leg(x)
    bad = Span(a, b, apex, FinMap(apex, a, (0, 0, 1)), FinMap(apex, b, ("x", "z", "y")))
    assert is_equivalence_span(bad) == (False, None)


def test_equivalence_spans_closed_under_composition(rng):
    a = FinSet((0, 1, 2))
    perms = list(itertools.permutations(a.elements))
    for _ in range(30):
        s = span_from_maps(
            FinMap(a, a, rng.choice(perms)), FinMap(a, a, rng.choice(perms))
        )
        t = span_from_maps(
            FinMap(a, a, rng.choice(perms)), FinMap(a, a, rng.choice(perms))
        )
        ok_s, _ = is_equivalence_span(s)
        ok_t, _ = is_equivalence_span(t)
        assert ok_s and ok_t
        ok, w = is_equivalence_span(compose_spans(s, t))
        assert ok and w.is_bijection()


def test_spans_isomorphic_profile_sensitivity():
    a = FinSet((0, 1))
    apex = FinSet((0, 1))
    s = Span(a, a, apex, identity_fin(apex), identity_fin(apex))
    t = Span(a, a, apex, identity_fin(apex), FinMap(apex, a, (1, 0)))
    assert not spans_isomorphic(s, t)
    # relabeled apex with the same leg profile is isomorphic
    apex2 = FinSet(("p", "q"))
    u = Span(a, a, apex2, FinMap(apex2, a, (1, 0)), FinMap(apex2, a, (1, 0)))
    assert spans_isomorphic(s, u)
    with pytest.raises(ValueError):
        spans_isomorphic(s, identity_span(FinSet(("w",))))


def test_tensor_and_reverse_spans():
    a = FinSet((0, 1))
    s = identity_span(a)
    t = tensor_spans(s, s)
    assert len(t.apex) == 4
    assert t.left_obj.elements == t.right_obj.elements
    ok, _ = is_equivalence_span(t)
    assert ok
    r = reverse_span(s)
    assert r.left_obj == s.right_obj


def test_terminal_helpers():
    a = FinSet((3, 4))
    tm = terminal_map(a)
    assert tm.dst == terminal_set()
    assert tm.assignment == ((), ())
    p, p1, p2 = product_set(a, terminal_set())
    assert len(p) == 2 and p1.is_bijection()
