import pytest

from segalspans.finset import FinMap, FinSet, fin_map_by
from segalspans.generators import (
    cech_nerve,
    cyclic_group_table,
    cyclic_nerve_of_group,
    flag_decomposition,
    min_monoid_table,
    nerve_of_monoid,
)
from segalspans.segal import (
    check_1segal,
    check_2segal,
    check_2segal_triangulations,
    check_unital,
    square_instances,
    triangulations,
)
from segalspans.sobj import SimpObj, relabel, truncate

Z2 = cyclic_group_table(2)
Z3 = cyclic_group_table(3)


def drop_top_simplex(x, elem):
    """Remove one non-degenerate top simplex, restricting the tables."""
    top = x.top_rank
    new_top_set = FinSet(tuple(e for e in x.level(top).elements if e != elem))
    faces = [list(row) for row in x.faces]
    faces[top - 1] = [
        FinMap(
            new_top_set,
            m.dst,
            tuple(m(e) for e in new_top_set.elements),
        )
        for m in faces[top - 1]
    ]
    degens = [list(row) for row in x.degens]
    degens[top - 1] = [
        FinMap(m.src, new_top_set, m.assignment) for m in degens[top - 1]
    ]
    sets = list(x.sets)
    sets[top] = new_top_set
    return SimpObj(tuple(sets), tuple(tuple(r) for r in faces), tuple(tuple(r) for r in degens))


def test_square_instances_at_rank_3():
    assert square_instances(3) == [(1, 2, 1), (1, 3, 1), (2, 2, 1), (2, 2, 2)]


def test_truncation_guard():
    x = truncate(nerve_of_monoid(Z2, 3), 2)
    with pytest.raises(ValueError, match="truncation too low"):
        check_2segal(x)
    with pytest.raises(ValueError, match="truncation too low"):
        check_2segal_triangulations(x)


def test_nerves_are_2segal_and_1segal():
    for x in (
        nerve_of_monoid(Z2, 4),
        nerve_of_monoid(Z3, 4),
        nerve_of_monoid(min_monoid_table(3), 4, unit=2),
    ):
        assert check_2segal(x).ok
        assert check_1segal(x).ok
        assert check_unital(x).ok


def test_cyclic_nerve_underlying_is_2segal():
    c = cyclic_nerve_of_group(Z3, 3)
    assert check_2segal(c).ok
    assert check_unital(c).ok


def test_cech_nerve_is_1segal_and_2segal():
    f = FinMap(FinSet((0, 1, 2)), FinSet(("a", "b")), ("a", "a", "b"))
    ch = cech_nerve(f, 4)
    assert check_1segal(ch).ok
    assert check_2segal(ch).ok


def test_flag_decomposition_2segal_but_not_1segal():
    x = flag_decomposition(2, 4)
    assert check_2segal(x).ok
    assert check_unital(x).ok
    rep = check_1segal(x)
    assert not rep.ok
    assert rep.findings[0].location == (2,)


def test_corrupted_nerve_fails_at_first_contentful_square():
    x = nerve_of_monoid(Z2, 3)
    bad = drop_top_simplex(x, (1, 1, 1))
    rep = check_2segal(bad)
    assert not rep.ok
    first = rep.findings[0]
    assert first.location == (2, 2, 1)
    assert "8" in first.detail and "7" in first.detail


def test_triangulation_catalan_counts():
    assert len(triangulations(range(3))) == 1
    assert len(triangulations(range(4))) == 2
    assert len(triangulations(range(5))) == 5
    assert len(triangulations(range(6))) == 14


def test_triangulation_checker_agrees_with_square_form():
    corpus = [
        nerve_of_monoid(Z2, 4),
        nerve_of_monoid(min_monoid_table(2), 4, unit=1),
        flag_decomposition(2, 4),
        drop_top_simplex(nerve_of_monoid(Z2, 3), (1, 1, 1)),
    ]
    for x in corpus:
        assert check_2segal(x).ok == check_2segal_triangulations(x).ok


def test_one_segal_implies_two_segal_on_corpus():
    f = FinMap(FinSet((0, 1, 2)), FinSet(("a", "b")), ("a", "a", "b"))
    for x in (nerve_of_monoid(Z2, 4), cech_nerve(f, 4)):
        if check_1segal(x).ok:
            assert check_2segal(x).ok


def test_verdicts_invariant_under_relabeling():
    for x in (nerve_of_monoid(Z2, 3), flag_decomposition(2, 3)):
        y = relabel(x, lambda n, e: ("tag", n, e))
        assert check_2segal(x).ok == check_2segal(y).ok
        assert check_1segal(x).ok == check_1segal(y).ok
        assert check_unital(x).ok == check_unital(y).ok
        assert (
            check_2segal_triangulations(x).ok
            == check_2segal_triangulations(y).ok
        )


def test_degenerate_corruption_caught_by_unital():
    x = nerve_of_monoid(Z2, 3)
    degens = [list(row) for row in x.degens]
    m = degens[1][0]
    asg = list(m.assignment)
    asg[0] = x.level(2).elements[-1]
    degens[1][0] = FinMap(m.src, m.dst, tuple(asg))
    bad = SimpObj(x.sets, x.faces, tuple(tuple(r) for r in degens))
    assert not check_unital(bad).ok
