"""Segal-type checkers for truncated simplicial objects.

Two independent formulations of the 2-dimensional gluing condition are
provided: the binary-square form (one fiber product per decomposition
of an interval into two blocks) and the polygon-triangulation form
(one limit per triangulation).  They serve as oracles for each other.
"""

from __future__ import annotations

from .finset import FinDiagram, limit, pullback
from .labels import label_key
from .orders import lin_map_by, standard_order
from .report import Report
from .sobj import apply_delta_op


def _segment_map(n_big, lo, hi):
    """The inclusion [hi-lo] -> [n_big] onto the segment lo..hi."""
    return lin_map_by(
        standard_order(hi - lo), standard_order(n_big), lambda v: v + lo
    )


def _edge_map(x, n, i, j):
    """The structure map X_n -> X_1 for the edge i..j of the n-simplex."""
    return apply_delta_op(x, lin_map_by(
        standard_order(1), standard_order(n), lambda v: i if v == 0 else j
    ))


def _vertex_map(x, n, i):
    return apply_delta_op(x, lin_map_by(
        standard_order(0), standard_order(n), lambda v: i
    ))


def _judge_comparison(rep, check, location, src_set, values, target_set):
    """Record how a candidate comparison map fails to be a bijection.

    values[i] is the would-be image of src_set.elements[i]; it may fall
    outside target_set when the object's identities are broken, which
    counts as a failure rather than an error.
    """
    target = set(target_set.elements)
    seen = {}
    for e, v in zip(src_set.elements, values):
        if v not in target:
            rep.fail(
                check,
                location,
                witness=e,
                detail="comparison image is not a compatible family",
            )
            return
        if v in seen:
            rep.fail(
                check,
                location,
                witness=(seen[v], e),
                detail="two simplices induce the same glued family",
            )
            return
        seen[v] = e
    if len(values) != len(target_set):
        missing = next(v for v in target_set.elements if v not in seen)
        rep.fail(
            check,
            location,
            witness=missing,
            detail=(
                f"glued family count {len(target_set)} "
                f"vs simplex count {len(values)}"
            ),
        )


def square_instances(n_top):
    """All (n, m, j) decomposition squares visible at this truncation."""
    out = []
    for n in range(1, n_top + 1):
        for m in range(2, n_top + 1):
            if n + m - 1 > n_top:
                continue
            for j in range(1, n + 1):
                out.append((n, m, j))
    return out


def check_2segal(x, report=None):
    """The binary-square gluing condition.

    For every way of substituting an m-block at position j of [n], the
    comparison X_{n+m-1} -> X_n x_{X_1} X_m must be a bijection, where
    the fiber product is taken over the edge j-1..j of [n] and the long
    edge of [m].
    """
    if x.top_rank < 3:
        raise ValueError("truncation too low for 2-Segal checks")
    rep = report if report is not None else Report("2segal-squares")
    for n, m, j in square_instances(x.top_rank):
        big = n + m - 1
        outer = lin_map_by(
            standard_order(n),
            standard_order(big),
            lambda p, j=j, m=m: p if p < j else p + m - 1,
        )
        inner = _segment_map(big, j - 1, j - 1 + m)
        to_n = apply_delta_op(x, outer)
        to_m = apply_delta_op(x, inner)
        edge_n = _edge_map(x, n, j - 1, j)
        edge_m = _edge_map(x, m, 0, m)
        pb, _, _ = pullback(edge_n, edge_m)
        values = [(to_n(e), to_m(e)) for e in x.level(big).elements]
        _judge_comparison(rep, "2segal-square", (n, m, j), x.level(big), values, pb)
    rep.note_scope(f"squares through rank {x.top_rank}")
    return rep


def check_unital(x, report=None):
    """The degenerate-block gluing condition.

    For every edge i..i+1 of [n], pairs (an n-simplex whose i-th edge is
    degenerate, the matching vertex) must biject with X_{n-1}.
    """
    rep = report if report is not None else Report("unital")
    top = x.top_rank
    for n in range(1, top + 1):
        for i in range(n):
            collapse = lin_map_by(
                standard_order(n),
                standard_order(n - 1),
                lambda v, i=i: v if v <= i else v - 1,
            )
            s_i = apply_delta_op(x, collapse)
            vert = _vertex_map(x, n - 1, i)
            edge = _edge_map(x, n, i, i + 1)
            degen_edge = apply_delta_op(x, lin_map_by(
                standard_order(1), standard_order(0), lambda v: 0
            ))
            pb, _, _ = pullback(edge, degen_edge)
            values = [(s_i(e), vert(e)) for e in x.level(n - 1).elements]
            _judge_comparison(rep, "unital-square", (n, i), x.level(n - 1), values, pb)
    rep.note_scope(f"degenerate blocks through rank {top}")
    return rep


def check_1segal(x, report=None):
    """The spine condition: X_n must biject with chains of n edges."""
    rep = report if report is not None else Report("1segal")
    top = x.top_rank
    head = apply_delta_op(x, lin_map_by(
        standard_order(0), standard_order(1), lambda v: 1
    ))
    tail = apply_delta_op(x, lin_map_by(
        standard_order(0), standard_order(1), lambda v: 0
    ))
    for n in range(2, top + 1):
        nodes = [(("e", i), x.level(1)) for i in range(1, n + 1)]
        nodes += [(("v", i), x.level(0)) for i in range(1, n)]
        arrows = []
        for i in range(1, n):
            arrows.append((("e", i), ("v", i), head))
            arrows.append((("e", i + 1), ("v", i), tail))
        obj, _ = limit(FinDiagram(tuple(nodes), tuple(arrows)))
        names = sorted(dict(nodes), key=label_key)
        value_maps = {("e", i): _edge_map(x, n, i - 1, i) for i in range(1, n + 1)}
        value_maps.update({("v", i): _vertex_map(x, n, i) for i in range(1, n)})
        values = [
            tuple(value_maps[nm](e) for nm in names) for e in x.level(n).elements
        ]
        _judge_comparison(rep, "1segal-spine", (n,), x.level(n), values, obj)
    rep.note_scope(f"spines through rank {top}")
    return rep


def triangulations(vertices):
    """All triangulations of the polygon on the given vertex cycle.

    Returns tuples of triangles (i, j, k); the count over an (n+1)-gon
    is the Catalan number.
    """
    verts = tuple(vertices)
    if len(verts) < 3:
        return ((),)
    if len(verts) == 3:
        return ((tuple(sorted(verts)),),)
    first, last = verts[0], verts[-1]
    out = []
    for t, mid in enumerate(verts[1:-1], start=1):
        tri = tuple(sorted((first, mid, last)))
        for left in triangulations(verts[: t + 1]):
            for right in triangulations(verts[t:]):
                out.append(tuple(sorted(left + right + (tri,))))
    return tuple(sorted(set(out)))


def triangulation_diagram(x, n, tris):
    """The diagram of simplices of a triangulated (n+1)-gon.

    Nodes: polygon vertices, all edges appearing in some triangle, and
    the triangles; arrows restrict along face inclusions.
    """
    nodes = []
    arrows = []
    edges = set()
    for (a, b, c) in tris:
        edges.update({(a, b), (b, c), (a, c)})
    lo = apply_delta_op(x, lin_map_by(
        standard_order(0), standard_order(1), lambda v: 0
    ))
    hi = apply_delta_op(x, lin_map_by(
        standard_order(0), standard_order(1), lambda v: 1
    ))
    for v in range(n + 1):
        nodes.append((("v", v), x.level(0)))
    for (a, b) in sorted(edges):
        nodes.append((("e", a, b), x.level(1)))
        arrows.append((("e", a, b), ("v", a), lo))
        arrows.append((("e", a, b), ("v", b), hi))
    for (a, b, c) in tris:
        nodes.append((("t", a, b, c), x.level(2)))
        for (i, j), drop in (((a, b), 2), ((a, c), 1), ((b, c), 0)):
            face = apply_delta_op(x, lin_map_by(
                standard_order(1),
                standard_order(2),
                lambda v, drop=drop: [p for p in range(3) if p != drop][v],
            ))
            arrows.append((("t", a, b, c), ("e", i, j), face))
    return FinDiagram(tuple(nodes), tuple(arrows))


def check_2segal_triangulations(x, report=None, max_rank=None):
    """The triangulation form of the gluing condition.

    For every triangulation of the (n+1)-gon, the simplex values over
    its vertices, edges, and triangles must assemble to a limit that
    the comparison from X_n hits bijectively.
    """
    rep = report if report is not None else Report("2segal-triangulations")
    top = x.top_rank if max_rank is None else min(max_rank, x.top_rank)
    if top < 3:
        raise ValueError("truncation too low for 2-Segal checks")
    for n in range(2, top + 1):
        for tris in triangulations(tuple(range(n + 1))):
            diag = triangulation_diagram(x, n, tris)
            obj, _ = limit(diag)
            names = sorted(dict(diag.nodes), key=label_key)
            value_maps = {}
            for nm in names:
                if nm[0] == "v":
                    value_maps[nm] = _vertex_map(x, n, nm[1])
                elif nm[0] == "e":
                    value_maps[nm] = _edge_map(x, n, nm[1], nm[2])
                else:
                    _, a, b, c = nm
                    value_maps[nm] = apply_delta_op(x, lin_map_by(
                        standard_order(2),
                        standard_order(n),
                        lambda v, t=(a, b, c): t[v],
                    ))
            values = [
                tuple(value_maps[nm](e) for nm in names)
                for e in x.level(n).elements
            ]
            _judge_comparison(rep, "triangulation", (n, tris), x.level(n), values, obj)
    rep.note_scope(f"triangulations through rank {top}")
    return rep
