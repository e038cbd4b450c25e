"""Finite sets, maps between them, spans, and limits of finite diagrams.

Everything is label-based and deterministic: sets keep their elements
in a canonical order, and every constructed object (pullbacks, limits,
composites of spans) has reproducible element labels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from collections import Counter

from .labels import check_label, label_key


@dataclass(frozen=True)
class FinSet:
    elements: tuple

    def __post_init__(self):
        elems = tuple(self.elements)
        for x in elems:
            check_label(x)
        elems = tuple(sorted(elems, key=label_key))
        if len(set(elems)) != len(elems):
            raise ValueError("duplicate elements")
        object.__setattr__(self, "elements", elems)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def _positions(self):
        # lazy cache; not a dataclass field, so equality is untouched
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {x: i for i, x in enumerate(self.elements)}
            object.__setattr__(self, "_pos", pos)
        return pos

    def __contains__(self, x):
        return x in self._positions()

    def index(self, x):
        pos = self._positions()
        if x not in pos:
            raise ValueError(f"{x!r} is not in this set")
        return pos[x]


def _presorted_finset(elems):
    # product and pullback iteration already emit canonical order over
    # validated labels, so skip the constructor's sort and checks
    s = object.__new__(FinSet)
    object.__setattr__(s, "elements", tuple(elems))
    return s


def terminal_set():
    """The one-point set; its element is the empty tuple."""
    return FinSet(((),))


@dataclass(frozen=True)
class FinMap:
    src: FinSet
    dst: FinSet
    assignment: tuple  # image of src.elements[i], in canonical src order

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if len(self.assignment) != len(self.src):
            raise ValueError("assignment length mismatch")
        dstset = self.dst._positions()
        for y in self.assignment:
            if y not in dstset:
                raise ValueError(f"image {y!r} not in codomain")

    def _lookup(self):
        d = self.__dict__.get("_map")
        if d is None:
            d = dict(zip(self.src.elements, self.assignment))
            object.__setattr__(self, "_map", d)
        return d

    def __call__(self, x):
        try:
            return self._lookup()[x]
        except KeyError:
            raise ValueError(f"{x!r} is not in the source") from None

    def as_dict(self):
        return dict(zip(self.src.elements, self.assignment))

    def compose(self, other):
        """self after other."""
        if other.dst != self.src:
            raise ValueError("composition mismatch")
        return FinMap(other.src, self.dst, tuple(self(y) for y in other.assignment))

    def fiber(self, y):
        return tuple(x for x, v in zip(self.src.elements, self.assignment) if v == y)

    def is_bijection(self):
        return len(set(self.assignment)) == len(self.src) == len(self.dst)

    def inverse(self):
        if not self.is_bijection():
            raise ValueError("not a bijection")
        back = {v: x for x, v in zip(self.src.elements, self.assignment)}
        return FinMap(self.dst, self.src, tuple(back[y] for y in self.dst.elements))


def identity_fin(s):
    return FinMap(s, s, s.elements)


def fin_map_by(src, dst, fn):
    return FinMap(src, dst, tuple(fn(x) for x in src.elements))


def constant_map(src, dst, y):
    return FinMap(src, dst, tuple(y for _ in src.elements))


def terminal_map(src):
    return constant_map(src, terminal_set(), ())


def product_set(a, b):
    """Binary product with pair labels; returns (object, proj1, proj2)."""
    p = _presorted_finset(itertools.product(a.elements, b.elements))
    p1 = fin_map_by(p, a, lambda xy: xy[0])
    p2 = fin_map_by(p, b, lambda xy: xy[1])
    return p, p1, p2


def product_map(f, g):
    pa, _, _ = product_set(f.src, g.src)
    pb, _, _ = product_set(f.dst, g.dst)
    return fin_map_by(pa, pb, lambda xy: (f(xy[0]), g(xy[1])))


def big_product(sets):
    """n-ary product with tuple labels; returns (object, projections)."""
    p = _presorted_finset(itertools.product(*(s.elements for s in sets)))
    projs = tuple(
        fin_map_by(p, s, lambda t, i=i: t[i]) for i, s in enumerate(sets)
    )
    return p, projs


def pullback(f, g):
    """Pullback of f: A -> C <- B : g.

    Elements are the pairs (a, b) with f(a) == g(b); returns the object
    together with the two projections.
    """
    if f.dst != g.dst:
        raise ValueError("pullback needs a shared codomain")
    buckets = {}
    for b, v in zip(g.src.elements, g.assignment):
        buckets.setdefault(v, []).append(b)
    pairs = tuple(
        (a, b)
        for a, v in zip(f.src.elements, f.assignment)
        for b in buckets.get(v, ())
    )
    p = _presorted_finset(pairs)
    p1 = fin_map_by(p, f.src, lambda ab: ab[0])
    p2 = fin_map_by(p, g.src, lambda ab: ab[1])
    return p, p1, p2


@dataclass(frozen=True)
class FinDiagram:
    """A finite diagram: named nodes and arrows between them.

    Arrows are triples (src_name, dst_name, FinMap); several parallel
    arrows are allowed.
    """

    nodes: tuple  # ((name, FinSet), ...)
    arrows: tuple  # ((src_name, dst_name, FinMap), ...)

    def __post_init__(self):
        nodes = tuple(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "arrows", tuple(self.arrows))
        byname = dict(nodes)
        if len(byname) != len(nodes):
            raise ValueError("duplicate node names")
        for s, d, m in self.arrows:
            if s not in byname or d not in byname:
                raise ValueError("arrow endpoint not a node")
            if m.src != byname[s] or m.dst != byname[d]:
                raise ValueError("arrow map does not match its endpoints")

    def node(self, name):
        return dict(self.nodes)[name]


def limit(diagram):
    """Limit of a finite diagram of finite sets.

    Elements are tuples of node values, one per node in sorted node-name
    order, compatible with every arrow.  Returns (object, projections)
    where projections maps node name -> FinMap.

    The empty diagram yields the one-point set.  A cospan yields the
    pullback (up to the labeling of elements), a discrete diagram the
    product.
    """
    byname = dict(diagram.nodes)
    names = sorted(byname, key=label_key)
    order = _join_order(names, diagram.arrows)
    # partial assignments, grown one node at a time; arrows touching
    # already-placed nodes prune candidates immediately
    partials = [dict()]
    placed = set()
    for name in order:
        cands = byname[name].elements
        checks = [
            (s, d, m)
            for (s, d, m) in diagram.arrows
            if (s == name and d in placed) or (d == name and s in placed)
            or (s == name and d == name)
        ]
        nxt = []
        for asg in partials:
            for v in cands:
                ok = True
                for s, d, m in checks:
                    sv = v if s == name else asg[s]
                    dv = v if d == name else asg[d]
                    if m(sv) != dv:
                        ok = False
                        break
                if ok:
                    ext = dict(asg)
                    ext[name] = v
                    nxt.append(ext)
        partials = nxt
        placed.add(name)
    elems = tuple(tuple(asg[n] for n in names) for asg in partials)
    obj = FinSet(elems)
    projs = {
        n: fin_map_by(obj, byname[n], lambda t, i=i: t[i])
        for i, n in enumerate(names)
    }
    return obj, projs


def _join_order(names, arrows):
    """Order nodes so each new node is linked to placed ones when possible."""
    degree = Counter()
    for s, d, _ in arrows:
        degree[s] += 1
        degree[d] += 1
    remaining = list(names)
    order = []
    placed = set()
    while remaining:
        def links(n):
            return sum(
                1 for (s, d, _) in arrows
                if (s == n and d in placed) or (d == n and s in placed)
            )
        # most constrained first; ties broken by arrow degree, then by name
        remaining.sort(key=lambda n: (-links(n), -degree[n], label_key(n)))
        best = remaining.pop(0)
        order.append(best)
        placed.add(best)
    return order


@dataclass(frozen=True)
class Span:
    """A span between two finite sets: left_obj <- apex -> right_obj."""

    left_obj: FinSet
    right_obj: FinSet
    apex: FinSet
    left_leg: FinMap
    right_leg: FinMap

    def __post_init__(self):
        if self.left_leg.src != self.apex or self.right_leg.src != self.apex:
            raise ValueError("legs must start at the apex")
        if self.left_leg.dst != self.left_obj or self.right_leg.dst != self.right_obj:
            raise ValueError("legs must land in the boundary objects")

    def profile(self):
        """Multiset of (left value, right value) pairs over the apex."""
        return Counter(
            (self.left_leg(x), self.right_leg(x)) for x in self.apex.elements
        )


def identity_span(x):
    return Span(x, x, x, identity_fin(x), identity_fin(x))


def reverse_span(s):
    return Span(s.right_obj, s.left_obj, s.apex, s.right_leg, s.left_leg)


def span_from_maps(left_leg, right_leg):
    if left_leg.src != right_leg.src:
        raise ValueError("legs must share their source")
    return Span(left_leg.dst, right_leg.dst, left_leg.src, left_leg, right_leg)


def compose_spans(s, t):
    """Compose two spans, s first then t; needs s.right_obj == t.left_obj.

    The apex is the pullback of the inner legs, so its elements are
    pairs (element of s.apex, element of t.apex).
    """
    if s.right_obj != t.left_obj:
        raise ValueError("spans do not share a boundary object")
    p, p1, p2 = pullback(s.right_leg, t.left_leg)
    return Span(
        s.left_obj,
        t.right_obj,
        p,
        s.left_leg.compose(p1),
        t.right_leg.compose(p2),
    )


def tensor_spans(s, t):
    """Componentwise product of two spans, with pair labels throughout."""
    lo, _, _ = product_set(s.left_obj, t.left_obj)
    ro, _, _ = product_set(s.right_obj, t.right_obj)
    ap, a1, a2 = product_set(s.apex, t.apex)
    ll = fin_map_by(ap, lo, lambda xy: (s.left_leg(xy[0]), t.left_leg(xy[1])))
    rl = fin_map_by(ap, ro, lambda xy: (s.right_leg(xy[0]), t.right_leg(xy[1])))
    return Span(lo, ro, ap, ll, rl)


def is_equivalence_span(s):
    """A span is an equivalence iff both legs are bijections.

    Returns (verdict, witness): the witness is the induced bijection
    left_obj -> right_obj, or None.
    """
    if s.left_leg.is_bijection() and s.right_leg.is_bijection():
        return True, s.right_leg.compose(s.left_leg.inverse())
    return False, None


def spans_isomorphic(s, t):
    """Whether two spans with the same boundary differ by an apex bijection.

    An apex bijection commutes with both legs iff it preserves the pair
    (left value, right value) of every apex element, so the spans are
    isomorphic exactly when those pair multisets agree.  This is the
    fully-pruned form of the leg-fiber search: within a matching
    profile class any pairing works, across classes none does.
    """
    if s.left_obj != t.left_obj or s.right_obj != t.right_obj:
        raise ValueError("spans have different boundaries")
    return s.profile() == t.profile()
