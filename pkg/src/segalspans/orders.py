"""Finite linear and cyclic orders with labelled carriers.

Linear orders list their elements bottom to top; the empty order is a
first-class object.  Cyclic orders are nonempty and are stored in a
canonical rotation (starting at the least label) so equal cycles compare
equal.  A map of cyclic orders carries a linear order on every fiber and
is valid when reading the fibers around the target reproduces the source
cycle.

Labels are never renamed implicitly.  Operations that would need
disjoint carriers reject collisions; callers disjointify with
``tag_order`` first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .labels import check_label, label_key


# --------------------------------------------------------------------------
# linear orders


@dataclass(frozen=True)
class LinOrd:
    """A finite linear order; ``elements`` runs from least to greatest."""

    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        for x in self.elements:
            check_label(x)
        if len(set(self.elements)) != len(self.elements):
            raise ValueError(f"repeated label in linear order: {self.elements!r}")

    @property
    def skeletal_rank(self):
        # -1 encodes the empty order
        return len(self.elements) - 1

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def position(self, x):
        return self.elements.index(x)

    @property
    def bottom(self):
        if not self.elements:
            raise ValueError("empty order has no bottom")
        return self.elements[0]

    @property
    def top(self):
        if not self.elements:
            raise ValueError("empty order has no top")
        return self.elements[-1]

    def between(self, lo, hi):
        """The closed sub-order from lo to hi."""
        i, j = self.position(lo), self.position(hi)
        if i > j:
            raise ValueError("between() requires lo <= hi")
        return LinOrd(self.elements[i : j + 1])

    def restrict(self, labels):
        """The sub-order on the given labels, in the inherited order."""
        keep = set(labels)
        missing = keep - set(self.elements)
        if missing:
            raise ValueError(f"labels not in order: {sorted(missing, key=label_key)!r}")
        return LinOrd(tuple(x for x in self.elements if x in keep))


def standard_order(n):
    """The skeletal order with elements 0..n; n = -1 gives the empty order."""
    if n < -1:
        raise ValueError("rank must be >= -1")
    return LinOrd(tuple(range(n + 1)))


def tag_order(prefix, order):
    """Relabel every element x to (prefix, x); used to disjointify carriers."""
    return LinOrd(tuple((prefix, x) for x in order.elements))


def skeletalize(order):
    """Relabel to 0..n, returning (standard order, old-label -> position)."""
    return standard_order(order.skeletal_rank), {
        x: i for i, x in enumerate(order.elements)
    }


@dataclass(frozen=True)
class LinMap:
    """An order-preserving map, stored as one image per source element."""

    src: LinOrd
    dst: LinOrd
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != len(self.src):
            raise ValueError("one image per source element required")
        pos = tuple(self.dst.position(y) for y in self.images)
        if any(a > b for a, b in zip(pos, pos[1:])):
            raise ValueError(f"map is not order-preserving: {self.images!r}")

    def __call__(self, x):
        return self.images[self.src.position(x)]

    @property
    def positions(self):
        """Images rewritten as positions in the target."""
        return tuple(self.dst.position(y) for y in self.images)

    def fiber(self, y):
        return tuple(x for x, v in zip(self.src.elements, self.images) if v == y)

    def compose(self, other):
        """self after other."""
        if other.dst != self.src:
            raise ValueError("middle objects disagree")
        return LinMap(other.src, self.dst, tuple(self(y) for y in other.images))

    def is_iso(self):
        return len(self.src) == len(self.dst) and len(set(self.images)) == len(
            self.images
        )

    def inverse(self):
        if not self.is_iso():
            raise ValueError("map is not invertible")
        back = {y: x for x, y in zip(self.src.elements, self.images)}
        return LinMap(self.dst, self.src, tuple(back[y] for y in self.dst.elements))

    def is_endpoint_preserving(self):
        return (
            len(self.src) > 0
            and len(self.dst) > 0
            and self.images[0] == self.dst.bottom
            and self.images[-1] == self.dst.top
        )


def identity_lin(order):
    return LinMap(order, order, order.elements)


def lin_map_by(src, dst, fn):
    """Build a LinMap from a callable."""
    return LinMap(src, dst, tuple(fn(x) for x in src.elements))


def all_lin_maps(src, dst):
    """Every order-preserving map src -> dst."""
    for pos in itertools.combinations_with_replacement(range(len(dst)), len(src)):
        yield LinMap(src, dst, tuple(dst.elements[p] for p in pos))


@dataclass(frozen=True)
class IntervalMap:
    """An order-preserving map that fixes both endpoints.

    Source and target must be nonempty; these are the maps along which
    inner gap structure can be pulled back.
    """

    underlying: LinMap

    def __post_init__(self):
        if not self.underlying.is_endpoint_preserving():
            raise ValueError("map does not preserve both endpoints")

    @property
    def src(self):
        return self.underlying.src

    @property
    def dst(self):
        return self.underlying.dst

    def __call__(self, x):
        return self.underlying(x)

    def compose(self, other):
        return IntervalMap(self.underlying.compose(other.underlying))


def identity_interval(order):
    return IntervalMap(identity_lin(order))


def all_interval_maps(src, dst):
    for f in all_lin_maps(src, dst):
        if f.is_endpoint_preserving():
            yield IntervalMap(f)


# --------------------------------------------------------------------------
# sums and joins


def ordinal_sum(s, t):
    """Concatenate two linear orders; every s-element below every t-element."""
    clash = set(s.elements) & set(t.elements)
    if clash:
        raise ValueError(f"label collision in ordinal sum: {sorted(clash, key=label_key)!r}")
    return LinOrd(s.elements + t.elements)


def ordinal_sum_many(parts):
    out = ()
    seen = set()
    for p in parts:
        if seen & set(p.elements):
            raise ValueError("label collision in ordinal sum")
        seen |= set(p.elements)
        out += p.elements
    return LinOrd(out)


def ordinal_sum_map(f, g):
    """The sum of two maps, acting blockwise on an ordinal sum."""
    src = ordinal_sum(f.src, g.src)
    dst = ordinal_sum(f.dst, g.dst)
    return LinMap(src, dst, f.images + g.images)


def imbrication(s, t):
    """Join two nonempty orders end to end, merging max(s) with min(t).

    The merged element keeps the label of max(s); min(t)'s label is
    dropped.  The two carriers must otherwise be disjoint, though t may
    already reuse the junction label for its minimum.
    """
    if len(s) == 0 or len(t) == 0:
        raise ValueError("imbrication requires interval objects")
    # min(t)'s label is discarded by the merge, so it may freely reuse a
    # label of s; only the surviving labels must stay distinct
    rest = t.elements[1:]
    clash = set(rest) & set(s.elements)
    if clash:
        raise ValueError(f"label collision in imbrication: {sorted(clash, key=label_key)!r}")
    return LinOrd(s.elements + rest)


def imbrication_map(f, g):
    """Join two endpoint-compatible interval maps along the junction.

    Requires f(max src f) and g(min src g) to be the tops/bottoms merged
    by the imbrications of the sources and targets.
    """
    src = imbrication(f.src, g.src)
    dst = imbrication(f.dst, g.dst)
    images = f.images + tuple(
        y if y != g.dst.bottom else f.dst.top for y in g.images[1:]
    )
    return LinMap(src, dst, images)


# --------------------------------------------------------------------------
# cyclic orders


@dataclass(frozen=True)
class CycOrd:
    """A nonempty cyclic order, stored from its least label onward."""

    cycle: tuple

    def __post_init__(self):
        cyc = tuple(self.cycle)
        if not cyc:
            raise ValueError("cyclic orders are nonempty")
        for x in cyc:
            check_label(x)
        if len(set(cyc)) != len(cyc):
            raise ValueError(f"repeated label in cyclic order: {cyc!r}")
        start = min(range(len(cyc)), key=lambda i: label_key(cyc[i]))
        object.__setattr__(self, "cycle", cyc[start:] + cyc[:start])

    @property
    def carrier(self):
        return frozenset(self.cycle)

    @property
    def skeletal_rank(self):
        return len(self.cycle) - 1

    def __len__(self):
        return len(self.cycle)

    def __iter__(self):
        return iter(self.cycle)

    def __contains__(self, x):
        return x in self.cycle

    def successor(self, x):
        i = self.cycle.index(x)
        return self.cycle[(i + 1) % len(self.cycle)]

    def predecessor(self, x):
        i = self.cycle.index(x)
        return self.cycle[i - 1]

    @property
    def successor_map(self):
        n = len(self.cycle)
        return {x: self.cycle[(i + 1) % n] for i, x in enumerate(self.cycle)}

    def linear_from(self, x):
        """The compatible linear order that starts at x."""
        i = self.cycle.index(x)
        return LinOrd(self.cycle[i:] + self.cycle[:i])

    def arc(self, a, b):
        """Elements from a to b inclusive, walking forward."""
        i = self.cycle.index(a)
        j = self.cycle.index(b)
        n = len(self.cycle)
        span = (j - i) % n
        return tuple(self.cycle[(i + k) % n] for k in range(span + 1))


def standard_cycle(n):
    """The skeletal cyclic order on 0..n."""
    if n < 0:
        raise ValueError("cyclic rank must be >= 0")
    return CycOrd(tuple(range(n + 1)))


@dataclass(frozen=True)
class CompatLinOrder:
    """A linear order on a cyclic carrier that induces the given cycle.

    ``listing`` enumerates the carrier bottom to top; it must be a
    rotation of the base cycle.  ``iso`` gives the position form.
    """

    base: CycOrd
    listing: tuple

    def __post_init__(self):
        object.__setattr__(self, "listing", tuple(self.listing))
        n = len(self.base)
        if len(self.listing) != n:
            raise ValueError("listing must enumerate the whole carrier")
        if CycOrd(self.listing) != self.base:
            raise ValueError("listing is not a rotation of the base cycle")

    @property
    def rank(self):
        return len(self.listing) - 1

    def iso(self, i):
        """Image of position i under the chosen bijection from 0..n."""
        return self.listing[i]

    @property
    def order(self):
        return LinOrd(self.listing)


def compat_linear_orders(base):
    """All compatible linear orders on a cyclic order (one per start)."""
    return tuple(
        CompatLinOrder(base, base.linear_from(x).elements) for x in base.cycle
    )


@dataclass(frozen=True)
class CycMap:
    """A map of cyclic orders with a chosen linear order on each fiber.

    ``fibers`` pairs every target element with the tuple of its
    preimages.  Validity: walking the target cycle and reading each
    fiber in its listed order must reproduce the source cycle.
    """

    src: CycOrd
    dst: CycOrd
    fibers: tuple

    def __post_init__(self):
        fib = {d: tuple(f) for d, f in self.fibers}
        if len(fib) != len(self.fibers):
            raise ValueError("duplicate fiber key")
        if set(fib) != self.dst.carrier:
            raise ValueError("fibers must be indexed by the whole target")
        seen = list(itertools.chain.from_iterable(fib[d] for d in self.dst.cycle))
        if sorted(seen, key=label_key) != sorted(self.src.cycle, key=label_key):
            raise ValueError("fibers do not partition the source")
        if CycOrd(tuple(seen)) != self.src:
            raise ValueError("fiber orders do not induce the source cycle")
        canon = tuple(sorted(((d, tuple(f)) for d, f in fib.items()),
                             key=lambda df: label_key(df[0])))
        object.__setattr__(self, "fibers", canon)

    def __call__(self, x):
        for d, f in self.fibers:
            if x in f:
                return d
        raise ValueError(f"{x!r} is not in the source")

    @property
    def assignment(self):
        return {x: d for d, f in self.fibers for x in f}

    def fiber(self, d):
        for dd, f in self.fibers:
            if dd == d:
                return f
        raise ValueError(f"{d!r} is not in the target")

    def compose(self, other):
        """self after other; fibers concatenate lexicographically."""
        if other.dst != self.src:
            raise ValueError("middle objects disagree")
        fibers = tuple(
            (d, tuple(itertools.chain.from_iterable(other.fiber(m) for m in f)))
            for d, f in self.fibers
        )
        return CycMap(other.src, self.dst, fibers)

    def is_iso(self):
        return len(self.src) == len(self.dst) and all(
            len(f) == 1 for _, f in self.fibers
        )

    def inverse(self):
        if not self.is_iso():
            raise ValueError("map is not invertible")
        return CycMap(
            self.dst, self.src, tuple((f[0], (d,)) for d, f in self.fibers)
        )


def identity_cyc(base):
    return CycMap(base, base, tuple((x, (x,)) for x in base.cycle))


def cyc_map_by(src, dst, fn, fiber_start=None):
    """Build a CycMap from a set map, recovering fiber orders from the cycle.

    Fibers of a valid cyclic map are arcs of the source, so their orders
    are forced once a block boundary exists.  If fn is constant-like
    (one nonempty fiber), ``fiber_start`` must name the element that
    opens the fiber.
    """
    values = {x: fn(x) for x in src.cycle}
    cyc = src.cycle
    n = len(cyc)
    boundary = None
    for i in range(n):
        if values[cyc[i - 1]] != values[cyc[i]]:
            boundary = i
            break
    if boundary is None:
        if fiber_start is None:
            raise ValueError("constant map needs an explicit fiber_start")
        boundary = cyc.index(fiber_start)
    walk = cyc[boundary:] + cyc[:boundary]
    fibers = {d: [] for d in dst.cycle}
    for x in walk:
        fibers[values[x]].append(x)
    return CycMap(src, dst, tuple((d, tuple(f)) for d, f in fibers.items()))


def rotation_map(base, k=1):
    """The automorphism sending every element k steps forward."""
    n = len(base)
    cyc = base.cycle
    return CycMap(
        base, base, tuple((cyc[(i + k) % n], (cyc[i],)) for i in range(n))
    )


def all_cyc_maps(src, dst):
    """Every cyclic map src -> dst (assignment plus fiber orders)."""
    seen = set()
    n = len(src)
    for values in itertools.product(dst.cycle, repeat=n):
        assign = dict(zip(src.cycle, values))
        for start in range(n):
            walk = src.cycle[start:] + src.cycle[:start]
            fibers = {d: [] for d in dst.cycle}
            for x in walk:
                fibers[assign[x]].append(x)
            try:
                m = CycMap(src, dst, tuple((d, tuple(f)) for d, f in fibers.items()))
            except ValueError:
                continue
            if m not in seen:
                seen.add(m)
                yield m


def cyclic_mismatch(c1, c2):
    """First element whose successors differ, or None if the cycles agree."""
    if c1.carrier != c2.carrier:
        raise ValueError("cycles live on different carriers")
    s1, s2 = c1.successor_map, c2.successor_map
    for x in c1.cycle:
        if s1[x] != s2[x]:
            return (x, s1[x], s2[x])
    return None


def lex_cyclic_union(base, fam):
    """Glue a family of linear orders around a cyclic index.

    ``fam`` maps each element of ``base`` to a LinOrd; members must have
    pairwise disjoint, globally distinct labels.  Empty members are
    skipped by the successor.  The result walks each member bottom to
    top, then jumps to the next nonempty member around the cycle.
    """
    if set(fam) != base.carrier:
        raise ValueError("family must be indexed by the cyclic carrier")
    seq = []
    seen = set()
    for i in base.cycle:
        part = fam[i].elements
        if seen & set(part):
            raise ValueError("label collision across family members")
        seen |= set(part)
        seq.extend(part)
    if not seq:
        raise ValueError("union of an all-empty family is empty")
    return CycOrd(tuple(seq))


@dataclass(frozen=True)
class LexSumWitness:
    """Certificate comparing the closed linear sum with the cyclic union.

    The comparison map is the identity on ``carrier``.  ``mismatch`` is
    None when the successor permutations agree, else a triple (element,
    successor in the closed sum, successor in the union).
    """

    equal: bool
    carrier: tuple
    mismatch: tuple | None


def compare_lex_sum(base, phi, fam, claimed_union=None):
    """Certify that summing along a compatible order matches the cyclic union.

    ``phi`` picks a compatible linear order on ``base``; the family is
    summed in that order and closed into a cycle, then compared with the
    lexicographic cyclic union (or with ``claimed_union`` if given).  A
    mismatch indicates corrupted input and is returned, not raised.
    """
    if phi.base != base:
        raise ValueError("compatible order is for a different cycle")
    summed = ordinal_sum_many([fam[x] for x in phi.listing])
    if len(summed) == 0:
        raise ValueError("union of an all-empty family is empty")
    closed = CycOrd(summed.elements)
    union = claimed_union if claimed_union is not None else lex_cyclic_union(base, fam)
    diff = cyclic_mismatch(closed, union)
    carrier = tuple(sorted(closed.cycle, key=label_key))
    return LexSumWitness(diff is None, carrier, diff)
