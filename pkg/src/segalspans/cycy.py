"""Cyclic algebra layer: ordered pointed maps, mixed interval/cyclic
tuples, and the Calabi-Yau style checks for cyclic objects.

Three pieces live here.  First, a small category of finite pointed sets
whose maps carry a linear order on every fiber, together with a formal
terminal-like object (``DIAMOND``) that absorbs cyclically ordered
subsets.  Second, the category of interval families and cyclic ranks
through which a cyclic object becomes a set-valued functor: families map
to products of levels, cyclic ranks to the matching level, and the three
morphism shapes act through the stored face, degeneracy and rotation
tables.  Third, the checkers: product cones, subdivision pullbacks,
rotation bijections, and the trace pairing with its zig-zag duals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .finset import (
    FinMap,
    Span,
    big_product,
    compose_spans,
    fin_map_by,
    identity_span,
    product_set,
    pullback,
    reverse_span,
    spans_isomorphic,
    tensor_spans,
    terminal_map,
    terminal_set,
)
from .labels import BASE, label_key
from .orders import (
    CycMap,
    CycOrd,
    LinMap,
    cyc_map_by,
    identity_cyc,
    standard_cycle,
    standard_order,
)
from .dualities import PointedMap, PointedSet
from .report import Report
from .sobj import CycObj, apply_delta_op, apply_lambda_op
from .spanalg import _judge_bijection_pairs, multiplication_span


@dataclass(frozen=True)
class _Diamond:
    def __repr__(self):
        return "DIAMOND"


DIAMOND = _Diamond()


# --------------------------------------------------------------------------
# pointed maps with ordered fibers


@dataclass(frozen=True)
class AssMor:
    """A pointed map together with a linear order on every fiber.

    ``fibers`` pairs each non-basepoint target element with the ordered
    tuple of its preimages; source elements missing from every fiber go
    to the basepoint.  Composition concatenates fibers lexicographically.
    """

    src: PointedSet
    dst: PointedSet
    fibers: tuple

    def __post_init__(self):
        fib = {t: tuple(f) for t, f in self.fibers}
        if len(fib) != len(self.fibers):
            raise ValueError("duplicate fiber key")
        if set(fib) != set(self.dst.points):
            raise ValueError("fibers must be indexed by the whole target")
        members = list(itertools.chain.from_iterable(fib.values()))
        if len(set(members)) != len(members):
            raise ValueError("fibers overlap")
        for x in members:
            if x not in self.src.points:
                raise ValueError(f"fiber member {x!r} not in the source")
        canon = tuple(
            sorted(fib.items(), key=lambda tf: label_key(tf[0]))
        )
        object.__setattr__(self, "fibers", canon)

    def fiber(self, t):
        for tt, f in self.fibers:
            if tt == t:
                return f
        raise ValueError(f"{t!r} is not in the target")

    def __call__(self, x):
        for t, f in self.fibers:
            if x in f:
                return t
        if x in self.src.points:
            return BASE
        raise ValueError(f"{x!r} is not in the source")

    @property
    def pointed(self):
        return PointedMap(
            self.src, self.dst, tuple(self(x) for x in self.src.points)
        )

    def compose(self, other):
        """self after other; ordered fibers concatenate."""
        if other.dst != self.src:
            raise ValueError("middle objects disagree")
        fibers = tuple(
            (t, tuple(itertools.chain.from_iterable(other.fiber(m) for m in f)))
            for t, f in self.fibers
        )
        return AssMor(other.src, self.dst, fibers)

    def is_iso(self):
        return len(self.src) == len(self.dst) and all(
            len(f) == 1 for _, f in self.fibers
        )


@dataclass(frozen=True)
class DiamondMor:
    """A map into the absorbing object: a cyclically ordered subset.

    The chosen subset of the source is the carrier of ``cycle``; the
    rest of the source is silently discarded.  ``cycle`` is None for the
    empty subset.
    """

    src: PointedSet
    cycle: object

    def __post_init__(self):
        if self.cycle is not None:
            for x in self.cycle.cycle:
                if x not in self.src.points:
                    raise ValueError(f"cycle member {x!r} not in the source")

    @property
    def dst(self):
        return DIAMOND

    @property
    def subset(self):
        return frozenset(() if self.cycle is None else self.cycle.carrier)

    def compose(self, other):
        """self after other, reading fibers around the cycle."""
        if other.dst != self.src:
            raise ValueError("middle objects disagree")
        if self.cycle is None:
            return DiamondMor(other.src, None)
        seq = tuple(
            itertools.chain.from_iterable(
                other.fiber(t) for t in self.cycle.cycle
            )
        )
        return DiamondMor(other.src, CycOrd(seq) if seq else None)


@dataclass(frozen=True)
class IdDiamond:
    """The identity of the absorbing object, its only outgoing map."""

    @property
    def src(self):
        return DIAMOND

    @property
    def dst(self):
        return DIAMOND


ID_DIAMOND = IdDiamond()


def ass_identity(obj):
    if obj is DIAMOND:
        return ID_DIAMOND
    return AssMor(obj, obj, tuple((x, (x,)) for x in obj.points))


def ass_compose(g, f):
    """g after f in the ordered-fiber category."""
    if isinstance(f, IdDiamond):
        if not isinstance(g, IdDiamond):
            raise ValueError("nothing maps out of the absorbing object")
        return ID_DIAMOND
    if isinstance(g, IdDiamond):
        if isinstance(f, (DiamondMor, IdDiamond)):
            return f
        raise ValueError("composite endpoints disagree")
    return g.compose(f)


def forget_cyclic_to_pointed(f):
    """The ordered-fiber pointed map underlying a cyclic map.

    Carrier elements become the points, the basepoint is fresh, and the
    fiber orders are read off unchanged; no further choice enters.
    """
    src = PointedSet(f.src.cycle)
    dst = PointedSet(f.dst.cycle)
    return AssMor(src, dst, f.fibers)


def all_ass_mors(src, dst):
    """Every ordered-fiber map src -> dst between pointed sets."""
    pts = src.points
    targets = (None,) + dst.points
    for values in itertools.product(targets, repeat=len(pts)):
        groups = {t: [x for x, v in zip(pts, values) if v == t] for t in dst.points}
        pools = [
            itertools.permutations(groups[t]) for t in dst.points
        ]
        for orders in itertools.product(*pools):
            yield AssMor(
                src, dst, tuple(zip(dst.points, map(tuple, orders)))
            )


def all_diamond_mors(src):
    """Every cyclically-ordered-subset map out of a pointed set."""
    pts = src.points
    for r in range(len(pts) + 1):
        for subset in itertools.combinations(pts, r):
            if r == 0:
                yield DiamondMor(src, None)
                continue
            first, rest = subset[0], subset[1:]
            for perm in itertools.permutations(rest):
                yield DiamondMor(src, CycOrd((first,) + perm))


# --------------------------------------------------------------------------
# interval families and cyclic ranks


@dataclass(frozen=True)
class FamilyObj:
    """A finite family of interval ranks keyed by an index set."""

    slots: tuple  # (index label, rank) pairs

    def __post_init__(self):
        slots = tuple(sorted(self.slots, key=lambda s: label_key(s[0])))
        if len({i for i, _ in slots}) != len(slots):
            raise ValueError("repeated index label")
        for _, r in slots:
            if r < 0:
                raise ValueError("ranks must be >= 0")
        object.__setattr__(self, "slots", slots)

    @property
    def index(self):
        return tuple(i for i, _ in self.slots)

    @property
    def ranks(self):
        return {i: r for i, r in self.slots}

    def rank_of(self, i):
        return self.ranks[i]

    def slot_position(self, i):
        return self.index.index(i)

    def __len__(self):
        return len(self.slots)


@dataclass(frozen=True)
class CyclicRank:
    """A bare cyclic rank; the functor sends it to the matching level."""

    rank: int

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("cyclic rank must be >= 0")


def family_of_ranks(pairs):
    return FamilyObj(tuple(pairs))


def family_union_cycle(fam, cycle):
    """The cyclic order gluing the skeletal blocks of a family.

    Walks ``cycle`` through the index set and lays out each block
    bottom to top; elements are (index, point) pairs.
    """
    if tuple(sorted(cycle.cycle, key=label_key)) != fam.index:
        raise ValueError("cycle must order the family index set")
    seq = []
    for i in cycle.cycle:
        seq.extend((i, x) for x in range(fam.rank_of(i) + 1))
    return CycOrd(tuple(seq))


def _ordsum_layout(ranks):
    """Offsets of skeletal blocks inside their ordinal sum."""
    offs = []
    acc = 0
    for r in ranks:
        offs.append(acc)
        acc += r + 1
    return offs, acc


@dataclass(frozen=True)
class FamilyMor:
    """A morphism of families: an index map against the arrow, a linear
    order on each of its fibers, and one monotone gluing map per source
    slot.

    ``phi`` sends target indices to source indices.  ``fiber_orders``
    lists, for every source index, its phi-preimage in a chosen order.
    ``comps`` gives, per source index i, the images of a monotone map
    from the ordinal sum of the fiber's skeletal blocks into [rank_i].
    Unlike the junction-sharing tuples of the purely simplicial layer,
    the blocks here are disjoint and no endpoint condition is imposed.
    """

    src: FamilyObj
    dst: FamilyObj
    phi: tuple  # (target index, source index) pairs
    fiber_orders: tuple  # (source index, ordered tuple of target indices)
    comps: tuple  # (source index, image tuple)

    def __post_init__(self):
        phi = {t: s for t, s in self.phi}
        if len(phi) != len(self.phi) or set(phi) != set(self.dst.index):
            raise ValueError("phi must cover the target index exactly once")
        for t, s in phi.items():
            if s not in self.src.ranks:
                raise ValueError(f"phi image {s!r} not a source index")
        orders = {i: tuple(f) for i, f in self.fiber_orders}
        if set(orders) != set(self.src.index):
            raise ValueError("one fiber order per source index required")
        for i, f in orders.items():
            expect = sorted((t for t in phi if phi[t] == i), key=label_key)
            if sorted(f, key=label_key) != expect:
                raise ValueError(f"fiber order at {i!r} does not list the fiber")
        comps = {i: tuple(c) for i, c in self.comps}
        if set(comps) != set(self.src.index):
            raise ValueError("one gluing map per source index required")
        for i, images in comps.items():
            _, size = _ordsum_layout([self.dst.rank_of(t) for t in orders[i]])
            if len(images) != size:
                raise ValueError(f"gluing map at {i!r} has wrong length")
            top = self.src.rank_of(i)
            for a, b in zip(images, images[1:]):
                if a > b:
                    raise ValueError(f"gluing map at {i!r} is not monotone")
            if any(v < 0 or v > top for v in images):
                raise ValueError(f"gluing map at {i!r} leaves the target")
        canon = lambda d: tuple(sorted(d.items(), key=lambda kv: label_key(kv[0])))
        object.__setattr__(self, "phi", canon(phi))
        object.__setattr__(self, "fiber_orders", canon(orders))
        object.__setattr__(self, "comps", canon(comps))

    def phi_of(self, t):
        return dict(self.phi)[t]

    def fiber_order(self, i):
        return dict(self.fiber_orders)[i]

    def comp(self, i):
        return dict(self.comps)[i]


@dataclass(frozen=True)
class CycRankMor:
    """A morphism of cyclic ranks, carried by a cyclic map against the
    arrow: a map A -> B stores an operator on standard cycles from B's
    to A's."""

    src: CyclicRank
    dst: CyclicRank
    op: CycMap

    def __post_init__(self):
        if self.op.src != standard_cycle(self.dst.rank):
            raise ValueError("operator must start at the target cycle")
        if self.op.dst != standard_cycle(self.src.rank):
            raise ValueError("operator must end at the source cycle")


@dataclass(frozen=True)
class CycToFamilyMor:
    """A morphism from a cyclic rank to a family.

    Data: a cyclic order on the family's index set and a cyclic map from
    the glued block cycle into the source's standard cycle.  The empty
    family admits exactly one such morphism, carrying no data.
    """

    src: CyclicRank
    dst: FamilyObj
    cycle: object  # CycOrd on the index set, or None when empty
    op: object  # CycMap from the union cycle, or None when empty

    def __post_init__(self):
        if len(self.dst) == 0:
            if self.cycle is not None or self.op is not None:
                raise ValueError("empty family target carries no data")
            return
        if self.cycle is None or self.op is None:
            raise ValueError("nonempty family target needs cycle and map")
        union = family_union_cycle(self.dst, self.cycle)
        if self.op.src != union:
            raise ValueError("map must start at the glued block cycle")
        if self.op.dst != standard_cycle(self.src.rank):
            raise ValueError("map must end at the source cycle")


def lambda_star_identity(obj):
    if isinstance(obj, CyclicRank):
        return CycRankMor(obj, obj, identity_cyc(standard_cycle(obj.rank)))
    return FamilyMor(
        obj,
        obj,
        tuple((i, i) for i in obj.index),
        tuple((i, (i,)) for i in obj.index),
        tuple((i, tuple(range(r + 1))) for i, r in obj.slots),
    )


def _compose_family(g, f):
    # g after f, both family morphisms
    phi = {u: f.phi_of(g.phi_of(u)) for u in g.dst.index}
    orders = {}
    comps = {}
    for i in f.src.index:
        walk = []
        for j in f.fiber_order(i):
            walk.extend(g.fiber_order(j))
        orders[i] = tuple(walk)
        mid_ranks = [f.dst.rank_of(j) for j in f.fiber_order(i)]
        mid_offs, _ = _ordsum_layout(mid_ranks)
        images = []
        for j, mid_off in zip(f.fiber_order(i), mid_offs):
            gj = g.comp(j)
            images.extend(f.comp(i)[mid_off + v] for v in gj)
        comps[i] = tuple(images)
    return FamilyMor(
        f.src,
        g.dst,
        tuple(phi.items()),
        tuple(orders.items()),
        tuple(comps.items()),
    )


def _compose_family_after_round(g, f):
    # g: family morphism after f: cyclic-to-family morphism
    if len(g.dst) == 0:
        return CycToFamilyMor(f.src, g.dst, None, None)
    seq = []
    for j in f.cycle.cycle:
        seq.extend(g.fiber_order(j))
    cycle = CycOrd(tuple(seq))
    union = family_union_cycle(g.dst, cycle)
    mid_union = f.op.src
    layout = {}
    for j in g.src.index:
        offs, _ = _ordsum_layout([g.dst.rank_of(k) for k in g.fiber_order(j)])
        layout[j] = dict(zip(g.fiber_order(j), offs))
    assign = {}
    for k, x in union.cycle:
        j = g.phi_of(k)
        assign[(k, x)] = (j, g.comp(j)[layout[j][k] + x])
    fibers = {e: [] for e in mid_union.cycle}
    for j in f.cycle.cycle:
        for k in g.fiber_order(j):
            for x in range(g.dst.rank_of(k) + 1):
                fibers[assign[(k, x)]].append((k, x))
    glue = CycMap(union, mid_union, tuple((e, tuple(v)) for e, v in fibers.items()))
    return CycToFamilyMor(f.src, g.dst, cycle, f.op.compose(glue))


def lambda_star_compose(g, f):
    """g after f among family and cyclic-rank morphisms."""
    if f.dst != g.src:
        raise ValueError("middle objects disagree")
    if isinstance(f, CycRankMor) and isinstance(g, CycRankMor):
        return CycRankMor(f.src, g.dst, f.op.compose(g.op))
    if isinstance(f, CycRankMor) and isinstance(g, CycToFamilyMor):
        if len(g.dst) == 0:
            return CycToFamilyMor(f.src, g.dst, None, None)
        return CycToFamilyMor(f.src, g.dst, g.cycle, f.op.compose(g.op))
    if isinstance(f, FamilyMor) and isinstance(g, FamilyMor):
        return _compose_family(g, f)
    if isinstance(f, CycToFamilyMor) and isinstance(g, FamilyMor):
        return _compose_family_after_round(g, f)
    raise ValueError("no composite for these morphism shapes")


def all_lambda_star_mors(src, dst):
    """Every morphism src -> dst; families never map to cyclic ranks."""
    from .orders import all_cyc_maps, all_lin_maps

    if isinstance(src, FamilyObj) and isinstance(dst, CyclicRank):
        return
    if isinstance(src, CyclicRank) and isinstance(dst, CyclicRank):
        for op in all_cyc_maps(
            standard_cycle(dst.rank), standard_cycle(src.rank)
        ):
            yield CycRankMor(src, dst, op)
        return
    if isinstance(src, CyclicRank):
        if len(dst) == 0:
            yield CycToFamilyMor(src, dst, None, None)
            return
        first, rest = dst.index[0], dst.index[1:]
        for perm in itertools.permutations(rest):
            cycle = CycOrd((first,) + perm)
            union = family_union_cycle(dst, cycle)
            for op in all_cyc_maps(union, standard_cycle(src.rank)):
                yield CycToFamilyMor(src, dst, cycle, op)
        return
    index_s, index_t = src.index, dst.index
    for values in itertools.product(index_s, repeat=len(index_t)):
        phi = dict(zip(index_t, values))
        groups = {i: [t for t in index_t if phi[t] == i] for i in index_s}
        order_pools = [itertools.permutations(groups[i]) for i in index_s]
        for orders in itertools.product(*order_pools):
            orders = dict(zip(index_s, map(tuple, orders)))
            comp_pools = []
            for i in index_s:
                _, size = _ordsum_layout(
                    [dst.rank_of(t) for t in orders[i]]
                )
                comp_pools.append(
                    [
                        m.images
                        for m in all_lin_maps(
                            standard_order(size - 1),
                            standard_order(src.rank_of(i)),
                        )
                    ]
                )
            for comps in itertools.product(*comp_pools):
                yield FamilyMor(
                    src,
                    dst,
                    tuple(phi.items()),
                    tuple(orders.items()),
                    tuple(zip(index_s, comps)),
                )


# --------------------------------------------------------------------------
# the functor out of a cyclic object


class LambdaStarFunctor:
    """Values and actions of a cyclic object on families and ranks.

    Families go to products of the matching levels (the empty family to
    a one-element set), cyclic ranks to the level itself.  Morphism
    actions are assembled slotwise from the stored tables.
    """

    def __init__(self, x):
        if not isinstance(x, CycObj):
            raise ValueError("need a cyclic object")
        self.x = x
        self._values = {}

    def value(self, obj):
        if isinstance(obj, CyclicRank):
            if obj.rank > self.x.top_rank:
                raise ValueError("insufficient truncation")
            return self.x.level(obj.rank)
        for _, r in obj.slots:
            if r > self.x.top_rank:
                raise ValueError("insufficient truncation")
        if obj not in self._values:
            prod, _ = big_product([self.x.level(r) for _, r in obj.slots])
            self._values[obj] = prod
        return self._values[obj]

    def _block_inclusion(self, mor, t):
        i = mor.phi_of(t)
        order = mor.fiber_order(i)
        offs, size = _ordsum_layout([mor.dst.rank_of(j) for j in order])
        off = offs[order.index(t)]
        glued = LinMap(
            standard_order(size - 1),
            standard_order(mor.src.rank_of(i)),
            mor.comp(i),
        )
        block = LinMap(
            standard_order(mor.dst.rank_of(t)),
            standard_order(size - 1),
            tuple(range(off, off + mor.dst.rank_of(t) + 1)),
        )
        return i, glued.compose(block)

    def action(self, mor):
        src_v = self.value(mor.src)
        dst_v = self.value(mor.dst)
        if isinstance(mor, CycRankMor):
            return apply_lambda_op(self.x, mor.op)
        if isinstance(mor, FamilyMor):
            slot_maps = []
            for t in mor.dst.index:
                i, piece = self._block_inclusion(mor, t)
                slot_maps.append(
                    (
                        mor.src.slot_position(i),
                        apply_delta_op(self.x, piece).as_dict(),
                    )
                )
            return fin_map_by(
                src_v,
                dst_v,
                lambda tup: tuple(d[tup[p]] for p, d in slot_maps),
            )
        if isinstance(mor, CycToFamilyMor):
            if len(mor.dst) == 0:
                return fin_map_by(src_v, dst_v, lambda e: ())
            union = mor.op.src
            comps = []
            for i in mor.dst.index:
                a = mor.dst.rank_of(i)
                fibers = tuple(
                    (e, (e[1],) if e[0] == i else ())
                    for e in union.cycle
                )
                arc = CycMap(standard_cycle(a), union, fibers)
                comps.append(apply_lambda_op(self.x, mor.op.compose(arc)))
            values = zip(*(m.assignment for m in comps))
            return FinMap(src_v, dst_v, tuple(values))
        raise ValueError("not a family / cyclic-rank morphism")


def build_lambda_star_functor(x):
    return LambdaStarFunctor(x)


# --------------------------------------------------------------------------
# edge decompositions


def cyclic_edge_decomposition(n):
    """The morphism splitting a cyclic n-cell into its n+1 edges.

    The target family has one rank-1 slot per cyclic gap; the glued
    block cycle maps down by sending the two ends of the gap-i block to
    the vertices i and i+1 (mod n+1), so consecutive blocks overlap in
    one vertex and the last block wraps around.
    """
    fam = FamilyObj(tuple((i, 1) for i in range(n + 1)))
    cycle = standard_cycle(n)
    union = family_union_cycle(fam, cycle)
    fibers = tuple(
        (i, (((i - 1) % (n + 1), 1), (i, 0))) for i in range(n + 1)
    )
    op = CycMap(union, standard_cycle(n), fibers)
    return CycToFamilyMor(CyclicRank(n), fam, cycle, op)


def long_edge_morphism(fam):
    """Collapse every slot of a family to its long edge."""
    dst = FamilyObj(tuple((i, 1) for i in fam.index))
    return FamilyMor(
        fam,
        dst,
        tuple((i, i) for i in fam.index),
        tuple((i, (i,)) for i in fam.index),
        tuple((i, (0, r)) for i, r in fam.slots),
    )


def unit_edges_morphism(fam):
    """Split every slot of a family into its chain of unit edges.

    The target is a rank-1 family over the disjoint union of slot gaps;
    a rank-0 slot contributes nothing and its gluing map is empty.
    """
    dst = FamilyObj(
        tuple(((i, j), 1) for i, r in fam.slots for j in range(r))
    )
    phi = tuple(((i, j), i) for i, r in fam.slots for j in range(r))
    orders = tuple(
        (i, tuple((i, j) for j in range(r))) for i, r in fam.slots
    )
    comps = tuple(
        (i, tuple(itertools.chain.from_iterable((j, j + 1) for j in range(r))))
        for i, r in fam.slots
    )
    return FamilyMor(fam, dst, phi, orders, comps)


# --------------------------------------------------------------------------
# condition checks


def _bijection_finding(rep, check, location, m):
    seen = {}
    for e in m.src.elements:
        v = m(e)
        if v in seen:
            rep.fail(check, location, witness=(seen[v], e),
                     detail="two cells share an image")
            return
        seen[v] = e
    for v in m.dst.elements:
        if v not in seen:
            rep.fail(check, location, witness=v,
                     detail="image misses this cell")
            return
    rep.fail(check, location, detail="map fails to be a bijection")


def _gap_rank_instances(gap_count, cap, level_cap):
    for ranks in itertools.product(range(cap + 1), repeat=gap_count):
        if sum(ranks) <= level_cap:
            yield ranks


def _family_universe(n_top, budget):
    pools = [(0,), (0, 1)]
    for pool in pools:
        for ranks in itertools.product(
            range(min(budget, n_top) + 1), repeat=len(pool)
        ):
            yield FamilyObj(tuple(zip(pool, ranks)))


def check_cy_conditions(x, report=None, budget=2, max_cells=20000):
    """Product cones, subdivision pullbacks, rotation bijections and
    non-degeneracy for a cyclic object.

    ``budget`` bounds index-set sizes and slot ranks of the enumerated
    instances; comparisons whose corners would exceed ``max_cells``
    elements are skipped and counted in the scope notes.
    """
    rep = report if report is not None else Report("cyclic algebra conditions")
    if x.top_rank < 3:
        raise ValueError("truncation too low for cyclic algebra checks")
    fn = LambdaStarFunctor(x)
    n_top = x.top_rank
    skipped = 0

    empty = FamilyObj(())
    if len(fn.value(empty)) != 1:
        rep.fail("empty-product", (), detail="empty family misses the point")
    for fam in _family_universe(n_top, budget):
        prod = fn.value(fam)
        _, projs = big_product([x.level(r) for _, r in fam.slots])
        for pos, (i, r) in enumerate(fam.slots):
            single = FamilyObj(((i, r),))
            mor = FamilyMor(
                fam,
                single,
                ((i, i),),
                tuple((j, (i,) if j == i else ()) for j in fam.index),
                tuple(
                    (j, tuple(range(rr + 1)) if j == i else ())
                    for j, rr in fam.slots
                ),
            )
            act = fn.action(mor)
            got = [act(e)[0] for e in prod.elements]
            want = [projs[pos](e) for e in prod.elements]
            if got != want:
                rep.fail("product-cone", (fam.slots, i),
                         detail="slot projection disagrees with the product")

    for fam in _family_universe(n_top, budget):
        gap_lists = [
            list(_gap_rank_instances(r, budget, n_top)) for _, r in fam.slots
        ]
        for assignment in itertools.product(*gap_lists):
            loc = tuple(
                (i, ranks) for (i, _), ranks in zip(fam.slots, assignment)
            )
            apex = FamilyObj(
                tuple(
                    (i, sum(ranks))
                    for (i, _), ranks in zip(fam.slots, assignment)
                )
            )
            fine = FamilyObj(
                tuple(
                    ((i, j), ranks[j])
                    for (i, _), ranks in zip(fam.slots, assignment)
                    for j in range(len(ranks))
                )
            )
            apex_cells = 1
            for _, r in apex.slots:
                apex_cells *= len(x.level(r))
            fine_cells = 1
            for _, r in fine.slots:
                fine_cells *= len(x.level(r))
            if max(apex_cells, fine_cells) > max_cells:
                skipped += 1
                continue
            to_fine_phi = tuple(((i, j), i) for (i, j), _ in fine.slots)
            to_fine_orders = tuple(
                (i, tuple((i, j) for j in range(len(ranks))))
                for (i, _), ranks in zip(fam.slots, assignment)
            )
            to_fine_comps = []
            for (i, _), ranks in zip(fam.slots, assignment):
                images = []
                off = 0
                for r in ranks:
                    images.extend(off + v for v in range(r + 1))
                    off += r
                to_fine_comps.append((i, tuple(images)))
            to_fine = FamilyMor(
                apex, fine, to_fine_phi, to_fine_orders, tuple(to_fine_comps)
            )
            to_coarse = FamilyMor(
                apex,
                fam,
                tuple((i, i) for i in fam.index),
                tuple((i, (i,)) for i in fam.index),
                tuple(
                    (
                        i,
                        tuple(
                            sum(ranks[:t]) for t in range(len(ranks) + 1)
                        ),
                    )
                    for (i, _), ranks in zip(fam.slots, assignment)
                ),
            )
            long = long_edge_morphism(fine)
            units = unit_edges_morphism(fam)
            a = lambda_star_compose(long, to_fine)
            b = lambda_star_compose(units, to_coarse)
            if a != b:
                raise AssertionError(
                    "subdivision square fails to commute structurally"
                )
            left = fn.action(to_fine)
            right = fn.action(to_coarse)
            pb, _, _ = pullback(fn.action(long), fn.action(units))
            values = list(zip(left.assignment, right.assignment))
            _judge_bijection_pairs(
                rep, "cell-subdivision", loc, fn.value(apex), values, pb
            )

    for n in range(min(n_top, budget) + 1):
        for ranks in itertools.product(range(budget + 1), repeat=n + 1):
            total = sum(ranks)
            if total == 0 or total - 1 > n_top:
                continue
            loc = (n, ranks)
            apex = CyclicRank(total - 1)
            fam = FamilyObj(tuple((g, ranks[g]) for g in range(n + 1)))
            fam_cells = 1
            for r in ranks:
                fam_cells *= len(x.level(r))
            edge_cells = len(x.level(1)) ** total
            if max(len(x.level(total - 1)), fam_cells, edge_cells) > max_cells:
                skipped += 1
                continue
            offs = [sum(ranks[:g]) for g in range(n + 1)]
            cycle = standard_cycle(n)
            union = family_union_cycle(fam, cycle)
            # constant operators keep their full-cycle fiber; it opens at
            # the first position completing a full wrap of the apex
            fam_start = next(
                (e for e in union.cycle if offs[e[0]] + e[1] == total),
                union.cycle[0],
            )
            to_fam_op = cyc_map_by(
                union,
                standard_cycle(total - 1),
                lambda e: (offs[e[0]] + e[1]) % total,
                fiber_start=fam_start,
            )
            to_fam = CycToFamilyMor(apex, fam, cycle, to_fam_op)
            cyc_start = next(
                (i for i in range(n + 1) if offs[i] == total), 0
            )
            to_cyc_op = cyc_map_by(
                standard_cycle(n),
                standard_cycle(total - 1),
                lambda i: offs[i] % total,
                fiber_start=cyc_start,
            )
            to_cyc = CycRankMor(apex, CyclicRank(n), to_cyc_op)
            a = lambda_star_compose(long_edge_morphism(fam), to_fam)
            b = lambda_star_compose(cyclic_edge_decomposition(n), to_cyc)
            if a != b:
                raise AssertionError(
                    "cyclic subdivision square fails to commute structurally"
                )
            pb, _, _ = pullback(
                fn.action(long_edge_morphism(fam)),
                fn.action(cyclic_edge_decomposition(n)),
            )
            left = fn.action(to_fam)
            right = fn.action(to_cyc)
            values = list(zip(left.assignment, right.assignment))
            _judge_bijection_pairs(
                rep, "cyclic-subdivision", loc, fn.value(apex), values, pb
            )

    for n in range(n_top + 1):
        single = FamilyObj(((0, n),))
        cycle = CycOrd((0,))
        union = family_union_cycle(single, cycle)
        for k in range(n + 1):
            op = cyc_map_by(
                union,
                standard_cycle(n),
                lambda e, k=k: (e[1] + k) % (n + 1),
                fiber_start=(0, (-k) % (n + 1)),
            )
            mor = CycToFamilyMor(CyclicRank(n), single, cycle, op)
            act = fn.action(mor)
            comp = FinMap(
                act.src, x.level(n), tuple(v[0] for v in act.assignment)
            )
            if not comp.is_bijection():
                _bijection_finding(rep, "localization-rotation", (n, k), comp)

    for n in range(1, n_top + 1):
        edge = apply_delta_op(
            x,
            LinMap(standard_order(1), standard_order(n), (0, n)),
        )
        vertex = apply_delta_op(
            x,
            LinMap(standard_order(0), standard_order(n - 1), (n - 1,)),
        )
        twisted = x.rot(1).compose(edge)
        pb, _, _ = pullback(twisted, x.degen(0, 0))
        twist_in = x.rot(n).compose(x.degen(n - 1, n - 1))
        comparison = list(zip(twist_in.assignment, vertex.assignment))
        _judge_bijection_pairs(
            rep,
            "rotation-degeneracy-square",
            (n,),
            x.level(n - 1),
            comparison,
            pb,
        )

    check_nondegeneracy(x, rep)
    rep.note_scope(
        f"budget {budget}, truncation {n_top}, {skipped} oversized instances skipped"
    )
    return rep


# --------------------------------------------------------------------------
# the trace pairing


@dataclass(frozen=True)
class TracePairing:
    gamma: Span
    eta_candidate: Span


def trace_span(x):
    """X1 <- X0 -> 1: evaluate on degenerate edges, then discard."""
    return Span(
        x.level(1),
        terminal_set(),
        x.level(0),
        x.degen(0, 0),
        terminal_map(x.level(0)),
    )


def pairing_span(x):
    """The composite of multiplication with the trace."""
    return compose_spans(multiplication_span(x), trace_span(x))


def build_trace_pairing(x):
    gamma = pairing_span(x)
    return TracePairing(gamma, reverse_span(gamma))


def _unitor_spans(x1):
    right, _, _ = product_set(x1, terminal_set())
    left, _, _ = product_set(terminal_set(), x1)
    into_right = Span(
        x1, right, x1, fin_map_by(x1, x1, lambda e: e),
        fin_map_by(x1, right, lambda e: (e, ())),
    )
    out_of_right = Span(
        right, x1, right, fin_map_by(right, right, lambda e: e),
        fin_map_by(right, x1, lambda e: e[0]),
    )
    into_left = Span(
        x1, left, x1, fin_map_by(x1, x1, lambda e: e),
        fin_map_by(x1, left, lambda e: ((), e)),
    )
    out_of_left = Span(
        left, x1, left, fin_map_by(left, left, lambda e: e),
        fin_map_by(left, x1, lambda e: e[1]),
    )
    return into_right, out_of_right, into_left, out_of_left


def _assoc_span(x1, pairs, to_left):
    nested_r, _, _ = product_set(x1, pairs)
    nested_l, _, _ = product_set(pairs, x1)
    if to_left:
        return Span(
            nested_r, nested_l, nested_r,
            fin_map_by(nested_r, nested_r, lambda e: e),
            fin_map_by(nested_r, nested_l, lambda e: ((e[0], e[1][0]), e[1][1])),
        )
    return Span(
        nested_l, nested_r, nested_l,
        fin_map_by(nested_l, nested_l, lambda e: e),
        fin_map_by(nested_l, nested_r, lambda e: (e[0][0], (e[0][1], e[1]))),
    )


def _chain_spans(parts):
    out = parts[0]
    for p in parts[1:]:
        out = compose_spans(out, p)
    return out


def check_nondegeneracy(x, report=None):
    """Bijective-legs and zig-zag criteria for the trace pairing.

    Both criteria are computed independently; a verdict mismatch is
    flagged as an internal error since they are two readings of the same
    non-degeneracy condition.
    """
    rep = report if report is not None else Report("non-degeneracy")
    if x.top_rank < 3:
        raise ValueError("truncation too low for non-degeneracy checks")
    x1 = x.level(1)
    gamma = pairing_span(x)
    eta = reverse_span(gamma)
    pairs = gamma.left_obj

    legs_ok = True
    for idx in (0, 1):
        leg = fin_map_by(
            gamma.apex, x1, lambda e, i=idx: gamma.left_leg(e)[i]
        )
        if not leg.is_bijection():
            legs_ok = False
            _bijection_finding(rep, "pairing-leg", (idx + 1,), leg)

    into_right, out_of_right, into_left, out_of_left = _unitor_spans(x1)
    one = identity_span(x1)
    zig1 = _chain_spans([
        into_right,
        tensor_spans(one, eta),
        _assoc_span(x1, pairs, True),
        tensor_spans(gamma, one),
        out_of_left,
    ])
    zig2 = _chain_spans([
        into_left,
        tensor_spans(eta, one),
        _assoc_span(x1, pairs, False),
        tensor_spans(one, gamma),
        out_of_right,
    ])
    zigzag_ok = True
    for name, z in (("zig-zag-right", zig1), ("zig-zag-left", zig2)):
        if not spans_isomorphic(z, identity_span(x1)):
            zigzag_ok = False
            rep.fail(name, (), detail="composite is not the identity span")

    if legs_ok != zigzag_ok:
        rep.fail(
            "nondegeneracy-internal",
            (),
            detail="bijective-legs and zig-zag verdicts disagree",
        )
    rep.note_scope(
        f"pairing apex has {len(gamma.apex)} cells over {len(x1)} edges"
    )
    return rep
