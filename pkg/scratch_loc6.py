import sys

sys.path.insert(0, "src")

from segalspans.orders import CycOrd
from segalspans.dualities import D_on_map, PointedSet
from segalspans.cycy import (
    AssMor,
    CyclicRank,
    DiamondMor,
    FamilyObj,
    all_lambda_star_mors,
)
from segalspans.localize import (
    OmegaObjLambda,
    OmegaMorLambda,
    localize_morphism,
    weak_fiber_initial,
)

zc2 = weak_fiber_initial(CyclicRank(2))
fam = FamilyObj((("a", 1),))
U = (0, 1, 2)


def arcs_of(useq):
    # (fresh arc, leftover arc) pairs partitioning the cycle
    big = len(useq)
    out = []
    for ln in range(big + 1):
        for start in range(big):
            fresh = tuple(useq[(start + k) % big] for k in range(ln))
            rest_start = (start + ln) % big
            rest = tuple(useq[(rest_start + k) % big] for k in range(big - ln))
            out.append((fresh, rest))
            if ln in (0, big):
                break  # phases handled below for degenerate splits
    # whole/empty splits with phases
    for start in range(big):
        whole = tuple(useq[(start + k) % big] for k in range(big))
        out.append(((), whole))
        out.append((whole, ()))
    # dedup
    seen = []
    for p in out:
        if p not in seen:
            seen.append(p)
    return seen


table = {}
for fresh, rest in arcs_of(U):
    sx_pts = ["a"] + ([("r", "a")] if rest else [])
    sx = PointedSet(tuple(sx_pts))
    fx = [("a", (("m", "a", 0),))]
    gbar_f = [(("m", "a", 0), fresh)]
    if rest:
        fx.append(((("r", "a")), tuple(("t", t) for t in rest)))
        gbar_f.extend(((("t", t), (t,))) for t in rest)
    tx = PointedSet(tuple(e for _, f in fx for e in f))
    x = OmegaObjLambda(AssMor(tx, sx, tuple(fx)), frozenset(("a",)))
    window = ("a",) + (((("r", "a")),) if rest else ())
    phi = OmegaMorLambda(
        zc2, x, DiamondMor(sx, CycOrd(window)), AssMor(zc2.carrier, tx, tuple(gbar_f))
    )
    g = localize_morphism(phi)
    key = g.op.fibers
    table.setdefault(key, []).append((fresh, rest))

print("collapse results (g fibers -> (fresh, leftover)):")
for g in all_lambda_star_mors(CyclicRank(2), fam):
    hits = table.get(g.op.fibers, [])
    d = g.op
    dd = D_on_map(d)
    print(" g", g.op.fibers)
    print("   realized by:", hits)
    print(
        "   D(d) arcs: interior:",
        dd.fiber(("a", 0)),
        " top:",
        dd.fiber(("a", 1)),
    )
