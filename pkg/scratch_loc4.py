import sys

sys.path.insert(0, "src")

from segalspans.orders import CycOrd, standard_cycle
from segalspans.dualities import PointedSet
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

# X for the all-cuts-at-one-element shape: single fresh element, whole-U fiber
sx = PointedSet(("a",))
tx = PointedSet((("m", "a", 0),))
x = OmegaObjLambda(
    AssMor(tx, sx, (("a", (("m", "a", 0),)),)), frozenset(("a",))
)

for rot in range(3):
    arc = tuple((k + rot) % 3 for k in range(3))
    gbar = AssMor(zc2.carrier, tx, ((("m", "a", 0), arc),))
    phi = OmegaMorLambda(zc2, x, DiamondMor(sx, CycOrd(("a",))), gbar)
    lam = localize_morphism(phi)
    print("gbar arc", arc, "-> op fibers", lam.op.fibers)

print()
print("all morphisms <2> -> fam:")
for g in all_lambda_star_mors(CyclicRank(2), fam):
    print("  ", g.op.fibers)
