import sys

sys.path.insert(0, "src")

from segalspans.cycy import CyclicRank, FamilyObj, all_lambda_star_mors
from segalspans.localize import (
    localize_morphism,
    weak_fiber_initial,
    universal_factorization,
)
import segalspans.localize as L

zc2 = weak_fiber_initial(CyclicRank(2))
fam = FamilyObj((("a", 1),))
ok = bad = 0
first = None
for g3 in all_lambda_star_mors(CyclicRank(2), fam):
    try:
        x3, phi3 = universal_factorization(zc2, g3)
        ok += 1
    except AssertionError:
        bad += 1
        if first is None:
            first = g3
print("ok", ok, "bad", bad)
g = first
print("g.cycle:", g.cycle)
print("g.op fibers:", g.op.fibers)

# recompute by hand without the final assert
x, phi = L._factor_round_family(zc2, g)
print("X base fibers:", x.base.fibers)
print("X window cycle:", phi.g.cycle)
print("phi gbar fibers:", phi.gbar.fibers)
back = localize_morphism(phi)
print("collapse cycle:", back.cycle)
print("collapse op fibers:", back.op.fibers)
