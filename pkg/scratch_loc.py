import sys

sys.path.insert(0, "src")

from segalspans.orders import CycOrd, LinMap, standard_cycle, standard_order
from segalspans.dualities import IntervalContext, PointedSet
from segalspans.cycy import AssMor, CyclicRank, DiamondMor, FamilyObj, ID_DIAMOND
from segalspans.spanalg import DeltaStarObj, DeltaStarMor, identity_star
from segalspans.localize import (
    LocalizeBudget,
    OmegaObjDelta,
    OmegaMorDelta,
    OmegaObjLambda,
    OmegaMorLambda,
    localize_object,
    localize_morphism,
    identity_omega,
    is_in_E,
    weak_fiber_initial,
    universal_factorization,
    all_omega_delta_objects,
    all_omega_lambda_objects,
)

# --- object collapse examples ---
amb = standard_order(2)
z1 = OmegaObjDelta(IntervalContext(amb, 0, 2), LinMap(amb, standard_order(3), (0, 2, 3)))
print("delta obj:", localize_object(z1))
assert localize_object(z1) == DeltaStarObj((2, 1))

# diamond row with a full 3-element cyclic fiber, one marked point -> rank 2
t = PointedSet((0, 1, 2))
zr = OmegaObjLambda(DiamondMor(t, CycOrd((0, 1, 2))), None)
print("round obj:", localize_object(zr))
assert localize_object(zr) == CyclicRank(2)

amb1 = standard_order(1)
z2 = OmegaObjDelta(IntervalContext(amb1, 0, 1), LinMap(amb1, standard_order(1), (0, 1)))
assert localize_object(z2) == DeltaStarObj((1,))

# identity collapse
from segalspans.cycy import lambda_star_identity

ident = identity_omega(z1)
print("identity collapse:", localize_morphism(ident))
assert localize_morphism(ident) == identity_star(DeltaStarObj((2, 1)))
assert is_in_E(ident)

identr = identity_omega(zr)
assert localize_morphism(identr) == lambda_star_identity(CyclicRank(2))

# --- minimal delta morphism: single segments, phi = (0,), comp = restriction of gbar
za = OmegaObjDelta(IntervalContext(amb1, 0, 1), LinMap(amb1, standard_order(2), (0, 2)))
zb = OmegaObjDelta(IntervalContext(amb1, 0, 1), LinMap(amb1, standard_order(1), (0, 1)))
mu = OmegaMorDelta(
    za, zb,
    LinMap(amb1, amb1, (0, 1)),
    LinMap(standard_order(1), standard_order(2), (0, 2)),
)
lm = localize_morphism(mu)
print("minimal delta morphism:", lm)
assert lm.phi == (0,)
assert lm.comp(0) == (0, 2)

# --- weak fiber initial examples ---
zm = weak_fiber_initial(DeltaStarObj((2, 1)))
print("initial for (2,1):", zm.base.positions)
assert zm.base.positions == (0, 2, 3)
assert zm.lo_pos == 0 and zm.hi_pos == 2

zm1 = weak_fiber_initial(DeltaStarObj((1,)))
assert zm1.base.positions == (0, 1)

zc = weak_fiber_initial(CyclicRank(2))
assert len(zc.base.cycle) == 3

zf = weak_fiber_initial(FamilyObj((("a", 2), ("b", 1))))
print("family initial fibers:", zf.base.fibers)
assert localize_object(zf) == FamilyObj((("a", 2), ("b", 1)))

# --- degenerate universal factorization: identity g reproduces the initial row
m = DeltaStarObj((2, 1))
x, phi = universal_factorization(zm, identity_star(m))
assert x == zm, (x, zm)
print("degenerate factorization ok")

# --- minimal-interval example: gamma 0->1, 1->2 inside [3]
zz = OmegaObjDelta(
    IntervalContext(amb1, 0, 1), LinMap(amb1, standard_order(3), (0, 3))
)
g = DeltaStarMor(DeltaStarObj((3,)), DeltaStarObj((1,)), (0,), ((0, (1, 2)),))
x2, phi2 = universal_factorization(zz, g)
print("minimal-interval X:", x2.base.positions, x2.lo_pos, x2.hi_pos)
assert x2.base.positions == (0, 1, 2, 3)
assert (x2.lo_pos, x2.hi_pos) == (1, 2)
assert phi2.g.positions == (0, 3)
assert phi2.gbar.positions == (0, 1, 2, 3)

# --- round-row universe sizes
buds = LocalizeBudget()
nd = sum(1 for _ in all_omega_delta_objects(buds))
nl = sum(1 for _ in all_omega_lambda_objects(buds))
print("universe sizes:", nd, nl)

print("ALL SMOKE CHECKS PASSED")
