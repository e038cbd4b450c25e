import sys, time

sys.path.insert(0, "src")

from segalspans.orders import CycOrd, standard_cycle
from segalspans.dualities import PointedSet
from segalspans.cycy import (
    AssMor,
    CycRankMor,
    CycToFamilyMor,
    CyclicRank,
    DiamondMor,
    FamilyObj,
    ID_DIAMOND,
    all_lambda_star_mors,
    lambda_star_identity,
)
from segalspans.localize import (
    LocalizeBudget,
    OmegaObjLambda,
    OmegaMorLambda,
    localize_object,
    localize_morphism,
    is_in_E,
    weak_fiber_initial,
    universal_factorization,
    all_omega_lambda_mors,
    verify_localization,
)

# --- pointed-to-pointed collapse (case 1), tiny instance
s1 = PointedSet(("p",))
t1 = PointedSet(("u", "v"))
f1 = AssMor(t1, s1, (("p", ("u", "v")),))
z1 = OmegaObjLambda(f1, frozenset(("p",)))
assert localize_object(z1) == FamilyObj((("p", 2),))

s2 = PointedSet(("q",))
t2 = PointedSet(("x", "y"))
f2 = AssMor(t2, s2, (("q", ("x", "y")),))
z2 = OmegaObjLambda(f2, frozenset(("q",)))

g = AssMor(s2, s1, (("p", ("q",)),))
gbar = AssMor(t1, t2, (("x", ("u",)), ("y", ("v",))))
mu = OmegaMorLambda(z1, z2, g, gbar)
lam = localize_morphism(mu)
print("case1 collapse:", lam)
assert lam.phi_of("q") == "p"
assert lam.fiber_order("p") == ("q",)
assert lam.comp("p") == (0, 1, 2)
assert is_in_E(mu).verdict
from segalspans.localize import is_identity_like
assert is_identity_like(lam)

# a non-E variant: gbar collapsing both points into x's fiber
gbar2 = AssMor(t1, t2, (("x", ("u", "v")), ("y", ())))
mu2 = OmegaMorLambda(z1, z2, g, gbar2)
lam2 = localize_morphism(mu2)
print("case1 non-iso collapse comp:", lam2.comp("p"))
assert lam2.comp("p") == (0, 2, 2)
v2 = is_in_E(mu2)
assert not v2.verdict and v2.reason == "fiber-order-iso"

# --- round-to-round collapse (case 2): collapse a 2-cycle onto a 1-cycle
ta = PointedSet(("a0", "a1"))
za = OmegaObjLambda(DiamondMor(ta, CycOrd(("a0", "a1"))), None)
tb = PointedSet(("b0",))
zb = OmegaObjLambda(DiamondMor(tb, CycOrd(("b0",))), None)
mub = OmegaMorLambda(za, zb, ID_DIAMOND, AssMor(ta, tb, (("b0", ("a0", "a1")),)))
lamb = localize_morphism(mub)
print("case2 collapse:", lamb.op.fibers)
assert lamb.src == CyclicRank(1) and lamb.dst == CyclicRank(0)
assert not is_in_E(mub).verdict

# iso variant
zc = OmegaObjLambda(DiamondMor(tb, CycOrd(("b0",))), None)
muc = OmegaMorLambda(zb, zc, ID_DIAMOND, AssMor(tb, tb, (("b0", ("b0",)),)))
assert is_in_E(muc).verdict
assert is_identity_like(localize_morphism(muc))

# --- round-to-pointed collapse (case 3)
# target row: S = {q}, fiber (x, y), marked {q}; window cycle (q)
sq = PointedSet(("q",))
tq = PointedSet(("x", "y"))
fq = AssMor(tq, sq, (("q", ("x", "y")),))
zq = OmegaObjLambda(fq, frozenset(("q",)))
# source: diamond row with cycle (c0, c1)
tc = PointedSet(("c0", "c1"))
zround = OmegaObjLambda(DiamondMor(tc, CycOrd(("c0", "c1"))), None)
gq = DiamondMor(sq, CycOrd(("q",)))
gbarq = AssMor(tc, tq, (("x", ("c0",)), ("y", ("c1",))))
muq = OmegaMorLambda(zround, zq, gq, gbarq)
lamq = localize_morphism(muq)
print("case3 collapse:", lamq.cycle, lamq.op.fibers)
assert isinstance(lamq, CycToFamilyMor)
assert lamq.src == CyclicRank(1)
assert lamq.dst == FamilyObj((("q", 2),))
assert not is_in_E(muq).verdict and is_in_E(muq).reason == "mixed-shape"

# --- round factorization: g: <1> -> <1> rotation
z_src = weak_fiber_initial(CyclicRank(1))
for g2 in all_lambda_star_mors(CyclicRank(1), CyclicRank(1)):
    x2, phi2 = universal_factorization(z_src, g2)
    assert localize_morphism(phi2) == g2
print("round-to-round factorizations ok")

# --- round-to-family factorization
zc2 = weak_fiber_initial(CyclicRank(2))
fam = FamilyObj((("a", 1),))
count = 0
for g3 in all_lambda_star_mors(CyclicRank(2), fam):
    x3, phi3 = universal_factorization(zc2, g3)
    assert localize_morphism(phi3) == g3
    count += 1
print("round-to-family factorizations ok:", count)

# --- family factorization with leftovers
# Z: S = {p}, fiber (u, v, w) marked; g keeps only the middle element
zlf = OmegaObjLambda(
    AssMor(PointedSet(("u", "v", "w")), PointedSet(("p",)), (("p", ("u", "v", "w")),)),
    frozenset(("p",)),
)
m1 = FamilyObj((("q", 1),))
from segalspans.cycy import FamilyMor

glf = FamilyMor(
    localize_object(zlf), m1, (("q", "p"),), (("p", ("q",)),), (("p", (1, 2)),)
)
xlf, philf = universal_factorization(zlf, glf)
print("leftover factorization base points:", xlf.base.dst.points)
assert localize_morphism(philf) == glf
assert localize_object(xlf) == m1

# --- tiny verify sweep
t0 = time.time()
rep = verify_localization(LocalizeBudget(max_rank=1, max_tuple=1, max_fiber=1, max_junk=0))
print("tiny verify:", rep.ok, "in", round(time.time() - t0, 1), "s")
for f in rep.findings[:8]:
    print("  finding:", f.check, f.location)
print("scope:", rep.scope)
