import sys

sys.path.insert(0, "src")

from segalspans.orders import CycOrd, standard_cycle
from segalspans.dualities import D_on_map
from segalspans.cycy import CyclicRank, FamilyObj, all_lambda_star_mors, family_union_cycle

fam = FamilyObj((("a", 1),))
# union for cycle (a): vertices (a,0), (a,1)
for g in all_lambda_star_mors(CyclicRank(2), fam):
    d = g.op  # union -> std(2); source cycle here is already standard
    dd = D_on_map(d)
    print("g fibers:", g.op.fibers)
    print("   D(d) fibers:", dd.fibers)
    print()
