import sys, time

sys.path.insert(0, "src")

from segalspans.localize import LocalizeBudget, verify_localization

budgets = [
    LocalizeBudget(max_rank=2, max_tuple=1, max_fiber=2, max_junk=0),
    LocalizeBudget(max_rank=2, max_tuple=2, max_fiber=2, max_junk=1),
]
for bud in budgets:
    t0 = time.time()
    rep = verify_localization(bud)
    dt = time.time() - t0
    print(f"budget {bud}: ok={rep.ok} in {dt:.1f}s")
    for f in rep.findings[:6]:
        print("   finding:", f.check, f.location, f.witness)
    for s in rep.scope:
        print("   scope:", s)
    print(flush=True)
