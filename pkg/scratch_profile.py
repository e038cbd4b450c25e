import sys, time

sys.path.insert(0, "src")

from segalspans.localize import (
    LocalizeBudget,
    all_omega_delta_objects,
    all_omega_lambda_objects,
    all_omega_mors,
    localize_object,
    localize_morphism,
    is_in_E,
)

bud = LocalizeBudget(max_rank=2, max_tuple=1, max_fiber=2, max_junk=0)
t0 = time.time()
dobjs = list(all_omega_delta_objects(bud))
lobjs = list(all_omega_lambda_objects(bud))
print(f"objects: {len(dobjs)} delta, {len(lobjs)} lambda in {time.time()-t0:.1f}s")

t0 = time.time()
nd = 0
for z1 in dobjs:
    for z2 in dobjs:
        for mu in all_omega_mors(z1, z2):
            nd += 1
print(f"delta homs: {nd} in {time.time()-t0:.1f}s")

t0 = time.time()
nl = 0
for z1 in lobjs:
    for z2 in lobjs:
        for mu in all_omega_mors(z1, z2):
            nl += 1
print(f"lambda homs: {nl} in {time.time()-t0:.1f}s")

t0 = time.time()
n = 0
for z1 in lobjs:
    for z2 in lobjs:
        for mu in all_omega_mors(z1, z2):
            localize_morphism(mu)
            n += 1
print(f"lambda collapses: {n} in {time.time()-t0:.1f}s")

t0 = time.time()
n = 0
for z1 in dobjs:
    for z2 in dobjs:
        for mu in all_omega_mors(z1, z2):
            localize_morphism(mu)
            n += 1
print(f"delta collapses: {n} in {time.time()-t0:.1f}s")
