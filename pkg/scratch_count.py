import sys, time

sys.path.insert(0, "src")

from segalspans.localize import (
    LocalizeBudget,
    all_omega_delta_objects,
    all_omega_lambda_objects,
    all_omega_mors,
)

bud = LocalizeBudget()
t0 = time.time()
dobjs = list(all_omega_delta_objects(bud))
lobjs = list(all_omega_lambda_objects(bud))
print(f"objects: {len(dobjs)} delta, {len(lobjs)} lambda")

t0 = time.time()
nd = 0
din = {}
dout = {}
for z1 in dobjs:
    for z2 in dobjs:
        c = sum(1 for _ in all_omega_mors(z1, z2))
        nd += c
        dout[z1] = dout.get(z1, 0) + c
        din[z2] = din.get(z2, 0) + c
dt = time.time() - t0
pairs = sum(din.get(z, 0) * dout.get(z, 0) for z in dobjs)
print(f"delta homs: {nd} in {dt:.1f}s; composable pairs: {pairs}")

t0 = time.time()
nl = 0
lin = {}
lout = {}
for z1 in lobjs:
    for z2 in lobjs:
        c = sum(1 for _ in all_omega_mors(z1, z2))
        nl += c
        lout[z1] = lout.get(z1, 0) + c
        lin[z2] = lin.get(z2, 0) + c
dt = time.time() - t0
pairs_l = sum(lin.get(z, 0) * lout.get(z, 0) for z in lobjs)
print(f"lambda homs: {nl} in {dt:.1f}s; composable pairs: {pairs_l}")
