"""Extra updates never delay mixing.

A single-site heat-bath update K_v of a monotone spin system sits below the
identity in the comparison order.  Since the order is preserved under
products, dropping updates from a schedule can only slow it down, and a
systematic sweep is below a random-site scan.  The same holds for the
sort/anti-sort card shuffle in the Bruhat order.
"""

import numpy as np

from fastmix import (SpinSpace, bruhat_poset, compare, enumerate_down_sets, identity_kernel, ising_pmf,
                     scan_kernels, shuffle_site_kernel, spin_site_kernel)
from fastmix.structures import is_monotone_system

space = SpinSpace.grid(2, 2)
ideals = enumerate_down_sets(space.poset)
print(f"2x2 Ising: {len(space)} states, {ideals.shape[0]} down-sets")

for beta in (0.2, 0.5, 1.0):
    pi = ising_pmf(space, beta)
    worst = max(compare(spin_site_kernel(space, pi, v), identity_kernel(16), pi, space.poset,
                        down_sets=ideals).worst_violation for v in range(4))
    syst, rand = scan_kernels(space, pi)
    sr = compare(syst, rand, pi, space.poset, down_sets=ideals)
    print(f"beta={beta}: monotone system {is_monotone_system(space, pi)}, "
          f"K_v <= I worst {worst:.1e}, sweep <= random scan {sr.holds}")

# schedule 0,1,2,3,0 against the same schedule with one update removed
pi = ising_pmf(space, 0.5)
site = [np.asarray(spin_site_kernel(space, pi, v)) for v in range(4)]
sched = [0, 1, 2, 3, 0]
full = np.linalg.multi_dot([site[v] for v in sched])
for drop in range(len(sched)):
    part = np.linalg.multi_dot([site[v] for j, v in enumerate(sched) if j != drop])
    print(f"drop update {drop}: full <= censored {compare(full, part, pi, space.poset, down_sets=ideals).holds}")

# card shuffles on S4
poset = bruhat_poset(4)
ideals4 = enumerate_down_sets(poset)
print(f"\nS4 under the Bruhat order: {ideals4.shape[0]} down-sets")
for p in (0.3, 0.7):
    ok = all(compare(k, identity_kernel(24), k.stationary, poset, down_sets=ideals4).holds
             for k in (shuffle_site_kernel(4, i, p) for i in (1, 2, 3)))
    print(f"p={p}: every K_i <= I: {ok}")
