"""Which symmetric path chain mixes fastest?

Every symmetric birth-and-death chain on {0..n} has the uniform law as its
stationary pmf.  Started at 0, the uniform chain (p = 1/2 everywhere) is
ahead of every other one in the comparison order, so its law at time t is
majorized by theirs and it wins in total variation, separation and L2.
"""

import numpy as np

from fastmix import Pmf, Poset, compare, majorizes, symmetric_bd, trace, uniform_chain
from fastmix.spectral import slem

n = 6
pi = np.full(n + 1, 1 / (n + 1))
rng = np.random.default_rng(3)

u = uniform_chain(n)
other = symmetric_bd(rng.uniform(0.05, 0.5, n))   # monotone: every p_i <= 1/2

rep = compare(u, other, pi, Poset.chain(n + 1))
print("uniform <= other in the comparison order:", rep.holds, f"(worst {rep.worst_violation:.1e})")

a = trace(u, Pmf.point_mass(n + 1), 40)
b = trace(other, Pmf.point_mass(n + 1), 40)
print("\n t     tv(unif)  tv(other)  sep(unif)  sep(other)")
for t in (0, 1, 2, 5, 10, 20, 40):
    print(f"{t:2d}  {a.tv[t]:9.5f}  {b.tv[t]:9.5f}  {a.sep[t]:9.5f}  {b.sep[t]:9.5f}")

# the laws themselves are ordered by majorization
laws_u = [np.linalg.matrix_power(np.asarray(u), t)[0] for t in range(41)]
laws_o = [np.linalg.matrix_power(np.asarray(other), t)[0] for t in range(41)]
print("\nother's law majorizes uniform's at every t <= 40:",
      all(majorizes(lo, lu) for lo, lu in zip(laws_o, laws_u)))

# non-monotone chains (some p_i > 1/2) still lose in L2 and SLEM
wild = symmetric_bd([0.9, 0.1, 0.8, 0.1, 0.9, 0.1])
print(f"SLEM: uniform {slem(u, pi):.4f}, monotone {slem(other, pi):.4f}, wild {slem(wild, pi):.4f}")
