"""Fastest chain for a log-concave target.

For a log-concave pmf on a path there is a birth-and-death chain that
jumps as far up as possible at each step while keeping pi stationary and
staying monotone.  Its separation from pi is pointwise below that of the
biased random walk and of a Metropolis-style chain with the same target.
"""

import numpy as np

from fastmix import Kernel, Pmf, Poset, biased_rw, compare, fmmc_logconcave, trace

# a discretized normal bump, which is log-concave
x = np.arange(9)
pi = Pmf.from_weights(np.exp(-0.5 * ((x - 5.0) / 1.7) ** 2))

fast = fmmc_logconcave(pi)
k = fast.kernel(pi)
print("up-probabilities   p:", np.round(fast.p, 4))
print("down-probabilities q:", np.round(fast.q, 4))
print("monotone caps hold (p_i + q_{i+1} <= 1):", bool(np.all(fast.p[:-1] + fast.q[1:] <= 1 + 1e-12)))

# lazy Metropolis chain for the same pi, proposing +-1 with prob 1/2 each
m = np.zeros((9, 9))
w = pi.weights
for i in range(9):
    for j in (i - 1, i + 1):
        if 0 <= j < 9:
            m[i, j] = 0.5 * min(1.0, w[j] / w[i])
    m[i, i] = 1 - m[i].sum()
metro = Kernel(m, stationary=pi)

print("fastest <= Metropolis in the comparison order:",
      compare(k, metro, pi, Poset.chain(9)).holds)

a = trace(k, Pmf.point_mass(9), 60, pi).sep
b = trace(metro, Pmf.point_mass(9), 60, pi).sep
for t in (0, 5, 10, 20, 40, 60):
    print(f"t={t:2d}  sep fastest {a[t]:.4f}   sep Metropolis {b[t]:.4f}")

# biased walks: the closer rho is to 1, the slower in separation
for rho in (0.3, 0.6, 0.9):
    s = trace(biased_rw(rho, 8), Pmf.point_mass(9), 60).sep
    print(f"biased walk rho={rho}: sep(20) = {s[20]:.4f}")
