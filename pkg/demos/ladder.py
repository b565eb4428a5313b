"""Rung weights on a ladder with a total budget.

With uniform pi and a fixed total rate, putting edge weight proportional to
sqrt((i+1)(n-i)) on rung i minimizes T_mix.  Flat rungs and parabolic rungs
come out exactly equal, n^2(n+2)/6, and the optimum grows like pi^2 n^3/64.
"""

import math

import numpy as np

from fastmix import budgeted_min_tmix, symmetric_bd, tmix_closed
from fastmix.chains import bd_params

print("   n      sqrt        flat   parabolic   n^2(n+2)/6")
for n in (2, 3, 5, 10, 20, 50):
    pi = np.full(n + 1, 1 / (n + 1))
    k = np.arange(n)
    para = (k + 1) * (n - k)
    chains = [budgeted_min_tmix(pi, 1 / (n + 1)), symmetric_bd(np.full(n, 1 / n)),
              symmetric_bd(para / para.sum())]
    vals = [tmix_closed(bd_params(c), pi).value for c in chains]
    print(f"{n:4d}  {vals[0]:9.3f}  {vals[1]:9.3f}  {vals[2]:9.3f}  {n * n * (n + 2) / 6:11.3f}")

print("\nT_mix / n^3 for the sqrt weights, against pi^2/64 =", round(math.pi**2 / 64, 6))
for n in (50, 100, 200, 400, 800):
    pi = np.full(n + 1, 1 / (n + 1))
    v = tmix_closed(bd_params(budgeted_min_tmix(pi, 1 / (n + 1))), pi).value
    print(f"  n={n:4d}: {v / n**3:.6f}")
