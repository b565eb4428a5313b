"""Mean optimal stopping time from 0 (the Lovasz-Winkler mixing time).

For monotone path chains this quantity has a closed form, equals the sum
of separation over time, and is matched by the naive stopping rule
simulated by Monte Carlo.  For odd n the best symmetric chain alternates
between 1 - theta_n and theta_n; for even n the uniform chain is best.
"""

import math

import numpy as np

from fastmix import fmmc_lw, lw_optimal_path, sep_sum, ssd_dual, tmix_closed, tmix_oracle, uniform_chain
from fastmix.chains import bd_params, lw_objective, theta_closed

for n in (2, 3, 4, 5):
    pi = np.full(n + 1, 1 / (n + 1))
    print(f"n={n}: uniform T_mix {tmix_closed(bd_params(uniform_chain(n)), pi).value:.6f}", end="")
    if n % 2:
        k = lw_optimal_path(n)
        print(f", alternating theta={theta_closed(n):.6f} gives {tmix_closed(bd_params(k), pi).value:.6f}")
    else:
        print()

print("\n5/2 + sqrt(6) =", 2.5 + math.sqrt(6))

# three ways to get the same number for the uniform chain on {0,1,2}
u = uniform_chain(2)
pi = np.full(3, 1 / 3)
print("closed form :", tmix_closed(bd_params(u), pi).value)
print("first step  :", tmix_oracle(u, pi).value)
mc = tmix_oracle(u, pi, "monte_carlo", samples=200_000, seed=1)
print(f"monte carlo : {mc.value:.4f} +- {mc.se:.4f}")
print("sep sum     :", sep_sum(bd_params(u), pi))
print("dual chain  : q* =", ssd_dual(bd_params(u), pi).q_star, " p* =", ssd_dual(bd_params(u), pi).p_star)

# the objective along the alternating family, n = 3
grid = np.linspace(0.05, 0.95, 10)
print("\nalternating family, n=3:")
for th in grid:
    print(f"  theta={th:.2f}  T_mix={lw_objective([1 - th, th, 1 - th]):.4f}")

# non-uniform targets: optimize over the edge flows
kernel, w_star, value = fmmc_lw(np.array([1, 2, 4, 4, 4]) / 15)
print(f"\nfmmc_lw for pi=(1,2,4,4,4)/15: w*={w_star:.6f}, T_mix={value:.6f}")
