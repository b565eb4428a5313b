"""Seeded random instances of the chain families used in property checks.

Every sampler takes a ``numpy.random.Generator`` so suites stay reproducible.
"""

from __future__ import annotations

import numpy as np

from .chains import BdParams, WParams, from_w, symmetric_bd
from .core import Kernel, Pmf

__all__ = [
    "feasible_symmetric_p", "monotone_symmetric_p", "random_pmf", "logconcave_pmf",
    "equals1_chain", "monotone_bd_chain", "monotone_flows", "comparable_pair",
    "nondecreasing_pmf", "random_symmetric",
]


def feasible_symmetric_p(rng: np.random.Generator, n: int, floor: float = 1e-3) -> np.ndarray:
    """Birth probabilities with ``p_{k-1} + p_k <= 1``, bounded away from 0."""
    p = np.empty(n)
    prev = 0.0
    for k in range(n):
        hi = 1.0 - prev
        p[k] = rng.uniform(floor, hi) if hi > floor else hi
        prev = p[k]
    # sequential draws drift low after a large entry; a random flip evens that out
    return p[::-1].copy() if rng.random() < 0.5 else p


def monotone_symmetric_p(rng: np.random.Generator, n: int, floor: float = 1e-3) -> np.ndarray:
    return rng.uniform(floor, 0.5, size=n)


def random_pmf(rng: np.random.Generator, size: int, floor: float = 0.02) -> Pmf:
    w = rng.dirichlet(np.ones(size)) + floor
    return Pmf(w / w.sum(), positive=True)


def nondecreasing_pmf(rng: np.random.Generator, size: int) -> Pmf:
    w = np.sort(rng.uniform(0.1, 1.0, size))
    return Pmf(w / w.sum(), positive=True)


def logconcave_pmf(rng: np.random.Generator, size: int, spread: float = 1.5) -> Pmf:
    """Log-ratios drawn at random then sorted decreasing, so ``pi_{i+1}/pi_i`` is non-increasing."""
    steps = np.sort(rng.uniform(-spread, spread, size - 1))[::-1]
    logw = np.concatenate([[0.0], np.cumsum(steps)])
    w = np.exp(logw - logw.max())
    return Pmf(w / w.sum(), positive=True)


def equals1_chain(rng: np.random.Generator, n: int) -> BdParams:
    """Ergodic monotone path chain with ``q_{i+1} + p_i = 1``.

    Row sums force ``p`` to be non-increasing; holding is ``p_i - p_{i-1}``
    below ``n`` plus the end masses.
    """
    p = np.sort(rng.uniform(0.05, 0.95, n))[::-1]
    q = np.zeros(n + 1)
    q[1:] = 1.0 - p
    pp = np.concatenate([p, [0.0]])
    r = np.clip(1.0 - q - pp, 0.0, None)
    return BdParams(q, r, pp)


def monotone_bd_chain(rng: np.random.Generator, n: int) -> BdParams:
    """Ergodic path chain with ``p_i + q_{i+1} <= 1``; entries of ``p`` and ``q`` in ``(0.02, 0.5)``."""
    p = np.concatenate([rng.uniform(0.02, 0.5, n), [0.0]])
    q = np.concatenate([[0.0], rng.uniform(0.02, 0.5, n)])
    return BdParams(q, 1.0 - p - q, p)


def monotone_flows(rng: np.random.Generator, pi: Pmf, low: float = 0.1) -> np.ndarray:
    """Edge flows of a monotone reversible path chain with stationary ``pi``.

    Monotonicity caps ``w_i`` at ``pi_i pi_{i+1} / (pi_i + pi_{i+1})``; rows
    need ``w_{i-1} + w_i <= pi_i``.
    """
    x = pi.weights
    cap = x[:-1] * x[1:] / (x[:-1] + x[1:])
    w = np.empty(x.size - 1)
    prev = 0.0
    for i in range(w.size):
        w[i] = rng.uniform(low, 1.0) * min(cap[i], x[i] - prev)
        prev = w[i]
    return w


def comparable_pair(rng: np.random.Generator, pi: Pmf) -> tuple[Kernel, Kernel]:
    """Monotone reversible path kernels ``K <= L`` sharing ``pi``.

    On a path with shared ``pi`` the comparison reduces to ``w^K >= w^L``
    edgewise, so ``L`` shrinks every flow of ``K``.
    """
    wk = monotone_flows(rng, pi)
    wl = wk * rng.uniform(0.05, 1.0, wk.size)
    return from_w(WParams(wk, pi)), from_w(WParams(wl, pi))


def random_symmetric(rng: np.random.Generator, n: int) -> Kernel:
    return symmetric_bd(feasible_symmetric_p(rng, n))
