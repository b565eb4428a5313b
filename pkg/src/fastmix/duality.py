"""Strong stationary duals, hitting times and the Lovasz-Winkler mixing time.

All chains here are birth-and-death chains on ``{0, ..., n}`` started at 0.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .chains import BdParams, WParams, bd_params
from .core import (Kernel, NumericalError, ReducibleError, ValidationError, as_pmf,
                   is_irreducible, is_stationary)
from .spectral import slem

__all__ = [
    "DEFAULT_SEED", "DualChain", "TmixReport", "ssd_dual", "dual_survival",
    "hitting_time_mean", "hitting_times_first_step", "tmix_closed", "tmix_from_w",
    "tmix_oracle", "sep_sum", "dual_birth_profile",
]

# fixed default so Monte Carlo figures reproduce bit-for-bit
DEFAULT_SEED = 20120325
EQUALS1_TOL = 1e-12


def _as_bd(bd) -> BdParams:
    return bd if isinstance(bd, BdParams) else bd_params(bd)


def _check_pi(bd: BdParams, pi):
    pmf = as_pmf(pi, positive=True)
    if pmf.size != bd.n + 1:
        raise ValidationError("pi has the wrong number of states")
    if not is_stationary(bd.kernel(), pmf.weights):
        raise ValidationError("pi is not stationary for the chain")
    return pmf.weights


@dataclass(frozen=True, eq=False)
class DualChain:
    """Absorbing path chain with no holding below ``n``; state ``n`` absorbs."""

    q_star: np.ndarray
    p_star: np.ndarray

    def __post_init__(self):
        q, p = np.array(self.q_star, dtype=float), np.array(self.p_star, dtype=float)
        if q.shape != p.shape or q.ndim != 1:
            raise ValidationError("q_star and p_star must have equal length")
        if q[0] != 0:
            raise ValidationError("q*_0 must vanish")
        if np.any(q[:-1] + p[:-1] > 1 + 1e-12):
            i = int(np.argmax(q[:-1] + p[:-1]))
            raise ValidationError(f"q*_{i} + p*_{i} exceeds 1")
        q.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "q_star", q)
        object.__setattr__(self, "p_star", p)

    @property
    def n(self) -> int:
        return self.q_star.size - 1

    def kernel(self) -> Kernel:
        n = self.n
        q, p = self.q_star.copy(), self.p_star.copy()
        q[n] = p[n] = 0.0
        r = np.clip(1.0 - q - p, 0.0, None)
        r[n] = 1.0
        m = np.diag(r)
        if n:
            m += np.diag(p[:-1], 1) + np.diag(q[1:], -1)
        # q* + p* = 1 only to round-off; push the slack onto the diagonal
        m[np.arange(n + 1), np.arange(n + 1)] += 1.0 - m.sum(axis=1)
        return Kernel(m)


@dataclass(frozen=True)
class TmixReport:
    value: float
    method: str
    se: Optional[float] = None
    samples: Optional[int] = None
    halting_violations: Optional[int] = None


def ssd_dual(bd, pi) -> DualChain:
    """Strong stationary dual of an ergodic monotone chain with ``q_{i+1} + p_i = 1``.

    ``q*_i = (H_{i-1}/H_i) p_i`` and ``p*_i = (H_{i+1}/H_i) q_{i+1}`` where
    ``H`` is the cdf of ``pi``.
    """
    bd = _as_bd(bd)
    w = _check_pi(bd, pi)
    n = bd.n
    if not bd.ergodic:
        raise ValidationError("chain must be ergodic")
    gap = np.abs(bd.q[1:] + bd.p[:-1] - 1.0)
    if np.any(gap > EQUALS1_TOL):
        i = int(np.argmax(gap))
        raise ValidationError(f"q_{i + 1} + p_{i} = {float(bd.q[i + 1] + bd.p[i])!r}, expected 1")
    h = np.cumsum(w)
    h[-1] = 1.0
    h_prev = np.concatenate([[0.0], h[:-1]])
    qs = np.zeros(n + 1)
    ps = np.zeros(n + 1)
    qs[:n] = h_prev[:n] / h[:n] * bd.p[:n]
    ps[:n] = h[1:] / h[:n] * bd.q[1:]
    return DualChain(qs, ps)


def dual_survival(dual: DualChain, horizon: int) -> np.ndarray:
    """``P(T > t)`` for ``t = 0..horizon``, ``T`` the absorption time of the dual from 0."""
    m = np.asarray(dual.kernel())
    mu = np.zeros(dual.n + 1)
    mu[0] = 1.0
    out = np.empty(horizon + 1)
    for t in range(horizon + 1):
        if t:
            mu = mu @ m
        out[t] = 1.0 - mu[-1]
    return np.clip(out, 0.0, 1.0)


def hitting_time_mean(bd, pi, target: int, rate: bool = False) -> float:
    """Mean hitting time of ``target`` from 0: ``sum_{i<target} H_i / (pi_i p_i)``.

    With ``rate=True`` the ``p`` entries are read as continuous-time birth
    rates; the formula is the same.
    """
    if rate:
        lam = np.asarray(bd, dtype=float)
        w = as_pmf(pi, positive=True).weights
        up = lam
    else:
        bd = _as_bd(bd)
        w = _check_pi(bd, pi)
        up = bd.p
    if not 0 <= target < w.size:
        raise ValidationError("target out of range")
    if np.any(up[:target] <= 0):
        raise ReducibleError(f"target {target} is unreachable from 0")
    h = np.cumsum(w)
    return float(np.sum(h[:target] / (w[:target] * up[:target])))


def hitting_times_first_step(kernel, target: int) -> np.ndarray:
    """Mean hitting times of ``target`` from every state, by solving the first-step equations."""
    m = np.asarray(kernel, dtype=float)
    n = m.shape[0]
    rest = np.array([i for i in range(n) if i != target], dtype=int)
    out = np.zeros(n)
    if rest.size == 0:
        return out
    a = np.eye(rest.size) - m[np.ix_(rest, rest)]
    try:
        out[rest] = np.linalg.solve(a, np.ones(rest.size))
    except np.linalg.LinAlgError as exc:
        raise ReducibleError(f"target {target} is not reachable from every state") from exc
    if not np.all(np.isfinite(out)) or np.any(out[rest] < 0):
        raise ReducibleError(f"target {target} is not reachable from every state")
    return out


def tmix_closed(bd, pi) -> TmixReport:
    """Closed-form mixing time ``sum_i H_i (1 - H_i) / (pi_i p_i)`` from state 0."""
    bd = _as_bd(bd)
    w = _check_pi(bd, pi)
    if not bd.irreducible:
        raise ReducibleError("chain is reducible")
    h = np.cumsum(w)[:-1]
    value = float(np.sum(h * (1 - h) / (w[:-1] * bd.p[:-1])))
    return TmixReport(value, "closed_form")


def tmix_from_w(params: WParams) -> float:
    """Mixing time in edge-flow form, ``sum_i H_i (1 - H_i) / w_i``."""
    h = np.cumsum(params.pi.weights)[:-1]
    with np.errstate(divide="ignore"):
        return float(np.sum(h * (1 - h) / params.w))


def _naive_rule_chunk(cum, pi, start, n_samples, seed_seq):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    size = pi.size
    targets = rng.choice(size, size=n_samples, p=pi)
    state = np.full(n_samples, start, dtype=np.int64)
    steps = np.zeros(n_samples, dtype=np.int64)
    active = state != targets
    violations = 0
    top = size - 1
    while active.any():
        idx = np.nonzero(active)[0]
        u = rng.random(idx.size)
        nxt = (u[:, None] >= cum[state[idx]]).sum(axis=1)
        state[idx] = nxt
        steps[idx] += 1
        hit = nxt == targets[idx]
        violations += int(np.sum((nxt == top) & ~hit))
        active[idx[hit]] = False
    return steps, violations


def tmix_oracle(kernel, pi, mode: str = "first_step", *, samples: int = 10**6,
                seed: int = DEFAULT_SEED, start: int = 0, chunk: int = 250_000,
                workers: int = 1) -> TmixReport:
    """Mean of the naive stopping rule: draw ``j ~ pi``, run until ``j`` is hit.

    ``mode="first_step"`` solves the hitting-time equations exactly;
    ``mode="monte_carlo"`` simulates ``samples`` runs.  Samples are split in
    chunks with seeds spawned from ``seed``, so the result does not depend on
    ``workers``.  ``halting_violations`` counts runs seen at the top state
    before stopping, which cannot happen for a path chain started at 0.
    """
    m = np.asarray(kernel, dtype=float)
    w = as_pmf(pi, positive=True).weights
    if not is_irreducible(m):
        raise ReducibleError("kernel is reducible")
    if not is_stationary(m, w):
        raise ValidationError("pi is not stationary for the kernel")
    if mode == "first_step":
        value = sum(w[j] * hitting_times_first_step(m, j)[start] for j in range(w.size))
        return TmixReport(float(value), "first_step")
    if mode != "monte_carlo":
        raise ValidationError(f"unknown mode {mode!r}")
    cum = np.cumsum(m, axis=1)
    cum[:, -1] = 1.0
    sizes = [min(chunk, samples - s) for s in range(0, samples, chunk)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, seeds))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda job: _naive_rule_chunk(cum, w, start, *job), jobs))
    else:
        parts = [_naive_rule_chunk(cum, w, start, *job) for job in jobs]
    steps = np.concatenate([s for s, _ in parts])
    violations = sum(v for _, v in parts)
    se = float(steps.std(ddof=1) / math.sqrt(steps.size))
    return TmixReport(float(steps.mean()), "monte_carlo", se=se, samples=int(steps.size),
                      halting_violations=violations)


def sep_sum(bd, pi, tail_tol: float = 1e-10, max_steps: int = 10**7) -> float:
    """``sum_{t >= 0} sep(t)`` for a monotone ergodic chain started at 0.

    Separation decays geometrically at rate ``slem``; summation stops at the
    first ``t`` with ``sep(t) < 1e-14`` or ``slem^t / (1 - slem) < tail_tol``.
    """
    bd = _as_bd(bd)
    w = _check_pi(bd, pi)
    if not np.all(bd.p[:-1] + bd.q[1:] <= 1 + 1e-12):
        raise ValidationError("chain is not monotone; n need not be a halting state")
    k = bd.kernel()
    lam = slem(k, w)
    m = np.asarray(k)
    mu = np.zeros(w.size)
    mu[0] = 1.0
    total = 0.0
    decay = 1.0
    for _ in range(max_steps):
        s = float(np.max(1.0 - mu / w))
        total += s
        if s < 1e-14 or decay / (1.0 - lam) < tail_tol:
            return total
        decay *= lam
        mu = mu @ m
    raise NumericalError(f"separation sum did not converge within {max_steps} steps")


def dual_birth_profile(i: int, rho: float) -> float:
    """Dual birth probability ``(1 - rho^{i+2}) / ((1 - rho^{i+1})(1 + rho))`` of the biased walk.

    Evaluated as a ratio of geometric sums, which is smooth through
    ``rho = 1`` where it equals ``(i + 2) / (2 (i + 1))``.
    """
    if rho <= 0:
        raise ValidationError("rho must be positive")
    if rho > 1:
        rho = 1.0 / rho
    powers = rho ** np.arange(i + 2)
    return float(powers.sum() / (powers[:-1].sum() * (1.0 + rho)))
