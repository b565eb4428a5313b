"""Distances from stationarity and their evolution over time."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ValidationError, as_pmf, stationary
from .chains import uniform_chain
from .orders import majorizes

__all__ = ["METRICS", "distance", "DistanceTrace", "trace", "laws_over_time", "majorization_trace",
           "start_state_multiset_invariance"]

METRICS = ("tv", "sep", "l2", "lp", "linf", "hellinger", "kl_forward", "kl_reverse")


def distance(rho, pi, metric: str = "tv", p: float = 1.0) -> float:
    """Discrepancy of ``rho`` from the positive pmf ``pi``.

    ``metric`` is one of ``tv`` (half the L1 sum), ``lp`` (``L^p(pi)`` distance
    of the density ``rho/pi`` from 1, order ``p``), ``l2``, ``linf``, ``sep``,
    ``hellinger``, ``kl_forward`` (``D(pi || rho)``) and ``kl_reverse``
    (``D(rho || pi)``).  ``kl_forward`` is ``inf`` as soon as ``rho`` has a zero.
    """
    r = np.asarray(rho, dtype=float)
    w = as_pmf(pi, positive=True).weights
    if r.shape != w.shape:
        raise ValidationError("rho and pi must have equal length")
    ratio = r / w
    if metric == "tv":
        return 0.5 * float(np.sum(np.abs(r - w)))
    if metric == "sep":
        return max(float(np.max(1.0 - ratio)), 0.0)
    if metric == "linf":
        return float(np.max(np.abs(ratio - 1.0)))
    if metric == "l2":
        return float(np.sqrt(np.sum(w * (ratio - 1.0) ** 2)))
    if metric == "lp":
        if not 1 <= p < np.inf:
            raise ValidationError("lp order must lie in [1, inf)")
        return float(np.sum(w * np.abs(ratio - 1.0) ** p) ** (1.0 / p))
    if metric == "hellinger":
        return 0.5 * float(np.sum(w * (np.sqrt(ratio) - 1.0) ** 2))
    if metric == "kl_forward":
        if np.any(r <= 0):
            return float("inf")
        return max(float(-np.sum(w * np.log(ratio))), 0.0)
    if metric == "kl_reverse":
        pos = r > 0
        return max(float(np.sum(r[pos] * np.log(ratio[pos]))), 0.0)
    raise ValidationError(f"unknown metric {metric!r}; expected one of {METRICS}")


@dataclass(frozen=True, eq=False)
class DistanceTrace:
    """All distances from stationarity, one entry per time ``t = 0..horizon``."""

    tv: np.ndarray
    sep: np.ndarray
    l2: np.ndarray
    lp: np.ndarray
    linf: np.ndarray
    hellinger: np.ndarray
    kl_pi_rho: np.ndarray
    kl_rho_pi: np.ndarray
    lp_order: float = 1.0

    def __len__(self):
        return self.tv.size

    @property
    def horizon(self) -> int:
        return self.tv.size - 1

    def column(self, name: str) -> np.ndarray:
        alias = {"kl_forward": "kl_pi_rho", "kl_fwd": "kl_pi_rho",
                 "kl_reverse": "kl_rho_pi", "kl_rev": "kl_rho_pi"}
        return getattr(self, alias.get(name, name))


def trace(kernel, init, horizon: int, pi=None, lp_order: float = 1.0) -> DistanceTrace:
    """Evolve ``init`` under ``kernel`` and record every distance at each step.

    ``pi`` defaults to the kernel's cached stationary pmf.  Row 0 is ``init``.
    """
    if horizon < 0:
        raise ValidationError("horizon must be nonnegative")
    if pi is None:
        pi = getattr(kernel, "stationary", None)
        if pi is None:
            pi = stationary(kernel)
    w = as_pmf(pi, positive=True).weights
    laws = laws_over_time(kernel, init, horizon)
    ratio = laws / w
    dev = ratio - 1.0
    with np.errstate(divide="ignore"):
        logr = np.log(ratio)
    kl_fwd = np.where(np.any(laws <= 0, axis=1), np.inf,
                      -np.sum(w * np.where(laws > 0, logr, 0.0), axis=1))
    kl_rev = np.sum(np.where(laws > 0, laws * np.where(laws > 0, logr, 0.0), 0.0), axis=1)
    # separation and the KL divergences are nonnegative; drop round-off below zero
    kl_fwd = np.maximum(kl_fwd, 0.0)
    kl_rev = np.maximum(kl_rev, 0.0)
    return DistanceTrace(
        tv=0.5 * np.sum(np.abs(laws - w), axis=1),
        sep=np.maximum(np.max(-dev, axis=1), 0.0),
        l2=np.sqrt(np.sum(w * dev**2, axis=1)),
        lp=np.sum(w * np.abs(dev) ** lp_order, axis=1) ** (1.0 / lp_order),
        linf=np.max(np.abs(dev), axis=1),
        hellinger=0.5 * np.sum(w * (np.sqrt(ratio) - 1.0) ** 2, axis=1),
        kl_pi_rho=kl_fwd,
        kl_rho_pi=kl_rev,
        lp_order=lp_order,
    )


def laws_over_time(kernel, init, horizon: int) -> np.ndarray:
    """Matrix whose row ``t`` is the law at time ``t``, for ``t = 0..horizon``."""
    m = np.asarray(kernel, dtype=float)
    out = np.empty((horizon + 1, m.shape[0]))
    out[0] = np.asarray(init, dtype=float)
    for t in range(1, horizon + 1):
        out[t] = out[t - 1] @ m
    return out


def majorization_trace(k, l, init, horizon: int, tol: float = 1e-10) -> np.ndarray:
    """``out[t]`` says whether the time-``t`` law under ``k`` majorizes the one under ``l``."""
    km, lm = np.asarray(k, dtype=float), np.asarray(l, dtype=float)
    if km.shape != lm.shape:
        raise ValidationError("kernels must share a dimension")
    a = b = np.asarray(init, dtype=float)
    out = np.empty(horizon + 1, dtype=bool)
    for t in range(horizon + 1):
        if t:
            a, b = a @ km, b @ lm
        out[t] = majorizes(a, b, tol)
    return out


def start_state_multiset_invariance(n: int, t: int, tol: float = 1e-12) -> bool:
    """Whether every row of ``U^t`` (uniform chain) has the same sorted entries."""
    if n < 1 or t < 0:
        raise ValidationError("need n >= 1 and t >= 0")
    rows = np.linalg.matrix_power(np.asarray(uniform_chain(n)), t)
    srt = np.sort(rows, axis=1)
    return bool(np.all(np.abs(srt - srt[0]) <= tol))
