"""Order-theoretic checks on kernels and pmfs over a finite poset.

Down-sets are returned as a boolean matrix with one row per down-set; every
check below reduces the quantifier over non-increasing functions to a
quantifier over indicators of those rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Kernel, Poset, ValidationError, as_pmf, is_stationary, trivial_kernel, identity_kernel

__all__ = [
    "ComparisonReport", "DownSetLimitError", "enumerate_down_sets", "is_down_set",
    "is_monotone", "compare", "has_positive_correlations", "majorizes",
    "majorization_slack", "dominates", "stochastically_ordered",
]

DEFAULT_CAP = 10**6
COMPARE_TOL = 1e-10
_CHUNK = 2048


class DownSetLimitError(ValidationError):
    pass


def _masks_to_matrix(masks, n):
    if n <= 62:
        bits = np.array(sorted(masks), dtype=np.int64)
        return ((bits[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1).astype(bool)
    bits = sorted(masks)
    out = np.zeros((len(bits), n), dtype=bool)
    for row, m in enumerate(bits):
        for x in range(n):
            if (m >> x) & 1:
                out[row, x] = True
    return out


def enumerate_down_sets(poset: Poset, cap: int = DEFAULT_CAP) -> np.ndarray:
    """All order ideals of ``poset`` as rows of a boolean matrix.

    Rows are sorted by their integer mask (bit ``x`` set iff ``x`` is a
    member), so the empty set comes first.  Raises if more than ``cap``
    ideals exist.
    """
    n = poset.size
    below = [0] * n
    for y in range(n):
        for x in range(n):
            if x != y and poset.leq[x, y]:
                below[y] |= 1 << x
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for ideal in frontier:
            for x in range(n):
                bit = 1 << x
                if ideal & bit or below[x] & ~ideal:
                    continue
                grown = ideal | bit
                if grown not in seen:
                    seen.add(grown)
                    if len(seen) > cap:
                        raise DownSetLimitError(f"poset has more than cap={cap} down-sets")
                    nxt.append(grown)
        frontier = nxt
    return _masks_to_matrix(seen, n)


def is_down_set(mask, poset: Poset) -> bool:
    m = np.asarray(mask, dtype=bool)
    # y in D and x <= y  =>  x in D
    return not np.any(poset.leq[:, m].any(axis=1) & ~m)


def _ideals(poset, down_sets, cap):
    if down_sets is not None:
        return np.asarray(down_sets, dtype=bool)
    return enumerate_down_sets(poset, cap)


def is_monotone(kernel: Kernel, poset: Poset, tol: float = COMPARE_TOL, *,
                down_sets=None, cap: int = DEFAULT_CAP) -> bool:
    """Whether ``K 1_D`` is non-increasing for every down-set ``D``."""
    ideals = _ideals(poset, down_sets, cap)
    v = np.asarray(kernel, dtype=float) @ ideals.T.astype(float)
    xs, ys = np.nonzero(poset.leq & ~np.eye(poset.size, dtype=bool))
    if xs.size == 0:
        return True
    return bool(np.all(v[xs] >= v[ys] - tol))


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome of checking ``K <= L`` in the comparison order.

    ``worst_violation`` is the maximum over down-set pairs ``(D, E)`` of
    ``<K 1_D, 1_E> - <L 1_D, 1_E>``; ``witness`` holds the maximizing pair
    as boolean masks.
    """

    holds: bool
    worst_violation: float
    witness: tuple[np.ndarray, np.ndarray]
    tol: float


def _inner_gap(diff, pi, ideals):
    """max over (D, E) of sum_{i in E} pi_i (diff 1_D)(i), with argmax."""
    ind = ideals.astype(float)
    b = diff @ ind.T  # columns: diff 1_D
    weighted = ind * pi[None, :]
    best, arg = -np.inf, (0, 0)
    for start in range(0, weighted.shape[0], _CHUNK):
        block = weighted[start:start + _CHUNK] @ b  # rows E, cols D
        k = int(np.argmax(block))
        e, d = divmod(k, block.shape[1])
        if block[e, d] > best:
            best, arg = float(block[e, d]), (d, start + e)
    return best, arg


def compare(k: Kernel, l: Kernel, pi, poset: Poset, tol: float = COMPARE_TOL, *,
            down_sets=None, cap: int = DEFAULT_CAP) -> ComparisonReport:
    """Check the comparison inequality ``K <= L`` relative to ``pi``.

    Holds iff ``<K 1_D, 1_E>_pi <= <L 1_D, 1_E>_pi + tol`` for every pair of
    down-sets.  Both kernels must have ``pi`` as a stationary pmf.
    """
    pi = as_pmf(pi, positive=True)
    km, lm = np.asarray(k, dtype=float), np.asarray(l, dtype=float)
    if km.shape != lm.shape or km.shape[0] != pi.size or poset.size != pi.size:
        raise ValidationError("kernels, pmf and poset must share one state space")
    if not is_stationary(km, pi.weights):
        raise ValidationError("pi is not stationary for the first kernel")
    if not is_stationary(lm, pi.weights):
        raise ValidationError("pi is not stationary for the second kernel")
    ideals = _ideals(poset, down_sets, cap)
    worst, (d, e) = _inner_gap(km - lm, pi.weights, ideals)
    return ComparisonReport(worst <= tol, worst, (ideals[d].copy(), ideals[e].copy()), tol)


def has_positive_correlations(pi, poset: Poset, tol: float = COMPARE_TOL, *,
                              down_sets=None, cap: int = DEFAULT_CAP) -> bool:
    """Whether ``pi(D & E) >= pi(D) pi(E)`` for all down-sets ``D, E``."""
    p = as_pmf(pi, positive=True).weights
    ind = _ideals(poset, down_sets, cap).astype(float)
    mass = ind @ p
    joint = (ind * p) @ ind.T
    return bool(np.all(joint >= np.outer(mass, mass) - tol))


def majorization_slack(v, w) -> float:
    """``min_k`` of (top-k sum of ``v``) minus (top-k sum of ``w``).

    Nonnegative exactly when ``v`` majorizes ``w`` (given equal totals).
    """
    a = np.cumsum(np.sort(np.asarray(v, dtype=float))[::-1])
    b = np.cumsum(np.sort(np.asarray(w, dtype=float))[::-1])
    if a.shape != b.shape:
        raise ValidationError("vectors must have equal length")
    return float(np.min(a - b))


def majorizes(v, w, tol: float = COMPARE_TOL) -> bool:
    """Whether ``v`` majorizes ``w``: every top-k sum of ``v`` is at least that of ``w``."""
    a, b = np.asarray(v, dtype=float), np.asarray(w, dtype=float)
    if abs(a.sum() - b.sum()) > tol:
        return False
    return majorization_slack(a, b) >= -tol


def dominates(mu, nu, poset: Poset, tol: float = COMPARE_TOL, *,
              down_sets=None, cap: int = DEFAULT_CAP) -> bool:
    """Whether ``mu`` is stochastically larger than ``nu``: ``mu(D) <= nu(D)`` on down-sets."""
    a, b = np.asarray(mu, dtype=float), np.asarray(nu, dtype=float)
    if a.shape != b.shape:
        raise ValidationError("pmfs must have equal length")
    ind = _ideals(poset, down_sets, cap).astype(float)
    return bool(np.all(ind @ a <= ind @ b + tol))


def stochastically_ordered(l: Kernel, k: Kernel, poset: Poset, tol: float = COMPARE_TOL, *,
                           down_sets=None, cap: int = DEFAULT_CAP) -> bool:
    """Whether ``L <=_st K``: ``K 1_D <= L 1_D`` entrywise for every down-set.

    Within the monotone kernels sharing pi this implies ``K <= L`` in the
    comparison order, but interesting comparisons rarely satisfy it.
    """
    ind = _ideals(poset, down_sets, cap).T.astype(float)
    return bool(np.all(np.asarray(k) @ ind <= np.asarray(l) @ ind + tol))


def positive_correlation_kernel_check(pi, poset: Poset, tol: float = COMPARE_TOL, **kw) -> bool:
    """Same question as :func:`has_positive_correlations`, asked as ``K_pi <= I``."""
    pi = as_pmf(pi, positive=True)
    return compare(trivial_kernel(pi), identity_kernel(pi.size), pi, poset, tol, **kw).holds
