"""Constructors for birth-and-death chain families on the path ``{0, ..., n}``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Kernel, Pmf, ValidationError, as_pmf, is_irreducible

__all__ = [
    "BdParams", "WParams", "bd_kernel", "bd_params", "bd_monotone",
    "symmetric_bd", "uniform_chain", "fmmc_logconcave", "biased_rw", "from_w",
    "theta_ratio", "theta_closed", "lw_optimal_path", "lw_objective",
    "fmmc_lw", "budgeted_min_tmix", "budgeted_tmix_value", "golden_section",
]

SUM_TOL = 1e-12
LOGCONCAVE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BdParams:
    """(death, hold, birth) probabilities ``(q_i, r_i, p_i)`` for ``i = 0..n``."""

    q: np.ndarray
    r: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q, r, p = (np.array(a, dtype=float) for a in (self.q, self.r, self.p))
        if not (q.shape == r.shape == p.shape) or q.ndim != 1 or q.size < 1:
            raise ValidationError("q, r, p must be 1-d arrays of equal length")
        if q[0] != 0 or p[-1] != 0:
            raise ValidationError("need q_0 = 0 and p_n = 0")
        for name, a in (("q", q), ("r", r), ("p", p)):
            if np.any(a < 0):
                raise ValidationError(f"{name}_{int(np.argmin(a))} is negative")
        s = q + r + p
        if np.any(np.abs(s - 1) > SUM_TOL):
            i = int(np.argmax(np.abs(s - 1)))
            raise ValidationError(f"q + r + p = {float(s[i])!r} at state {i}")
        for a in (q, r, p):
            a.flags.writeable = False
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.q.size - 1

    @property
    def irreducible(self) -> bool:
        return bool(np.all(self.p[:-1] > 0) and np.all(self.q[1:] > 0))

    @property
    def ergodic(self) -> bool:
        return self.irreducible and (self.n == 0 or bool(np.any(self.r > 0)))

    @property
    def monotone(self) -> bool:
        return bd_monotone(self)

    def kernel(self, stationary=None) -> Kernel:
        m = np.diag(self.r)
        if self.n:
            m += np.diag(self.p[:-1], 1) + np.diag(self.q[1:], -1)
        return Kernel(m, stationary=stationary)


def bd_kernel(q, r, p, stationary=None) -> Kernel:
    return BdParams(q, r, p).kernel(stationary)


def bd_params(kernel) -> BdParams:
    """Read ``(q, r, p)`` off a tridiagonal kernel."""
    m = np.asarray(kernel, dtype=float)
    n = m.shape[0] - 1
    band = np.abs(np.subtract.outer(np.arange(n + 1), np.arange(n + 1))) <= 1
    if np.any(m[~band] != 0):
        raise ValidationError("kernel is not birth-and-death (not tridiagonal)")
    q = np.concatenate([[0.0], np.diag(m, -1)])
    p = np.concatenate([np.diag(m, 1), [0.0]])
    return BdParams(q, np.diag(m).copy(), p)


def bd_monotone(bd, tol: float = 1e-12) -> bool:
    """Closed-form monotonicity test ``K(i, i+1) + K(i+1, i) <= 1``."""
    if isinstance(bd, Kernel) or not isinstance(bd, BdParams):
        bd = bd_params(bd)
    return bool(np.all(bd.p[:-1] + bd.q[1:] <= 1 + tol))


def symmetric_bd(p) -> Kernel:
    """Symmetric path kernel with ``K(i, i+1) = K(i+1, i) = p_i``; stationary pmf uniform."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise ValidationError("need at least one edge probability")
    if np.any(p < 0):
        raise ValidationError(f"p_{int(np.argmin(p))} is negative")
    load = np.concatenate([[0.0], p]) + np.concatenate([p, [0.0]])
    if np.any(load > 1 + SUM_TOL):
        i = int(np.argmax(load))
        raise ValidationError(f"row {i} is not stochastic: p_{i - 1} + p_{i} = {float(load[i])!r} > 1")
    n = p.size
    m = np.diag(1.0 - np.clip(load, 0, 1)) + np.diag(p, 1) + np.diag(p, -1)
    return Kernel(m, stationary=Pmf.uniform(n + 1))


def uniform_chain(n: int) -> Kernel:
    """Symmetric path walk with probability 1/2 each way, holding 1/2 at both ends."""
    if n < 1:
        raise ValidationError("uniform chain needs n >= 1")
    return symmetric_bd(np.full(n, 0.5))


def _check_logconcave(pi):
    inner = pi[1:-1] ** 2 - pi[:-2] * pi[2:]
    bad = inner < -LOGCONCAVE_TOL * pi[1:-1] ** 2
    if np.any(bad):
        i = int(np.argmax(bad)) + 1
        raise ValidationError(f"pi is not log-concave at index {i}")


def fmmc_logconcave(pi) -> BdParams:
    """Fastest-mixing monotone birth-and-death chain for a log-concave ``pi``.

    ``q_i = pi_{i-1}/(pi_{i-1}+pi_i)``, ``p_i = pi_{i+1}/(pi_i+pi_{i+1})`` and
    holding takes the remainder, which log-concavity makes nonnegative.
    """
    p_ = as_pmf(pi, positive=True).weights
    _check_logconcave(p_)
    ext = np.concatenate([[0.0], p_, [0.0]])
    q = ext[:-2] / (ext[:-2] + ext[1:-1])
    p = ext[2:] / (ext[1:-1] + ext[2:])
    r = (ext[1:-1] ** 2 - ext[:-2] * ext[2:]) / ((ext[:-2] + ext[1:-1]) * (ext[1:-1] + ext[2:]))
    r = np.where((r < 0) & (r > -LOGCONCAVE_TOL), 0.0, r)
    return BdParams(q, r, p)


def biased_rw(rho: float, n: int) -> Kernel:
    """Biased walk with ``p = rho/(1+rho)``, ``q = 1/(1+rho)``; holds only at the ends."""
    if rho <= 0:
        raise ValidationError("rho must be positive")
    if n < 1:
        raise ValidationError("need n >= 1")
    up, down = rho / (1 + rho), 1 / (1 + rho)
    q = np.full(n + 1, down)
    p = np.full(n + 1, up)
    r = np.zeros(n + 1)
    q[0], p[n] = 0.0, 0.0
    r[0], r[n] = down, up
    logw = np.arange(n + 1) * math.log(rho)
    w = np.exp(logw - logw.max())
    return bd_kernel(q, r, p, stationary=Pmf(w / w.sum(), positive=True))


@dataclass(frozen=True, eq=False)
class WParams:
    """Edge flows ``w_i = pi_i p_i = pi_{i+1} q_{i+1}`` of a reversible path chain."""

    w: np.ndarray
    pi: Pmf

    def __post_init__(self):
        pi = as_pmf(self.pi, positive=True)
        w = np.array(self.w, dtype=float)
        if w.shape != (pi.size - 1,):
            raise ValidationError("need exactly n edge weights for n + 1 states")
        if np.any(w < 0):
            raise ValidationError(f"w_{int(np.argmin(w))} is negative")
        load = np.concatenate([[0.0], w]) + np.concatenate([w, [0.0]])
        over = load - pi.weights
        if np.any(over > SUM_TOL):
            i = int(np.argmax(over))
            raise ValidationError(f"w_{i - 1} + w_{i} exceeds pi_{i}")
        w.flags.writeable = False
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "pi", pi)

    @property
    def irreducible(self) -> bool:
        return bool(np.all(self.w > 0))


def from_w(params: WParams) -> Kernel:
    """Path kernel with ``p_i = w_i/pi_i``, ``q_i = w_{i-1}/pi_i`` and holding the rest.

    Boundary flows (some ``w_i = 0``) give a reducible kernel; check
    ``params.irreducible`` before handing it to routines that need ergodicity.
    """
    pi = params.pi.weights
    wl = np.concatenate([[0.0], params.w])
    wr = np.concatenate([params.w, [0.0]])
    p = wr / pi
    q = wl / pi
    r = np.clip(1.0 - p - q, 0.0, None)
    k = bd_kernel(q, r, p)
    if params.irreducible:
        return k.with_stationary(params.pi)
    return k


def _lw_sums(n):
    a = (n + 1) * (n * n + 2 * n + 3) / 12.0
    b = (n + 1) * (n - 1) * (n + 3) / 12.0
    return a, b


def theta_ratio(n: int) -> float:
    """Optimal alternating birth probability for odd ``n``, as ``1/(1+sqrt(a/b))``."""
    if n < 3 or n % 2 == 0:
        raise ValidationError("theta is defined for odd n >= 3")
    a, b = _lw_sums(n)
    return 1.0 / (1.0 + math.sqrt(a / b))


def theta_closed(n: int) -> float:
    """Same quantity via the surd ``[sqrt((m^2+2)(m^2-4)) - (m^2-4)]/6`` with ``m = n + 1``."""
    if n < 3 or n % 2 == 0:
        raise ValidationError("theta is defined for odd n >= 3")
    m2 = float((n + 1) ** 2)
    return (math.sqrt((m2 + 2) * (m2 - 4)) - (m2 - 4)) / 6.0


def lw_objective(p) -> float:
    """Mixing time ``sum (k+1)(n-k)/((n+1) p_k)`` of a symmetric path chain from 0."""
    p = np.asarray(p, dtype=float)
    n = p.size
    k = np.arange(n)
    with np.errstate(divide="ignore"):
        return float(np.sum((k + 1) * (n - k) / ((n + 1) * p)))


def lw_optimal_path(n: int) -> Kernel:
    """Symmetric path chain from 0 with the smallest Lovasz-Winkler mixing time.

    Uniform chain for even ``n``; alternating ``1 - theta, theta, ...`` for odd ``n``.
    """
    if n < 1:
        raise ValidationError("need n >= 1")
    if n % 2 == 0 or n == 1:
        return uniform_chain(n)
    th = theta_ratio(n)
    p = np.where(np.arange(n) % 2 == 0, 1.0 - th, th)
    return symmetric_bd(p)


def golden_section(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 500):
    """Minimize a unimodal ``f`` on ``[lo, hi]``; endpoints are evaluated too.

    Returns ``(x, f(x))``.
    """
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    cands = [(fc, c), (fd, d), (f(lo), lo), (f(hi), hi)]
    fx, x = min(cands, key=lambda t: t[0])
    return x, fx


def _alternating_offsets(pi):
    # a_i = sum_{j=1..i} (-1)^{i-j} pi_j, i = 0..n-1
    n = pi.size - 1
    a = np.zeros(n)
    for i in range(1, n):
        a[i] = pi[i] - a[i - 1]
    return a


def fmmc_lw(pi):
    """Holding-free path chain with stationary ``pi`` minimizing the LW mixing time.

    ``pi`` must be positive and non-decreasing.  The free parameter
    ``w = w_0 in [0, pi_0]`` determines all edge flows ``w_i = (-1)^i w + a_i``;
    the convex objective is minimized by golden-section search.

    Returns ``(kernel, w_star, tmix)``.
    """
    p_ = as_pmf(pi, positive=True).weights
    if np.any(np.diff(p_) < -1e-15):
        i = int(np.argmax(np.diff(p_) < -1e-15))
        raise ValidationError(f"pi must be non-decreasing; pi_{i} > pi_{i + 1}")
    n = p_.size - 1
    if n < 1:
        raise ValidationError("need at least two states")
    h = np.cumsum(p_)[:-1]
    num = h * (1 - h)
    a = _alternating_offsets(p_)
    sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)

    def f(w):
        flows = sign * w + a
        if np.any(flows <= 0):
            return math.inf
        return float(np.sum(num / flows))

    w_star, value = golden_section(f, 0.0, float(p_[0]))
    if not math.isfinite(value):
        raise ValidationError("no irreducible holding-free chain exists for this pi")
    flows = sign * w_star + a
    kernel = from_w(WParams(flows, Pmf(p_, positive=True)))
    return kernel, w_star, value


def budgeted_tmix_value(pi, c: float) -> float:
    """Optimal mixing time ``c^{-1} [sum_k sqrt(H_k (1 - H_k))]^2`` under flow budget ``c``."""
    p_ = as_pmf(pi, positive=True).weights
    h = np.cumsum(p_)[:-1]
    return float(np.sum(np.sqrt(h * (1 - h))) ** 2 / c)


def budgeted_min_tmix(pi, c: float) -> Kernel:
    """Path chain minimizing the LW mixing time subject to ``sum_k pi_k p_k = c``.

    Edge flows are proportional to ``sqrt(H_k (1 - H_k))``; ``c`` must lie in
    ``(0, min_i pi_i]``.
    """
    pmf = as_pmf(pi, positive=True)
    p_ = pmf.weights
    if not 0 < c <= p_.min() * (1 + 1e-12):
        raise ValidationError(f"budget c={c!r} must lie in (0, min pi] = (0, {float(p_.min())!r}]")
    h = np.cumsum(p_)[:-1]
    s = np.sqrt(h * (1 - h))
    w = c * s / s.sum()
    return from_w(WParams(w, pmf))
