"""Value types for finite Markov chains: pmfs, kernels and posets.

Everything here is immutable after construction.  Arrays handed out by the
types are read-only views, so a kernel can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

__all__ = [
    "FastmixError", "ValidationError", "ReducibleError", "NumericalError",
    "Pmf", "Kernel", "Poset",
    "as_pmf", "stationary", "time_reversal", "evolve", "mixture",
    "direct_sum", "identity_kernel", "trivial_kernel", "is_irreducible",
    "is_reversible", "is_stationary",
]

PMF_TOL = 1e-12
ROW_TOL = 1e-12
CLAMP_TOL = 1e-12
STATIONARY_TOL = 1e-10


class FastmixError(Exception):
    """Base class for library errors."""


class ValidationError(FastmixError, ValueError):
    """Input violates a documented precondition."""


class ReducibleError(ValidationError):
    """Kernel has no unique stationary distribution."""


class NumericalError(FastmixError, ArithmeticError):
    """A numerical routine failed to converge or lost accuracy."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function on states ``0..N-1``.

    ``positive=True`` additionally requires every weight to be strictly
    positive, as for stationary distributions.
    """

    weights: np.ndarray
    positive: bool = False

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValidationError("pmf must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(w)):
            raise ValidationError("pmf has non-finite weights")
        if np.any(w < 0):
            raise ValidationError(f"pmf has negative weight at state {int(np.argmin(w))}")
        if abs(w.sum() - 1.0) > PMF_TOL * max(1, w.size):
            raise ValidationError(f"pmf weights sum to {float(w.sum())!r}, not 1")
        if self.positive and np.any(w <= 0):
            raise ValidationError(f"pmf must be positive; state {int(np.argmin(w))} has weight 0")
        object.__setattr__(self, "weights", _frozen(w))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.weights, dtype=dtype)

    def __len__(self):
        return self.weights.size

    def __getitem__(self, i):
        return self.weights[i]

    @property
    def size(self) -> int:
        return self.weights.size

    @classmethod
    def point_mass(cls, n_states: int, state: int = 0) -> "Pmf":
        w = np.zeros(n_states)
        w[state] = 1.0
        return cls(w)

    @classmethod
    def uniform(cls, n_states: int) -> "Pmf":
        return cls(np.full(n_states, 1.0 / n_states), positive=True)

    @classmethod
    def from_weights(cls, weights, positive: bool = True) -> "Pmf":
        """Normalize nonnegative weights into a pmf."""
        w = np.asarray(weights, dtype=float)
        return cls(w / w.sum(), positive=positive)


def as_pmf(x, positive: bool = False) -> Pmf:
    if isinstance(x, Pmf):
        if positive and not x.positive:
            return Pmf(x.weights, positive=True)
        return x
    return Pmf(np.asarray(x, dtype=float), positive=positive)


class Kernel:
    """Row-stochastic transition matrix with an optional cached stationary pmf.

    Entries in ``[-1e-12, 0)`` are treated as round-off and clamped to zero;
    anything more negative is rejected.
    """

    __slots__ = ("matrix", "stationary")

    def __init__(self, matrix, stationary=None):
        m = np.array(matrix, dtype=float, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValidationError(f"kernel must be a non-empty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValidationError("kernel has non-finite entries")
        bad = m < -CLAMP_TOL
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise ValidationError(f"kernel entry ({i}, {j}) = {float(m[i, j])!r} is negative")
        m[m < 0] = 0.0
        if np.any(m > 1 + 1e-15):
            i, j = np.argwhere(m > 1 + 1e-15)[0]
            raise ValidationError(f"kernel entry ({i}, {j}) = {float(m[i, j])!r} exceeds 1")
        rows = m.sum(axis=1)
        off = np.abs(rows - 1.0)
        if np.any(off > ROW_TOL):
            i = int(np.argmax(off))
            raise ValidationError(f"row {i} of kernel sums to {float(rows[i])!r}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        if stationary is not None:
            pi = as_pmf(stationary, positive=True)
            if pi.size != m.shape[0]:
                raise ValidationError("stationary pmf has the wrong length")
            if not is_stationary(m, pi.weights):
                raise ValidationError("cached pmf is not stationary for the kernel")
            stationary = pi
        object.__setattr__(self, "stationary", stationary)

    def __setattr__(self, name, value):
        raise AttributeError("Kernel is immutable")

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"Kernel(n_states={self.n_states})"

    def __matmul__(self, other):
        if isinstance(other, Kernel):
            pi = self.stationary
            if pi is not None and other.stationary is not None:
                if not np.allclose(pi.weights, other.stationary.weights, atol=STATIONARY_TOL, rtol=0):
                    pi = None
            elif other.stationary is None:
                pi = None
            return Kernel(self.matrix @ other.matrix, stationary=pi)
        return self.matrix @ np.asarray(other)

    @property
    def n_states(self) -> int:
        return self.matrix.shape[0]

    @property
    def shape(self):
        return self.matrix.shape

    def power(self, t: int) -> "Kernel":
        if t < 0:
            raise ValidationError("power must be nonnegative")
        return Kernel(np.linalg.matrix_power(self.matrix, t), stationary=self.stationary)

    def with_stationary(self, pi) -> "Kernel":
        return Kernel(self.matrix, stationary=pi)


def identity_kernel(n_states: int, stationary=None) -> Kernel:
    return Kernel(np.eye(n_states), stationary=stationary)


def trivial_kernel(pi) -> Kernel:
    """The kernel that jumps to ``pi`` in one step from every state."""
    pi = as_pmf(pi, positive=True)
    return Kernel(np.tile(pi.weights, (pi.size, 1)), stationary=pi)


def is_stationary(kernel, pi, tol: float = STATIONARY_TOL) -> bool:
    k = np.asarray(kernel, dtype=float)
    p = np.asarray(pi, dtype=float)
    return bool(np.all(np.abs(p @ k - p) <= tol))


def is_reversible(kernel, pi, tol: float = STATIONARY_TOL) -> bool:
    k = np.asarray(kernel, dtype=float)
    flow = np.asarray(pi, dtype=float)[:, None] * k
    return bool(np.all(np.abs(flow - flow.T) <= tol))


def is_irreducible(kernel) -> bool:
    k = np.asarray(kernel, dtype=float)
    n_comp, _ = connected_components(k > 0, directed=True, connection="strong")
    return n_comp == 1


def _is_tridiagonal(m: np.ndarray) -> bool:
    n = m.shape[0]
    if n < 3:
        return True
    band = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) <= 1
    return not np.any(m[~band])


def _bd_stationary(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    up = np.diag(m, 1)
    down = np.diag(m, -1)
    if np.any(up <= 0) or np.any(down <= 0):
        i = int(np.argmin(np.minimum(up, down)))
        raise ReducibleError(f"birth-and-death kernel is reducible across edge ({i}, {i + 1})")
    # log-space cumulative detailed-balance products avoid overflow for long paths
    logw = np.concatenate([[0.0], np.cumsum(np.log(up) - np.log(down))])
    w = np.exp(logw - logw.max())
    return w / w.sum() if n else w


def stationary(kernel: Kernel) -> Pmf:
    """Unique stationary pmf of an irreducible kernel.

    Tridiagonal (birth-and-death) kernels use the detailed-balance product
    form; everything else goes through a dense least-squares solve of
    ``(K^T - I) pi = 0`` augmented with the normalization row.
    """
    m = np.asarray(kernel, dtype=float)
    n = m.shape[0]
    if n == 1:
        return Pmf(np.ones(1), positive=True)
    if not is_irreducible(m):
        raise ReducibleError("kernel is reducible; stationary pmf is not unique")
    if _is_tridiagonal(m):
        pi = _bd_stationary(m)
    else:
        a = np.vstack([m.T - np.eye(n), np.ones((1, n))])
        b = np.zeros(n + 1)
        b[-1] = 1.0
        pi, *_ = np.linalg.lstsq(a, b, rcond=None)
        pi = np.clip(pi, 0.0, None)
        pi /= pi.sum()
    if not is_stationary(m, pi):
        raise NumericalError("stationary solve did not reach 1e-10 accuracy")
    return Pmf(pi, positive=True)


def time_reversal(kernel: Kernel, pi) -> Kernel:
    """Time reversal ``K*(i, j) = pi(j) K(j, i) / pi(i)``."""
    pi = as_pmf(pi, positive=True)
    m = np.asarray(kernel, dtype=float)
    if not is_stationary(m, pi.weights):
        raise ValidationError("pi is not stationary for the kernel")
    p = pi.weights
    rev = (p[None, :] * m.T) / p[:, None]
    # renormalize rows: pi K = pi only holds to 1e-10
    rev /= rev.sum(axis=1, keepdims=True)
    return Kernel(rev, stationary=pi)


def evolve(init, kernel: Kernel, t: int) -> Pmf:
    """Law of ``X_t`` when ``X_0 ~ init``."""
    if t < 0:
        raise ValidationError("step count must be nonnegative")
    mu = np.asarray(init, dtype=float)
    m = np.asarray(kernel, dtype=float)
    for _ in range(t):
        mu = mu @ m
    return Pmf(np.clip(mu, 0.0, None) / max(mu.sum(), 1e-300))


def mixture(lam: float, k0: Kernel, k1: Kernel) -> Kernel:
    """Entrywise ``(1 - lam) k0 + lam k1``."""
    if not 0.0 <= lam <= 1.0:
        raise ValidationError("mixture weight must lie in [0, 1]")
    a, b = np.asarray(k0), np.asarray(k1)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    pi = None
    s0, s1 = getattr(k0, "stationary", None), getattr(k1, "stationary", None)
    if s0 is not None and s1 is not None and np.allclose(s0.weights, s1.weights, atol=STATIONARY_TOL, rtol=0):
        pi = s0
    return Kernel((1.0 - lam) * a + lam * b, stationary=pi)


def direct_sum(blocks: Sequence[Kernel], cells: Sequence[Sequence[int]]) -> Kernel:
    """Block kernel acting as ``blocks[c]`` inside ``cells[c]``.

    ``cells[c][a]`` is the global state index of local state ``a`` of block
    ``c``; the cells must partition ``0..N-1``.
    """
    if len(blocks) != len(cells):
        raise ValidationError("need one cell per block")
    cells = [np.asarray(c, dtype=int) for c in cells]
    n = sum(c.size for c in cells)
    seen = np.zeros(n, dtype=int)
    for c in cells:
        if c.size and (c.min() < 0 or c.max() >= n):
            raise ValidationError("cell index out of range; cells must partition 0..N-1")
        np.add.at(seen, c, 1)
    if np.any(seen != 1):
        raise ValidationError(
            f"cells must partition the ground set; state {int(np.argmax(seen != 1))} "
            f"is covered {int(seen[np.argmax(seen != 1)])} times"
        )
    out = np.zeros((n, n))
    for k, c in zip(blocks, cells):
        km = np.asarray(k, dtype=float)
        if km.shape != (c.size, c.size):
            raise ValidationError("block size does not match its cell")
        out[np.ix_(c, c)] = km
    return Kernel(out)


@dataclass(frozen=True, eq=False)
class Poset:
    """Finite poset on ``0..N-1``; ``leq[x, y]`` means ``x <= y``."""

    leq: np.ndarray

    def __post_init__(self):
        r = np.array(self.leq, dtype=bool, copy=True)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValidationError("order relation must be a square boolean matrix")
        if not np.all(np.diag(r)):
            raise ValidationError("order relation is not reflexive")
        if np.any(r & r.T & ~np.eye(r.shape[0], dtype=bool)):
            raise ValidationError("order relation is not antisymmetric")
        ri = r.astype(np.int64)
        if np.any(((ri @ ri) > 0) & ~r):
            raise ValidationError("order relation is not transitive")
        r.flags.writeable = False
        object.__setattr__(self, "leq", r)

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    def less(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y]) and x != y

    @classmethod
    def chain(cls, n_states: int) -> "Poset":
        """Linear order ``0 < 1 < ... < N-1``."""
        i = np.arange(n_states)
        return cls(i[:, None] <= i[None, :])

    @classmethod
    def antichain(cls, n_states: int) -> "Poset":
        return cls(np.eye(n_states, dtype=bool))

    @classmethod
    def from_covers(cls, n_states: int, covers) -> "Poset":
        """Reflexive-transitive closure of the relation ``x < y`` for ``(x, y)`` in covers."""
        r = np.eye(n_states, dtype=bool)
        for x, y in covers:
            r[x, y] = True
        # Warshall closure
        for k in range(n_states):
            r |= r[:, [k]] & r[[k], :]
        return cls(r)

    @classmethod
    def product(cls, sizes: Sequence[int]) -> "Poset":
        """Componentwise order on the product of chains, states in lexicographic order."""
        grids = np.array(list(np.ndindex(*sizes)), dtype=int)
        return cls(np.all(grids[:, None, :] <= grids[None, :, :], axis=2))

    def restrict(self, states: Sequence[int]) -> "Poset":
        s = np.asarray(states, dtype=int)
        return Poset(self.leq[np.ix_(s, s)])
