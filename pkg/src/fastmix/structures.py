"""Card-shuffling and spin-system testbeds with single-site update kernels.

State spaces are enumerated explicitly, so everything here is meant for tiny
systems: decks of at most 5 cards and spin systems with at most 2**16
configurations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import Kernel, Pmf, Poset, ValidationError, as_pmf, direct_sum, trivial_kernel
from .orders import has_positive_correlations

__all__ = [
    "PermutationSpace", "SpinSpace", "bruhat_poset", "shuffle_site_kernel",
    "shuffle_stationary", "ising_pmf", "spin_site_kernel", "site_classes",
    "is_monotone_system", "scan_kernels", "doubly_stochastic_sample",
]

MAX_DECK = 5
MAX_SPIN_STATES = 2**16


def _inversions(perm) -> int:
    return sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])


@dataclass(frozen=True, eq=False)
class PermutationSpace:
    """All permutations of ``0..n-1`` in lexicographic order."""

    n: int
    states: tuple = field(init=False)
    index: dict = field(init=False)
    inv: np.ndarray = field(init=False)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DECK:
            raise ValidationError(f"deck size must be between 1 and {MAX_DECK}")
        states = tuple(itertools.permutations(range(self.n)))
        inv = np.array([_inversions(s) for s in states], dtype=int)
        inv.flags.writeable = False
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "index", {s: k for k, s in enumerate(states)})
        object.__setattr__(self, "inv", inv)

    def __len__(self):
        return len(self.states)


def bruhat_poset(n: int) -> Poset:
    """Bruhat order on permutations of ``n`` cards (lexicographic state order).

    Covers are swaps of two (not necessarily adjacent) positions that raise
    the inversion count by exactly one; the order is their transitive closure.
    """
    if n > MAX_DECK:
        raise ValidationError(f"Bruhat poset limited to n <= {MAX_DECK}")
    space = PermutationSpace(n)
    covers = []
    for x, perm in enumerate(space.states):
        for a, b in itertools.combinations(range(n), 2):
            swapped = list(perm)
            swapped[a], swapped[b] = swapped[b], swapped[a]
            y = space.index[tuple(swapped)]
            if space.inv[y] == space.inv[x] + 1:
                covers.append((x, y))
    return Poset.from_covers(len(space), covers)


def shuffle_stationary(n: int, p: float) -> Pmf:
    """``pi(x)`` proportional to ``((1 - p)/p)^inv(x)``."""
    space = PermutationSpace(n)
    logw = space.inv * math.log((1 - p) / p)
    w = np.exp(logw - logw.max())
    return Pmf(w / w.sum(), positive=True)


def shuffle_site_kernel(n: int, i: int, p: float) -> Kernel:
    """Update of positions ``i, i+1`` (1-based): sort w.p. ``p``, anti-sort otherwise."""
    if not 0 < p < 1:
        raise ValidationError("sort probability must lie in (0, 1)")
    if not 1 <= i <= n - 1:
        raise ValidationError(f"position must lie in 1..{n - 1}")
    space = PermutationSpace(n)
    m = np.zeros((len(space), len(space)))
    a = i - 1
    for x, perm in enumerate(space.states):
        lo, hi = sorted(perm[a:a + 2])
        srt = perm[:a] + (lo, hi) + perm[a + 2:]
        anti = perm[:a] + (hi, lo) + perm[a + 2:]
        m[x, space.index[srt]] += p
        m[x, space.index[anti]] += 1 - p
    return Kernel(m, stationary=shuffle_stationary(n, p))


@dataclass(frozen=True, eq=False)
class SpinSpace:
    """Configurations of linearly ordered spins on the sites of a graph.

    ``states`` lists all configurations in lexicographic order (site 0 most
    significant); ``poset`` is the componentwise product order.
    """

    n_sites: int
    n_spins: int = 2
    edges: tuple = ()
    states: np.ndarray = field(init=False)
    poset: Poset = field(init=False)

    def __post_init__(self):
        if self.n_sites < 1 or self.n_spins < 1:
            raise ValidationError("need at least one site and one spin value")
        if self.n_spins ** self.n_sites > MAX_SPIN_STATES:
            raise ValidationError(f"state space larger than {MAX_SPIN_STATES}")
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        states = np.array(list(np.ndindex(*([self.n_spins] * self.n_sites))), dtype=int)
        states = states.reshape(-1, self.n_sites)
        states.flags.writeable = False
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "poset", Poset.product([self.n_spins] * self.n_sites))

    def __len__(self):
        return self.states.shape[0]

    @classmethod
    def grid(cls, rows: int, cols: int, n_spins: int = 2) -> "SpinSpace":
        """Rectangular grid graph; site ``r * cols + c``."""
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
        return cls(rows * cols, n_spins, tuple(edges))


def ising_pmf(space: SpinSpace, beta: float) -> Pmf:
    """Weights ``exp(beta * #agreeing edges)``, normalized.  Ferromagnetic for ``beta > 0``."""
    x = space.states
    agree = np.zeros(len(space))
    for u, v in space.edges:
        agree += x[:, u] == x[:, v]
    logw = beta * agree
    w = np.exp(logw - logw.max())
    return Pmf(w / w.sum(), positive=True)


def site_classes(space: SpinSpace, v: int) -> list[np.ndarray]:
    """Groups of configurations that agree off site ``v``, each sorted by the spin at ``v``."""
    if not 0 <= v < space.n_sites:
        raise ValidationError("site out of range")
    others = np.delete(space.states, v, axis=1)
    keys = np.ravel_multi_index(others.T, [space.n_spins] * (space.n_sites - 1)) \
        if space.n_sites > 1 else np.zeros(len(space), dtype=int)
    classes = []
    for key in np.unique(keys):
        members = np.nonzero(keys == key)[0]
        classes.append(members[np.argsort(space.states[members, v])])
    return classes


def spin_site_kernel(space: SpinSpace, pi, v: int) -> Kernel:
    """Heat-bath update at site ``v``: resample its spin from the conditional law.

    Built as the direct sum, over classes of configurations agreeing off
    ``v``, of kernels jumping to ``pi`` conditioned on the class.  Each
    conditional law is checked for positive correlations.
    """
    pmf = as_pmf(pi, positive=True)
    if pmf.size != len(space):
        raise ValidationError("pi does not match the spin space")
    blocks, cells = [], []
    for cls_ in site_classes(space, v):
        cond = pmf.weights[cls_] / pmf.weights[cls_].sum()
        sub = space.poset.restrict(cls_)
        if not has_positive_correlations(cond, sub):
            raise ValidationError(f"conditional law on class {cls_.tolist()} lacks positive correlations")
        blocks.append(trivial_kernel(cond))
        cells.append(cls_)
    return direct_sum(blocks, cells).with_stationary(pmf)


def is_monotone_system(space: SpinSpace, pi, tol: float = 1e-12) -> bool:
    """Whether every site's conditional spin law increases with the conditioning spins.

    Compares conditional cdfs for each pair of classes whose off-site
    configurations are componentwise ordered.
    """
    w = as_pmf(pi, positive=True).weights
    for v in range(space.n_sites):
        classes = site_classes(space, v)
        others = [np.delete(space.states[c[0]], v) for c in classes]
        cdfs = [np.cumsum(w[c] / w[c].sum()) for c in classes]
        for a, b in itertools.permutations(range(len(classes)), 2):
            if np.all(others[a] <= others[b]) and np.any(cdfs[b] > cdfs[a] + tol):
                return False
    return True


def scan_kernels(space: SpinSpace, pi, order: Optional[Sequence[int]] = None,
                 weights=None) -> tuple[Kernel, Kernel]:
    """Systematic sweep ``K_{v1} ... K_{vk}`` and random-site mixture ``sum_v p_v K_v``.

    ``order`` defaults to all sites in index order, ``weights`` to uniform.
    """
    pmf = as_pmf(pi, positive=True)
    sites = list(range(space.n_sites)) if order is None else list(order)
    per_site = {v: spin_site_kernel(space, pmf, v) for v in set(sites) | set(range(space.n_sites))}
    syst = np.eye(len(space))
    for v in sites:
        syst = syst @ np.asarray(per_site[v])
    wts = np.full(space.n_sites, 1.0 / space.n_sites) if weights is None else np.asarray(weights, float)
    if wts.shape != (space.n_sites,) or np.any(wts < 0) or abs(wts.sum() - 1) > 1e-12:
        raise ValidationError("site weights must be a pmf over the sites")
    rand = sum(wts[v] * np.asarray(per_site[v]) for v in range(space.n_sites))
    return Kernel(syst, stationary=pmf), Kernel(rand, stationary=pmf)


def doubly_stochastic_sample(n_states: int, seed: int, terms: int = 4) -> Kernel:
    """Random convex combination of ``terms`` uniformly drawn permutation matrices."""
    if terms < 1:
        raise ValidationError("need at least one term")
    rng = np.random.default_rng(seed)
    lam = rng.dirichlet(np.ones(terms))
    m = np.zeros((n_states, n_states))
    eye = np.eye(n_states)
    for weight in lam:
        m += weight * eye[rng.permutation(n_states)]
    return Kernel(m, stationary=Pmf.uniform(n_states))
