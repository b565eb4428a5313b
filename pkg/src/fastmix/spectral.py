"""Spectra of reversible kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .core import NumericalError, ReducibleError, ValidationError, as_pmf, is_reversible
from .core import _is_tridiagonal

__all__ = ["Spectrum", "spectrum_reversible", "slem", "relaxation_time", "biased_rw_eigenvalues"]

REVERSIBLE_TOL = 1e-10
UNIT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues sorted non-increasing."""

    eigenvalues: np.ndarray

    def __len__(self):
        return self.eigenvalues.size


def spectrum_reversible(kernel, pi) -> Spectrum:
    """Real spectrum of a kernel reversible with respect to ``pi``.

    Works on the symmetrization ``D^{1/2} K D^{-1/2}`` with ``D = diag(pi)``.
    """
    p = as_pmf(pi, positive=True).weights
    k = np.asarray(kernel, dtype=float)
    if not is_reversible(k, p, REVERSIBLE_TOL):
        raise ValidationError("kernel is not reversible with respect to pi")
    s = np.sqrt(p)
    sym = s[:, None] * k / s[None, :]
    sym = 0.5 * (sym + sym.T)
    if _is_tridiagonal(k) and k.shape[0] > 1:
        vals, vecs = eigh_tridiagonal(np.diag(sym).copy(), np.diag(sym, 1).copy())
    else:
        vals, vecs = np.linalg.eigh(sym)
    recon = (vecs * vals) @ vecs.T
    if np.max(np.abs(recon - sym)) > 1e-8:
        raise NumericalError("eigendecomposition failed its reconstruction check")
    vals = np.sort(vals)[::-1]
    vals.flags.writeable = False
    return Spectrum(vals)


def slem(kernel, pi) -> float:
    """Second-largest eigenvalue in modulus of an ergodic reversible kernel."""
    vals = spectrum_reversible(kernel, pi).eigenvalues
    unit = np.abs(vals - 1.0) <= UNIT_TOL
    if unit.sum() != 1:
        raise ReducibleError(f"kernel has {int(unit.sum())} unit eigenvalues; not irreducible")
    if np.any(vals <= -1.0 + UNIT_TOL):
        raise ReducibleError("kernel has eigenvalue -1; it is periodic")
    rest = vals[~unit]
    return float(np.max(np.abs(rest))) if rest.size else 0.0


def relaxation_time(kernel, pi) -> float:
    return 1.0 / (1.0 - slem(kernel, pi))


def biased_rw_eigenvalues(rho: float, n: int) -> np.ndarray:
    """Closed-form spectrum of the biased walk: 1 and ``2 sqrt(pq) cos(pi j/(n+1))``."""
    p, q = rho / (1 + rho), 1 / (1 + rho)
    j = np.arange(1, n + 1)
    return np.concatenate([[1.0], 2 * math.sqrt(p * q) * np.cos(math.pi * j / (n + 1))])
