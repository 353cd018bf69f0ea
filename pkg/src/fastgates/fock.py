"""Truncated number-basis operator algebra and dense matrix utilities.

Everything downstream (kick unitaries, free evolution, fidelity pipelines)
is built from the handful of primitives in this module. Matrices are plain
complex numpy arrays; truncation-artifact detection is the caller's job.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


@dataclass(frozen=True)
class FockBasis:
    """Truncated harmonic-oscillator basis |0>, ..., |dim-1>."""

    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"basis needs at least 2 states, got dim={self.dim}")


def ladder(basis: FockBasis):
    """Annihilation and creation operators on the truncated basis.

    Returns
    -------
    (a, adag) : pair of dim x dim complex arrays
        a|n> = sqrt(n)|n-1>; adag is the conjugate transpose. On the
        truncated basis a*adag - adag*a deviates from the identity only
        in the last diagonal entry.
    """
    n = np.arange(1, basis.dim)
    a = np.zeros((basis.dim, basis.dim), dtype=complex)
    a[n - 1, n] = np.sqrt(n)
    return a, a.conj().T


def matrix_exp(m: np.ndarray) -> np.ndarray:
    """Matrix exponential of a square complex matrix.

    Thin validation wrapper over scipy's scaling-and-squaring Pade
    implementation; anti-Hermitian input yields unitary output.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix_exp needs a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix_exp: non-finite entries")
    return scipy.linalg.expm(m)


def displacement(alpha: complex, basis: FockBasis) -> np.ndarray:
    """Displacement operator exp(alpha*adag - conj(alpha)*a)."""
    a, adag = ladder(basis)
    return matrix_exp(alpha * adag - np.conj(alpha) * a)


def rotation(theta: float, basis: FockBasis) -> np.ndarray:
    """Free harmonic evolution: diagonal phases e^{-i*theta*n}."""
    return np.diag(np.exp(-1j * theta * np.arange(basis.dim)))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product (row-major: index = i_a * dim_b + i_b)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def position_eigenbasis(basis: FockBasis):
    """Eigendecomposition of X = a + adag, cached per dimension.

    Every kick and pulse unitary couples to the motion only through X,
    so in this basis they are diagonal over the motional index. Returns
    (lam, v) with X = v @ diag(lam) @ v.T; v is real orthogonal.
    """
    return _position_eigenbasis_cached(basis.dim)


_X_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _position_eigenbasis_cached(dim: int):
    if dim not in _X_CACHE:
        n = np.arange(1, dim)
        x = np.zeros((dim, dim))
        x[n - 1, n] = np.sqrt(n)
        x[n, n - 1] = np.sqrt(n)
        lam, v = np.linalg.eigh(x)
        _X_CACHE[dim] = (lam, v)
    return _X_CACHE[dim]
