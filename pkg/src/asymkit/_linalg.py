"""Small dense linear-algebra helpers used throughout the package."""

from __future__ import annotations

import numpy as np


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    n = u.shape[0]
    return u.shape == (n, n) and np.linalg.norm(dagger(u) @ u - np.eye(n)) <= tol * max(1, n)


def hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + dagger(a))


def expm_hermitian(h: np.ndarray, scale: complex = -1j) -> np.ndarray:
    """exp(scale * h) for Hermitian h, via eigendecomposition (unitarity-safe)."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(scale * w)) @ dagger(v)


def min_eig_hermitian(a: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(hermitize(a))[0])


def nuclear_norm(a: np.ndarray) -> float:
    return float(np.linalg.svd(a, compute_uv=False).sum())


def psd_clip(a: np.ndarray) -> np.ndarray:
    """Project a Hermitian matrix onto the PSD cone (eigenvalue clipping)."""
    w, v = np.linalg.eigh(hermitize(a))
    w = np.clip(w, 0.0, None)
    return (v * w) @ dagger(v)


def fix_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate a vector's global phase so its largest-modulus entry is real positive.

    Ties within `tol` resolve to the earliest index, keeping the gauge
    deterministic across runs.
    """
    mags = np.abs(v)
    top = mags.max()
    if top == 0.0:
        return v
    idx = int(np.flatnonzero(mags >= top - tol)[0])
    phase = v[idx] / abs(v[idx])
    return v / phase


def orthonormal_columns(a: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the column span of `a` (rank cut at `tol`)."""
    if a.size == 0:
        return a.reshape(a.shape[0], 0)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    rank = int(np.sum(s > tol * max(1.0, s[0] if s.size else 1.0)))
    return u[:, :rank]


def kernel_columns(a: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the (right) null space of `a`."""
    m, n = a.shape
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    u, s, vh = np.linalg.svd(a)
    s_full = np.zeros(n)
    s_full[: s.size] = s
    scale = max(1.0, s[0] if s.size else 1.0)
    mask = s_full <= tol * scale
    return vh.conj().T[:, mask]


def polar_unitary(a: np.ndarray) -> np.ndarray:
    """Unitary factor of the polar decomposition of a square matrix.

    Rank-deficient input still yields a genuine unitary: the action on the
    null space is the (deterministic) completion supplied by the full SVD.
    """
    u, s, vh = np.linalg.svd(a)
    return u @ vh


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary (QR of a complex Ginibre matrix, phase-fixed)."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
