"""Dense complex linear algebra for small Hilbert spaces (dim <= 64).

Everything here is a pure function of its inputs; nothing is cached or
mutated, so the routines are safe to call from parallel sweep workers.
"""

from __future__ import annotations

import numpy as np

# Ratio sigma_min/sigma_max below which a matrix is treated as singular.
SINGULARITY_RTOL = 1e-12

FROBENIUS = "frobenius"
SPECTRAL = "spectral"
NORM_KINDS = (FROBENIUS, SPECTRAL)


def frobenius_norm(a: np.ndarray) -> float:
    """sqrt(Tr(A^dag A)); zero iff A == 0."""
    return float(np.linalg.norm(a, "fro"))


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value of A."""
    return float(np.linalg.norm(a, 2))


def matrix_norm(a: np.ndarray, kind: str = FROBENIUS) -> float:
    if kind == FROBENIUS:
        return frobenius_norm(a)
    if kind == SPECTRAL:
        return spectral_norm(a)
    raise ValueError(f"unknown norm kind {kind!r}")


def condition_number(a: np.ndarray, kind: str = FROBENIUS) -> float:
    """||A|| * ||A^-1|| in the chosen norm; inf when A is (numerically) singular.

    Singularity cutoff: sigma_min/sigma_max < 1e-12.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("condition number requires a square matrix")
    sigma = np.linalg.svd(a, compute_uv=False)
    if sigma[0] == 0.0 or sigma[-1] < SINGULARITY_RTOL * sigma[0]:
        return float("inf")
    if kind == SPECTRAL:
        return float(sigma[0] / sigma[-1])
    if kind == FROBENIUS:
        return float(np.sqrt(np.sum(sigma**2) * np.sum(sigma**-2.0)))
    raise ValueError(f"unknown norm kind {kind!r}")


def solve_regularized(m: np.ndarray, b: np.ndarray, svd_cutoff: float = 0.0) -> np.ndarray:
    """Minimum-norm least-squares solution of M x = b via truncated SVD.

    Singular values below svd_cutoff * sigma_max are treated as zero.  With
    cutoff 0 and nonsingular M this is the exact solution; for M == 0 the
    minimum-norm solution is the zero vector.
    """
    m = np.asarray(m, dtype=float)
    b = np.asarray(b, dtype=float)
    if m.ndim != 2 or b.ndim != 1 or m.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: M {m.shape}, b {b.shape}")
    if svd_cutoff < 0:
        raise ValueError("svd_cutoff must be nonnegative")
    u, sigma, vt = np.linalg.svd(m, full_matrices=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return np.zeros(m.shape[1])
    if svd_cutoff > 0.0:
        keep = sigma >= svd_cutoff * sigma[0]
    else:
        keep = sigma > 0.0
    coeff = (u.T[keep] @ b) / sigma[keep]
    return vt[keep].T @ coeff


def hermitian_exp(h: np.ndarray, s: float, atol: float = 1e-10) -> np.ndarray:
    """exp(s*H) for Hermitian H, via eigendecomposition.

    Raises if H deviates from Hermiticity by more than `atol` (relative to
    its scale).  The result is Hermitian positive-definite.
    """
    h = np.asarray(h, dtype=complex)
    scale = max(1.0, frobenius_norm(h))
    if frobenius_norm(h - h.conj().T) > atol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(h)
    out = (v * np.exp(s * w)) @ v.conj().T
    return (out + out.conj().T) / 2
