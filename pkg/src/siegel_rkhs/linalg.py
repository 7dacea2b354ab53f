"""Cyclic Jacobi eigenvalue solver for small Hermitian matrices.

Works on a stack of matrices of shape (..., N, N) at once, so a scan over
many point clouds costs one sweep loop rather than one per cloud.
"""
from __future__ import annotations

import numpy as np


def hermitian_eigvalsh(A, tol: float = 1e-15, max_sweeps: int = 50) -> np.ndarray:
    """Ascending eigenvalues of Hermitian matrices, shape (..., N)."""
    A = np.array(A, dtype=complex)
    squeeze = A.ndim == 2
    if squeeze:
        A = A[None]
    batch_shape = A.shape[:-2]
    N = A.shape[-1]
    A = A.reshape((-1, N, N))
    A = 0.5 * (A + np.conj(np.swapaxes(A, -1, -2)))
    scale = np.maximum(np.abs(A).reshape(A.shape[0], -1).max(axis=1), np.finfo(float).tiny)
    rows = np.arange(A.shape[0])
    offmask = 1.0 - np.eye(N)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(A * offmask) ** 2, axis=(1, 2)))
        if np.all(off <= tol * scale * N):
            break
        for p in range(N - 1):
            for q in range(p + 1, N):
                apq = A[:, p, q]
                mag = np.abs(apq)
                active = mag > tol * scale * 1e-3
                if not np.any(active):
                    continue
                app = A[:, p, p].real
                aqq = A[:, q, q].real
                safe = np.where(active, mag, 1.0)
                tau = (aqq - app) / (2.0 * safe)
                t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                phase = np.where(active, apq / safe, 1.0)
                # column transform W: col p <- c e_p - s conj(phase) e_q, col q <- s e_p + c conj(phase) e_q
                cp = A[:, :, p].copy()
                cq = A[:, :, q].copy()
                A[:, :, p] = c[:, None] * cp - (s * np.conj(phase))[:, None] * cq
                A[:, :, q] = s[:, None] * cp + (c * np.conj(phase))[:, None] * cq
                rp = A[:, p, :].copy()
                rq = A[:, q, :].copy()
                A[:, p, :] = c[:, None] * rp - (s * phase)[:, None] * rq
                A[:, q, :] = s[:, None] * rp + (c * phase)[:, None] * rq
                A[rows, p, q] = 0.0
                A[rows, q, p] = 0.0
    w = np.sort(np.diagonal(A, axis1=1, axis2=2).real, axis=1)
    w = w.reshape(batch_shape + (N,))
    return w[0] if squeeze else w


def min_eigenvalue(A) -> float:
    return float(hermitian_eigvalsh(A)[..., 0])
