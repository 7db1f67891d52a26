"""Sampling the Gaussian reference distributions of max-deviation statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_CHUNK_ELEMENTS = 2**24


@dataclass(frozen=True)
class GaussianReference:
    """PSD covariance with a factor such that factor @ factor.T = cov."""

    cov: np.ndarray
    factor: np.ndarray


def build_reference(cov: np.ndarray, sym_tol: float = 1e-8,
                    eig_tol: float = 1e-8) -> GaussianReference:
    """Factor a PSD covariance through its symmetric eigendecomposition.

    Eigenvalues in [-eig_tol * lambda_max, 0) are clipped to zero (duplicated
    symmetric coordinates make exact rank deficiency routine); anything more
    negative means the input is genuinely indefinite.  Cholesky is avoided on
    purpose since it fails on semidefinite input.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("covariance must be a square matrix")
    scale = max(1.0, np.abs(cov).max())
    if np.abs(cov - cov.T).max() > sym_tol * scale:
        raise ValueError("covariance is not symmetric")
    eigvals, eigvecs = np.linalg.eigh((cov + cov.T) / 2.0)
    lam_max = max(float(eigvals[-1]), 0.0)
    if eigvals[0] < -eig_tol * lam_max:
        raise ValueError(
            f"covariance is indefinite (eigenvalue {eigvals[0]:.3e} "
            f"vs maximum {lam_max:.3e})")
    factor = eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))
    return GaussianReference(cov, factor)


def sample_max_abs(ref: GaussianReference, reps: int, seed: int) -> np.ndarray:
    """reps independent draws of |factor @ g|_inf, g standard normal."""
    if reps < 1:
        raise ValueError("reps must be positive")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    dim = ref.factor.shape[1]
    out = np.empty(reps)
    chunk = max(1, _CHUNK_ELEMENTS // max(dim, 1))
    done = 0
    while done < reps:
        take = min(chunk, reps - done)
        gauss = rng.standard_normal((dim, take))
        out[done:done + take] = np.abs(ref.factor @ gauss).max(axis=0)
        done += take
    return out
