"""Sample covariance/precision estimators and max-deviation statistics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import HighDimensionError, NearSingularError


@dataclass
class EstimateResult:
    sigma_hat: np.ndarray
    n: int
    omega_hat: Optional[np.ndarray] = None


def sample_covariance(X: np.ndarray, center: bool = False) -> EstimateResult:
    """Sigma_hat = n^-1 sum_i X_i X_i^T.

    The process model has mean zero, so no centering is applied unless
    `center=True` (real data should be demeaned upstream or here).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError("X must be a nonempty n x p matrix")
    if center:
        X = X - X.mean(axis=0, keepdims=True)
    n = X.shape[0]
    return EstimateResult(X.T @ X / n, n)


def sample_precision(result: EstimateResult, rel_eig_floor: float = 1e-12,
                     residual_tol: float = 1e-8) -> np.ndarray:
    """Omega_hat = Sigma_hat^{-1} via symmetric eigendecomposition.

    Requires p < n and a minimum eigenvalue above `rel_eig_floor` times the
    largest diagonal entry; the residual |Omega_hat Sigma_hat - I|_inf must
    come out below `residual_tol`.
    """
    sigma = result.sigma_hat
    p = sigma.shape[0]
    if p >= result.n:
        raise HighDimensionError(
            f"p = {p} >= n = {result.n}; sample covariance is singular")
    eigvals, eigvecs = np.linalg.eigh(sigma)
    floor = rel_eig_floor * sigma.diagonal().max()
    if eigvals[0] <= floor:
        cond = float(eigvals[-1] / eigvals[0]) if eigvals[0] > 0 else np.inf
        raise NearSingularError(
            f"smallest eigenvalue {eigvals[0]:.3e} at or below floor {floor:.3e}",
            condition_estimate=cond)
    omega = (eigvecs / eigvals) @ eigvecs.T
    resid = np.abs(omega @ sigma - np.eye(p)).max()
    if resid > residual_tol:
        raise NearSingularError(
            f"inversion residual {resid:.3e} exceeds {residual_tol:.1e}",
            condition_estimate=float(eigvals[-1] / eigvals[0]))
    return omega


def max_deviation(estimate: np.ndarray, truth: np.ndarray, n: int) -> float:
    """sqrt(n) * max_{jk} |estimate_{jk} - truth_{jk}|."""
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise ValueError(f"shape mismatch: {estimate.shape} vs {truth.shape}")
    return float(np.sqrt(n) * np.abs(estimate - truth).max())
