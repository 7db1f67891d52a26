"""Block-bootstrap distributions, quantiles and simultaneous confidence regions.

Sliding length-l windows of the centered Gram sequence X_j X_j^T - Sigma_hat
produce one max-deviation statistic per window; their empirical distribution
approximates the law of the scaled estimation error.  Windows are maintained
incrementally (add one outer product, drop one) with a full recomputation
every `REFRESH_INTERVAL` windows so floating-point drift stays bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import MemoryBudgetError, OutOfRegimeError
from .estimate import sample_covariance, sample_precision
from .model import theoretical_rates

KIND_COVARIANCE = "covariance"
KIND_PRECISION = "precision"

REFRESH_INTERVAL = 1024
_OUTER_ELEMENT_CAP = 2**31


@dataclass(frozen=True)
class BootstrapDistribution:
    """Sorted block statistics l^{-1/2} |B_i|_inf for i = l..n."""

    values: np.ndarray
    l: int
    kind: str

    def __post_init__(self):
        object.__setattr__(self, "values", np.sort(np.asarray(self.values, float)))

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class ConfidenceRegion:
    """Uniform entrywise band: center entries +- half_width."""

    center: np.ndarray
    half_width: float
    alpha: float

    def contains(self, matrix: np.ndarray) -> bool:
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != self.center.shape:
            raise ValueError("shape mismatch with the region center")
        return bool(np.abs(matrix - self.center).max() <= self.half_width)


# Block-length rules ---------------------------------------------------------

@dataclass(frozen=True)
class DefaultBlocks:
    """Nonadaptive l = floor(n^(2/3))."""


@dataclass(frozen=True)
class FixedBlocks:
    l: int


@dataclass(frozen=True)
class TheoreticalBlocks:
    epsilon: float
    scale: float = 1.0
    beta: Optional[float] = None  # may also come from the caller


def default_block_length(n: int) -> int:
    """floor(n^(2/3)), computed in exact integer arithmetic."""
    if n < 8:
        raise ValueError("block-length rule requires n >= 8")
    m = max(1, int(round(n ** (2.0 / 3.0))))
    while m * m * m > n * n:
        m -= 1
    while (m + 1) ** 3 <= n * n:
        m += 1
    return m


def theoretical_block_length(n: int, p: int, beta: float, epsilon: float,
                             scale: float = 1.0) -> int:
    """round(scale * n^phi * log^psi(max(p, 2))), clamped to [2, n].

    The optimal order fixes phi and psi but not the constant; `scale` is the
    caller's choice with default 1.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    rates = theoretical_rates(beta, n, p, epsilon)
    raw = scale * n ** rates["phi"] * math.log(max(p, 2)) ** rates["psi_exp"]
    return int(min(max(round(raw), 2), n))


def resolve_block_length(rule, n: int, p: int = 1,
                         beta: Optional[float] = None) -> int:
    if isinstance(rule, DefaultBlocks):
        return default_block_length(n)
    if isinstance(rule, FixedBlocks):
        if not 1 <= rule.l <= n:
            raise ValueError(f"fixed block length {rule.l} outside [1, {n}]")
        return rule.l
    if isinstance(rule, TheoreticalBlocks):
        b = rule.beta if rule.beta is not None else beta
        if b is None:
            raise OutOfRegimeError("theoretical block rule needs a decay exponent")
        return theoretical_block_length(n, p, b, rule.epsilon, rule.scale)
    raise TypeError(f"unknown block rule {rule!r}")


# Window statistics -----------------------------------------------------------

def _window_maxima(X: np.ndarray, l: int,
                   transform: Optional[np.ndarray] = None) -> np.ndarray:
    """l^{-1/2} |T (M_i - l Sigma_hat) T|_inf over all windows, in window order."""
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    if not 1 <= l <= n:
        raise ValueError(f"block length {l} outside [1, {n}]")
    if n * p * p > _OUTER_ELEMENT_CAP:
        raise MemoryBudgetError("per-row outer products exceed the element cap")
    sigma_hat = X.T @ X / n
    target = l * sigma_hat
    outers = X[:, :, None] * X[:, None, :]
    count = n - l + 1
    vals = np.empty(count)
    for start in range(0, count, REFRESH_INTERVAL):
        stop = min(start + REFRESH_INTERVAL, count)
        windows = np.empty((stop - start, p, p))
        windows[0] = outers[start:start + l].sum(axis=0)
        if stop - start > 1:
            increments = outers[start + l:stop + l - 1] - outers[start:stop - 1]
            windows[1:] = windows[0] + np.cumsum(increments, axis=0)
        deviations = windows - target
        if transform is not None:
            deviations = np.einsum("ij,bjk,kl->bil", transform, deviations, transform)
        vals[start:stop] = np.abs(deviations).max(axis=(1, 2))
    return vals / math.sqrt(l)


def covariance_blocks(X: np.ndarray, l: int) -> BootstrapDistribution:
    """Empirical distribution of l^{-1/2} |sum_window (X_j X_j^T - Sigma_hat)|_inf."""
    return BootstrapDistribution(_window_maxima(X, l), l, KIND_COVARIANCE)


def precision_blocks(X: np.ndarray, l: int,
                     omega: Optional[np.ndarray] = None) -> BootstrapDistribution:
    """Covariance windows conjugated by Omega_hat on both sides.

    `omega` short-circuits the internal precision estimate when the caller
    already holds it.
    """
    if omega is None:
        omega = sample_precision(sample_covariance(X))
    return BootstrapDistribution(_window_maxima(X, l, transform=omega),
                                 l, KIND_PRECISION)


def quantile(dist: BootstrapDistribution, level: float) -> float:
    """inf{u : F_hat(u) >= level}: the ceil(level * N)-th order statistic."""
    if not 0.0 < level < 1.0:
        raise ValueError("quantile level must lie in (0, 1)")
    count = len(dist)
    if count == 0:
        raise ValueError("empty bootstrap distribution")
    rank = math.ceil(level * count)
    # Float fuzz: keep the smallest rank whose ECDF already reaches the level.
    if rank > 1 and (rank - 1) / count >= level:
        rank -= 1
    return float(dist.values[min(rank, count) - 1])


def confidence_region(center: np.ndarray, dist: BootstrapDistribution, n: int,
                      alpha: float) -> ConfidenceRegion:
    """Simultaneous entrywise region with half width n^{-1/2} q_hat(1 - alpha)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    half_width = quantile(dist, 1.0 - alpha) / math.sqrt(n)
    return ConfidenceRegion(np.asarray(center, dtype=float), half_width, alpha)
