"""Multivariate time-series workflow: ingestion, long-memory diagnostics,
per-subject precision-matrix edge tests, and group-level graph aggregation.

Edges are conditional-independence violations: entry (j, k) of the precision
matrix whose simultaneous bootstrap confidence interval excludes zero.  Group
graphs pool per-edge detection counts across subjects and keep the most
frequently detected fraction.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .bootstrap import DefaultBlocks, precision_blocks, quantile, resolve_block_length
from .errors import HighDimensionError, ZeroVarianceError
from .estimate import sample_covariance, sample_precision

ACF_LAG_LO = 21
ACF_LAG_HI = 100


@dataclass(frozen=True)
class SubjectSeries:
    id: str
    data: np.ndarray            # n x p, demeaned per column
    labels: tuple[str, ...]


@dataclass
class EdgeStat:
    count: int = 1
    score: float = 0.0
    lower: Optional[float] = None
    upper: Optional[float] = None


@dataclass
class EdgeSet:
    labels: tuple[str, ...]
    edges: dict = field(default_factory=dict)  # (label_a, label_b) -> EdgeStat

    def pairs(self) -> list[tuple[str, str]]:
        return sorted(self.edges)


@dataclass(frozen=True)
class AcfSignificance:
    count: int
    flag: bool


def _demean(data: np.ndarray) -> np.ndarray:
    return data - data.mean(axis=0, keepdims=True)


def ingest(path, subject_id: Optional[str] = None) -> SubjectSeries:
    """Read one subject's CSV (header row of labels, numeric rows), demeaned."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError(f"{path}: empty file")
    labels = tuple(cell.strip() for cell in rows[0])
    p = len(labels)
    data = np.empty((len(rows) - 1, p))
    if data.shape[0] == 0:
        raise ValueError(f"{path}: no data rows")
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != p:
            raise ValueError(f"{path}: row {i} has {len(row)} fields, expected {p}")
        for j, cell in enumerate(row):
            try:
                data[i - 2, j] = float(cell)
            except ValueError:
                raise ValueError(
                    f"{path}: row {i}, column {labels[j]!r}: "
                    f"non-numeric field {cell!r}") from None
    return SubjectSeries(subject_id or path.stem, _demean(data), labels)


def hurst_exponent(series) -> float:
    """Rescaled-range estimate of the Hurst exponent.

    For dyadic window sizes w = 8, 16, ... up to n/2, the range of the
    cumulative mean-adjusted deviations over each disjoint window is divided
    by the window standard deviation; log of the averaged ratio is regressed
    on log(w) and the slope, clamped to [0, 1], is returned.
    """
    x = np.asarray(series, dtype=float).ravel()
    n = x.size
    if n < 32:
        raise ValueError(f"series too short for R/S analysis (n = {n} < 32)")
    if np.ptp(x) == 0.0:
        raise ZeroVarianceError("constant series has no rescaled range")
    sizes = []
    w = 8
    while w <= n // 2:
        sizes.append(w)
        w *= 2
    log_w, log_rs = [], []
    for w in sizes:
        blocks = x[:(n // w) * w].reshape(n // w, w)
        centered = blocks - blocks.mean(axis=1, keepdims=True)
        spread = centered.std(axis=1)
        cumdev = np.cumsum(centered, axis=1)
        ranges = cumdev.max(axis=1) - cumdev.min(axis=1)
        keep = spread > 0
        if not keep.any():
            continue
        log_w.append(math.log(w))
        log_rs.append(math.log((ranges[keep] / spread[keep]).mean()))
    if len(log_w) < 2:
        raise ZeroVarianceError("not enough varying windows for a slope fit")
    design = np.column_stack([np.ones(len(log_w)), log_w])
    slope = np.linalg.lstsq(design, np.asarray(log_rs), rcond=None)[0][1]
    return float(min(max(slope, 0.0), 1.0))


def acf_significance(series, lag_lo: int = ACF_LAG_LO,
                     lag_hi: int = ACF_LAG_HI) -> AcfSignificance:
    """Count autocorrelations in [lag_lo, lag_hi] beyond the 1.96/sqrt(n) band."""
    x = np.asarray(series, dtype=float).ravel()
    n = x.size
    if not 1 <= lag_lo <= lag_hi < n:
        raise ValueError(f"lag range [{lag_lo}, {lag_hi}] invalid for n = {n}")
    centered = x - x.mean()
    denom = centered @ centered
    if denom == 0.0:
        raise ZeroVarianceError("constant series has no autocorrelation")
    threshold = 1.96 / math.sqrt(n)
    count = 0
    for h in range(lag_lo, lag_hi + 1):
        rho = (centered[:-h] @ centered[h:]) / denom
        if abs(rho) > threshold:
            count += 1
    return AcfSignificance(count, count >= 1)


def subject_graph(subject: SubjectSeries, alpha: float,
                  block_rule=DefaultBlocks()) -> EdgeSet:
    """Edges whose precision entry has |Omega_hat_jk| above the simultaneous
    half width n^{-1/2} q_hat(1 - alpha); the margin is kept as a score."""
    data = subject.data
    n, p = data.shape
    if p >= n:
        raise HighDimensionError(f"subject {subject.id}: p = {p} >= n = {n}")
    omega_hat = sample_precision(sample_covariance(data))
    l = resolve_block_length(block_rule, n, p)
    dist = precision_blocks(data, l, omega=omega_hat)
    q_hat = quantile(dist, 1.0 - alpha)
    edges = {}
    if math.isfinite(q_hat):
        half_width = q_hat / math.sqrt(n)
        for j in range(p):
            for k in range(j + 1, p):
                entry = omega_hat[j, k]
                if abs(entry) > half_width:
                    pair = tuple(sorted((subject.labels[j], subject.labels[k])))
                    edges[pair] = EdgeStat(count=1,
                                           score=abs(entry) - half_width,
                                           lower=entry - half_width,
                                           upper=entry + half_width)
    return EdgeSet(subject.labels, edges)


def aggregate_group(edge_sets: Sequence[EdgeSet], sparsity: float) -> EdgeSet:
    """Pool per-edge counts and keep the top ceil(sparsity * p(p-1)/2) edges.

    Ties break by summed score, then lexicographic label pair, so the output
    is deterministic.
    """
    if not edge_sets:
        raise ValueError("need at least one subject")
    if not 0.0 < sparsity <= 1.0:
        raise ValueError("sparsity must lie in (0, 1]")
    labels = edge_sets[0].labels
    for es in edge_sets[1:]:
        if es.labels != labels:
            raise ValueError("subjects carry inconsistent label sets")
    pooled: dict = {}
    for es in edge_sets:
        for pair, stat in es.edges.items():
            agg = pooled.setdefault(pair, EdgeStat(count=0, score=0.0))
            agg.count += stat.count
            agg.score += stat.score
    p = len(labels)
    cap = int(math.ceil(sparsity * (p * (p - 1) // 2) - 1e-9))
    ranked = sorted(pooled.items(), key=lambda kv: (-kv[1].count, -kv[1].score, kv[0]))
    return EdgeSet(labels, dict(ranked[:cap]))


def subject_diagnostics(subject: SubjectSeries,
                        lag_lo: int = ACF_LAG_LO,
                        lag_hi: int = ACF_LAG_HI) -> list[tuple[str, float, int]]:
    """(column label, Hurst exponent, significant-ACF count) per coordinate."""
    lag_hi = min(lag_hi, subject.data.shape[0] - 1)
    rows = []
    for j, label in enumerate(subject.labels):
        series = subject.data[:, j]
        rows.append((label, hurst_exponent(series),
                     acf_significance(series, lag_lo, lag_hi).count))
    return rows


def write_edges_csv(edge_set: EdgeSet, path) -> None:
    ranked = sorted(edge_set.edges.items(),
                    key=lambda kv: (-kv[1].count, -kv[1].score, kv[0]))
    with open(path, "w", newline="\n") as fh:
        fh.write("source,target,count,score\n")
        for (a, b), stat in ranked:
            fh.write(f"{a},{b},{stat.count},{stat.score:.10g}\n")


def write_diagnostics_csv(rows_by_subject: Iterable[tuple[str, list]], path) -> None:
    """rows_by_subject yields (subject_id, subject_diagnostics(...)) pairs."""
    with open(path, "w", newline="\n") as fh:
        fh.write("subject,column,hurst,acf_count\n")
        for subject_id, rows in rows_by_subject:
            for label, hurst, acf_count in rows:
                fh.write(f"{subject_id},{label},{hurst:.10g},{acf_count}\n")
