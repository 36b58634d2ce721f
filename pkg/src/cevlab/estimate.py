"""Estimators on simulated or external paths.

All functions accept a :class:`~cevlab.models.PathBlock`.  Blocks produced
by ``simulate_top`` hold only the largest rows of a bigger simulation;
thresholds are then computed as order statistics of the full sample size
``n_total``, which gives the same answer as on the complete block.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InsufficientDataError
from .models import PathBlock


@dataclass
class EstimateReport:
    name: str
    value: float
    se: float
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.se >= 0:
            raise ValueError("standard error must be non-negative")


def default_k(n: int) -> int:
    """``floor(2 n**0.6)`` capped at ``n / 10``."""
    return max(1, min(int(2 * n**0.6), n // 10))


def hill(sample, k: int | None = None) -> float:
    """Hill estimate of the tail index from the ``k + 1`` largest values."""
    x = np.asarray(sample, dtype=float).ravel()
    n = len(x)
    if k is None:
        k = default_k(n)
    if k < 1 or k >= n:
        raise DomainError(f"need 1 <= k < n (k={k}, n={n})")
    top = np.partition(x, n - k - 1)[n - k - 1 :]
    ref = top[0]
    if not ref > 0:
        raise DomainError("order statistic X_(k+1) must be positive")
    excess = np.log(top[1:] / ref)
    total = excess.sum()
    if total <= 0:
        raise DomainError("all top order statistics tie with X_(k+1)")
    return float(k / total)


def hill_report(sample, k: int | None = None, label: str = "hill") -> EstimateReport:
    x = np.asarray(sample, dtype=float).ravel()
    k = default_k(len(x)) if k is None else k
    a = hill(x, k)
    return EstimateReport(label, a, a / math.sqrt(k), {"k": k, "n": len(x)})


# ------------------------------------------------------ conditioning


@dataclass
class ConditionalSample:
    """Rows ``(X_0/x, X_1/b_1(x), ..., X_h/b_h(x))`` over the exceedances ``X_0 > x``."""

    threshold: float
    level: float | None
    rows: np.ndarray
    scales: np.ndarray
    n_total: int

    @property
    def count(self) -> int:
        return len(self.rows)

    @property
    def h(self) -> int:
        return self.rows.shape[1] - 1

    def column(self, t: int) -> np.ndarray:
        return self.rows[:, t]


def _scales(b, h: int, x: float) -> np.ndarray:
    out = np.ones(h + 1)
    out[0] = x
    if b is None:
        return out
    if callable(b):
        out[1:] = [float(b(x)) for _ in range(h)]
        return out
    items = list(b)
    if len(items) != h:
        raise ValueError(f"need {h} scaling functions, got {len(items)}")
    for j, item in enumerate(items, start=1):
        out[j] = float(item(x)) if callable(item) else x ** float(item)
    return out


def exceedance_count(n: int, q: float) -> int:
    """Number of order statistics strictly above the empirical ``q``-quantile."""
    return int(math.floor(n * (1.0 - q) + 1e-9))


def quantile_threshold(block: PathBlock, q: float) -> float:
    """Empirical ``q``-quantile of ``X_0``: the order statistic with ``floor(n(1-q))`` points above."""
    if not 0 < q < 1:
        raise DomainError("quantile level must lie in (0,1)")
    n = block.n_total
    k = exceedance_count(n, q)
    col = block.rows[:, 0]
    if block.n < n:
        if block.ordered_by != "x0":
            raise ValueError("partial block must be ordered by x0")
        if k >= block.n:
            raise InsufficientDataError(f"block keeps {block.n} rows, level {q} needs {k + 1}")
        return float(col[k])
    return float(np.partition(col, n - k - 1)[n - k - 1])


def conditional_sample(block: PathBlock, q: float | None = None, b=None, threshold: float | None = None) -> ConditionalSample:
    """Exceedances of ``X_0`` over its empirical ``q``-quantile (or a given threshold).

    ``b`` is ``None`` (no rescaling), one callable used for every lag, or a
    per-lag sequence of callables or exponents ``kappa_j`` (``b_j = x**kappa_j``).
    """
    if block.n == 0:
        raise InsufficientDataError("empty block")
    if threshold is None:
        if q is None:
            raise ValueError("need a quantile level or a threshold")
        x = quantile_threshold(block, q)
    else:
        x = float(threshold)
        if block.n < block.n_total and x < block.rows[-1, 0]:
            raise InsufficientDataError("threshold lies below the rows kept in the block")
    mask = block.rows[:, 0] > x
    if not mask.any():
        raise InsufficientDataError(f"no exceedances above {x}")
    scales = _scales(b, block.h, x)
    rows = block.rows[mask] / scales
    return ConditionalSample(x, q, rows, scales, block.n_total)


def empirical_cdf(cond: ConditionalSample, coord: int, y):
    """Right-continuous empirical CDF of one coordinate of the conditional sample."""
    if not 0 <= coord <= cond.h:
        raise ValueError(f"coordinate {coord} out of range")
    col = np.sort(cond.rows[:, coord])
    out = np.searchsorted(col, np.asarray(y, dtype=float), side="right") / len(col)
    return float(out) if np.ndim(out) == 0 else out


# ----------------------------------------------------------- kappa


@dataclass
class KappaEstimate:
    estimate: float
    se: float
    levels: list
    thresholds: list
    medians: list
    counts: list

    def as_report(self, h: int) -> EstimateReport:
        return EstimateReport(f"kappa_hat_{h}", self.estimate, self.se, {"levels": self.levels, "counts": self.counts})


def kappa_hat(
    block: PathBlock,
    h: int,
    quantile_grid: Sequence[float],
    min_exceedances: int = 200,
    absolute: bool = False,
) -> KappaEstimate:
    """Slope of log conditional medians of ``X_h`` against log thresholds.

    With ``absolute=True`` the medians are taken of ``|X_h|``, which is the
    sensible choice when the conditional law of ``X_h`` is symmetric.
    """
    levels = sorted(float(q) for q in quantile_grid)
    if len(levels) < 3:
        raise ValueError("need at least three quantile levels")
    xs, meds, counts = [], [], []
    for q in levels:
        cond = conditional_sample(block, q)
        if cond.count < min_exceedances:
            raise InsufficientDataError(f"level {q}: {cond.count} exceedances < {min_exceedances}")
        col = cond.rows[:, h]
        med = float(np.median(np.abs(col) if absolute else col))
        if not med > 0:
            raise DomainError(f"level {q}: conditional median {med} is not positive")
        xs.append(cond.threshold)
        meds.append(med)
        counts.append(cond.count)
    lx, lm = np.log(xs), np.log(meds)
    slope, intercept = np.polyfit(lx, lm, 1)
    resid = lm - (slope * lx + intercept)
    sxx = float(np.sum((lx - lx.mean()) ** 2))
    dof = len(lx) - 2
    se = math.sqrt(float(np.sum(resid**2)) / dof / sxx) if dof > 0 and sxx > 0 else 0.0
    return KappaEstimate(float(slope), se, levels, [float(v) for v in xs], meds, counts)


# ------------------------------------------------------------- CTE


def m_hat(cond: ConditionalSample, h: int) -> float:
    """Mean of the positive part of the rescaled lag-``h`` coordinate."""
    if cond.count == 0:
        raise InsufficientDataError("empty conditional sample")
    return float(np.mean(np.maximum(cond.rows[:, h], 0.0)))


def cte_plus_hat(block: PathBlock, h: int, x: float, min_exceedances: int = 200) -> float:
    """Empirical ``E[(X_h)_+ | X_0 > x]``."""
    cond = conditional_sample(block, threshold=x)
    if cond.count < min_exceedances:
        raise InsufficientDataError(f"{cond.count} exceedances above {x} < {min_exceedances}")
    return float(np.mean(np.maximum(block.rows[block.rows[:, 0] > x, h], 0.0)))


def cte_semiparametric(x: float, kappa_hat: float, m_hat: float) -> float:
    return float(x) ** kappa_hat * m_hat


def scaling_from(kappas: Sequence[float]) -> list[Callable[[float], float]]:
    return [lambda x, k=k: x**k for k in kappas]
