"""Pairwise ordinal pattern dependence between two series.

Both series are cut into simultaneous sliding windows, each window is
encoded as a tie-aware pattern, and co-movement is measured by

* the probability of coincident patterns, benchmarked against the
  comparison value it would have under independence, and
* the total score: the mean metric-weighted similarity of the two
  patterns, which also credits near-misses.

Kernel-weighted long-run variances give asymptotic confidence intervals
for the probability-type estimators; a moving-block bootstrap covers the
comparison value and the standardized coefficient. The classical
tie-handling baselines (skip / randomize / first-appearance) run the same
pipeline through permutation patterns and the plain L1 metric.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.stats import norm

from . import _kernels
from .exceptions import NumericalWarning
from .metric import WeightScheme, scheme_for_length
from .patterns import TiePolicy, pattern_keys, randomize_values


@dataclass(frozen=True)
class ClassSeries:
    """An integer-valued series (e.g. flood classes of one gauge)."""

    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values))
        if self.values.ndim != 1:
            raise ValueError("series values must be one-dimensional")

    def __len__(self) -> int:
        return self.values.shape[0]


SeriesLike = Union[ClassSeries, Sequence[float], np.ndarray]


def series_values(x: SeriesLike) -> np.ndarray:
    """Unwrap a ClassSeries or array-like into a 1-d array."""
    if isinstance(x, ClassSeries):
        return x.values
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise ValueError("series must be one-dimensional")
    return arr


def series_label(x: SeriesLike, default: str) -> str:
    return x.label if isinstance(x, ClassSeries) and x.label else default


def _window_codes(values: np.ndarray, n: int, stride: int) -> np.ndarray:
    if n < 1:
        raise ValueError("pattern length must be >= 1")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if values.shape[0] < n:
        raise ValueError(f"series of length {values.shape[0]} is shorter than pattern length {n}")
    return _kernels.encode_windows(values, n, stride)


def _paired_codes(x: SeriesLike, y: SeriesLike, n: int, stride: int) -> tuple[np.ndarray, np.ndarray]:
    xv = series_values(x)
    yv = series_values(y)
    if xv.shape[0] != yv.shape[0]:
        raise ValueError(f"series length mismatch: {xv.shape[0]} vs {yv.shape[0]}")
    return _window_codes(xv, n, stride), _window_codes(yv, n, stride)


def coincidence_probability(
    x: SeriesLike, y: SeriesLike, n: int, stride: int = 1
) -> tuple[float, np.ndarray]:
    """Fraction of simultaneous windows with identical patterns.

    Returns the estimate together with the per-window 0/1 indicator
    sequence, which feeds the long-run variance estimator.
    """
    cx, cy = _paired_codes(x, y, n, stride)
    indicators = np.all(cx == cy, axis=1).astype(np.float64)
    return float(indicators.sum() / indicators.shape[0]), indicators


def _key_counts(codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keys = pattern_keys(codes)
    return np.unique(keys, return_counts=True)


def comparison_value(x: SeriesLike, y: SeriesLike, n: int, stride: int = 1) -> float:
    """Coincidence probability the pair would have under independence.

    Sum over patterns of the product of the two empirical pattern
    frequencies, computed on the same window grid.
    """
    cx, cy = _paired_codes(x, y, n, stride)
    num_windows = cx.shape[0]
    kx, countx = _key_counts(cx)
    ky, county = _key_counts(cy)
    _, ix, iy = np.intersect1d(kx, ky, assume_unique=True, return_indices=True)
    numerator = int(np.sum(countx[ix] * county[iy]))
    return numerator / (num_windows * num_windows)


def anti_estimates(x: SeriesLike, y: SeriesLike, n: int, stride: int = 1) -> tuple[float, float]:
    """Coincidence probability and comparison value of x against -y.

    These carry the anti-monotone side of the standardized coefficient;
    negation is applied to the raw values before encoding.
    """
    neg_y = -series_values(y)
    r_hat, _ = coincidence_probability(x, neg_y, n, stride)
    s_hat = comparison_value(x, neg_y, n, stride)
    return r_hat, s_hat


def standardized_coefficient(
    p_hat: float, q_hat: float, r_hat: float, s_hat: float
) -> float:
    """Positive-part contrast of the monotone and anti-monotone sides.

    ((p - q)/(1 - q))^+ - ((r - s)/(1 - s))^+ in [-1, 1]. A degenerate
    marginal (comparison value 1, so every window shows one single
    pattern) makes a term 0/0; that term is defined as 0 with a warning
    since excess dependence is indistinguishable there.
    """
    def term(prob: float, comp: float, side: str) -> float:
        if comp >= 1.0:
            warnings.warn(
                f"degenerate marginal: {side} comparison value is 1, term set to 0",
                NumericalWarning,
                stacklevel=3,
            )
            return 0.0
        return max((prob - comp) / (1.0 - comp), 0.0)

    return term(p_hat, q_hat, "monotone") - term(r_hat, s_hat, "anti-monotone")


def total_score(
    x: SeriesLike,
    y: SeriesLike,
    n: int,
    stride: int = 1,
    scheme: Optional[WeightScheme] = None,
) -> tuple[float, np.ndarray]:
    """Mean metric-weighted pattern similarity over simultaneous windows.

    Returns the mean score and the per-window score sequence (input to
    the long-run variance estimator). Defaults to the step scheme for
    the given length.
    """
    scheme = scheme or scheme_for_length(n)
    cx, cy = _paired_codes(x, y, n, stride)
    distances = _kernels.df_rows(cx, cy)
    scores = scheme.weights_for(distances)
    return float(scores.sum() / scores.shape[0]), scores


def score_comparison_value(
    x: SeriesLike,
    y: SeriesLike,
    n: int,
    stride: int = 1,
    scheme: Optional[WeightScheme] = None,
) -> float:
    """Expected total score under independence of the two series.

    Sum over pattern pairs (t, u) of score(t, u) weighted by the product
    of the empirical frequencies of t in x and u in y. With the exact
    scheme this collapses to the comparison value.
    """
    scheme = scheme or scheme_for_length(n)
    cx, cy = _paired_codes(x, y, n, stride)
    num_windows = cx.shape[0]
    kx = pattern_keys(cx)
    ky = pattern_keys(cy)
    _, first_x, countx = np.unique(kx, return_index=True, return_counts=True)
    _, first_y, county = np.unique(ky, return_index=True, return_counts=True)
    cross = _kernels.df_cross(cx[first_x], cy[first_y])
    weights = scheme.weights_for(cross)
    mass = countx[:, None] * county[None, :]
    return float((weights * mass).sum() / (num_windows * num_windows))


# ---------------------------------------------------------------------------
# estimator bundles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DependenceEstimates:
    """Point estimates of the dependence measures for one series pair."""

    coincidence: float        # P(same pattern at same time)
    comparison: float         # same under the independence hypothesis
    anti_coincidence: float   # coincidence of x with -y
    anti_comparison: float    # comparison of x with -y
    coefficient: float        # standardized coefficient in [-1, 1]
    total_score: float        # mean weighted pattern similarity
    score_comparison: float   # total score under independence
    n: int
    stride: int
    num_windows: int


def dependence_estimates(
    x: SeriesLike,
    y: SeriesLike,
    n: int,
    stride: int = 1,
    scheme: Optional[WeightScheme] = None,
) -> DependenceEstimates:
    """All point estimates for one pair through the tie-aware pipeline."""
    scheme = scheme or scheme_for_length(n)
    p_hat, indicators = coincidence_probability(x, y, n, stride)
    q_hat = comparison_value(x, y, n, stride)
    r_hat, s_hat = anti_estimates(x, y, n, stride)
    coeff = standardized_coefficient(p_hat, q_hat, r_hat, s_hat)
    s_total, _ = total_score(x, y, n, stride, scheme)
    s_comp = score_comparison_value(x, y, n, stride, scheme)
    return DependenceEstimates(
        coincidence=p_hat,
        comparison=q_hat,
        anti_coincidence=r_hat,
        anti_comparison=s_hat,
        coefficient=coeff,
        total_score=s_total,
        score_comparison=s_comp,
        n=n,
        stride=stride,
        num_windows=len(indicators),
    )


# ---------------------------------------------------------------------------
# classical tie-policy baselines
# ---------------------------------------------------------------------------

def _window_matrix(values: np.ndarray, n: int, stride: int) -> np.ndarray:
    num = _kernels.window_count(values.shape[0], n, stride)
    starts = np.arange(num) * stride
    return values[starts[:, None] + np.arange(n)[None, :]]

def _descending_perms(windows: np.ndarray) -> np.ndarray:
    # positions sorted by value descending, equal values by position
    # descending (the first-appearance rule; vacuous without ties)
    n = windows.shape[1]
    rev = windows[:, ::-1]
    order_rev = np.argsort(-rev, axis=1, kind="stable")
    return n - order_rev  # == (n-1-order_rev) + 1, one-based positions


def classical_dependence(
    x: SeriesLike,
    y: SeriesLike,
    n: int,
    stride: int = 1,
    policy: TiePolicy = TiePolicy.first_appearance(),
    scheme: Optional[WeightScheme] = None,
) -> DependenceEstimates:
    """The dependence pipeline through classical permutation patterns.

    Windows are encoded as descending-order permutations under the given
    tie policy and compared with the plain L1 metric, whose values on
    permutations are always even; the weight scheme must be one of the
    even-distance classical schemes (n = 4 or n = 6). Under "skip",
    windows containing a tie in either series are dropped from both.
    """
    scheme = scheme or scheme_for_length(n, classical=True)
    required = {"classical-short": 4, "classical-long": 6}.get(scheme.name)
    if required is None:
        raise ValueError(f"classical pipeline needs a classical weight scheme, got {scheme.name!r}")
    if n != required:
        raise ValueError(f"scheme {scheme.name!r} requires pattern length n={required}, got n={n}")

    xv = series_values(x).astype(np.float64)
    yv = series_values(y).astype(np.float64)
    if xv.shape[0] != yv.shape[0]:
        raise ValueError(f"series length mismatch: {xv.shape[0]} vs {yv.shape[0]}")
    if xv.shape[0] < n:
        raise ValueError(f"series of length {xv.shape[0]} is shorter than pattern length {n}")

    if policy.kind == "randomize":
        seed_x, seed_y = np.random.SeedSequence(policy.seed).spawn(2)
        xv = randomize_values(xv, seed_x)
        yv = randomize_values(yv, seed_y)

    win_x = _window_matrix(xv, n, stride)
    win_y = _window_matrix(yv, n, stride)

    if policy.kind == "skip":
        def tie_free(win: np.ndarray) -> np.ndarray:
            srt = np.sort(win, axis=1)
            return np.all(srt[:, 1:] != srt[:, :-1], axis=1)

        keep = tie_free(win_x) & tie_free(win_y)
        if not keep.any():
            raise ValueError("skip policy removed every window (ties everywhere)")
        win_x = win_x[keep]
        win_y = win_y[keep]

    perms_x = _descending_perms(win_x)
    perms_y = _descending_perms(win_y)
    perms_y_neg = _descending_perms(-win_y)

    num = perms_x.shape[0]

    def perm_p(a: np.ndarray, b: np.ndarray) -> float:
        return float(np.all(a == b, axis=1).sum() / num)

    def perm_q(a: np.ndarray, b: np.ndarray) -> float:
        ka, ca = np.unique(pattern_keys(a), return_counts=True)
        kb, cb = np.unique(pattern_keys(b), return_counts=True)
        _, ia, ib = np.intersect1d(ka, kb, assume_unique=True, return_indices=True)
        return int(np.sum(ca[ia] * cb[ib])) / (num * num)

    p_hat = perm_p(perms_x, perms_y)
    q_hat = perm_q(perms_x, perms_y)
    r_hat = perm_p(perms_x, perms_y_neg)
    s_hat = perm_q(perms_x, perms_y_neg)

    distances = _kernels.l1_rows(perms_x, perms_y)
    scores = scheme.weights_for(distances)
    s_total = float(scores.sum() / num)

    keys_x = pattern_keys(perms_x)
    keys_y = pattern_keys(perms_y)
    _, fx, cx = np.unique(keys_x, return_index=True, return_counts=True)
    _, fy, cy = np.unique(keys_y, return_index=True, return_counts=True)
    cross = _kernels.l1_cross(perms_x[fx], perms_y[fy])
    s_comp = float((scheme.weights_for(cross) * (cx[:, None] * cy[None, :])).sum() / (num * num))

    coeff = standardized_coefficient(p_hat, q_hat, r_hat, s_hat)
    return DependenceEstimates(
        coincidence=p_hat,
        comparison=q_hat,
        anti_coincidence=r_hat,
        anti_comparison=s_hat,
        coefficient=coeff,
        total_score=s_total,
        score_comparison=s_comp,
        n=n,
        stride=stride,
        num_windows=num,
    )


# ---------------------------------------------------------------------------
# long-run variance and confidence intervals
# ---------------------------------------------------------------------------

KERNELS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "bartlett": lambda u: np.maximum(0.0, 1.0 - np.abs(u)),
    "parzen": lambda u: np.where(
        np.abs(u) <= 0.5,
        1.0 - 6.0 * u**2 + 6.0 * np.abs(u) ** 3,
        np.where(np.abs(u) <= 1.0, 2.0 * (1.0 - np.abs(u)) ** 3, 0.0),
    ),
    "truncated": lambda u: (np.abs(u) <= 1.0).astype(np.float64),
}


@dataclass(frozen=True)
class VarianceEstimate:
    """Long-run variance estimate, optionally with a confidence interval."""

    sigma2: float
    kernel: str
    bandwidth: float
    ci_low: Optional[float] = None
    ci_high: Optional[float] = None
    level: Optional[float] = None


def default_bandwidth(count: int) -> int:
    """Default kernel bandwidth: ceil(count ** (1/3))."""
    return int(math.ceil(count ** (1.0 / 3.0)))


def long_run_variance(
    sequence: np.ndarray,
    kernel: str = "bartlett",
    bandwidth: Optional[float] = None,
) -> VarianceEstimate:
    """Kernel-weighted autocovariance sum of a stationary sequence.

    Estimates the variance of the normalized partial sums, i.e. the
    centered double sum (1/N) sum_ij k((i-j)/b) d_i d_j computed via
    autocovariances. Finite-sample kernel sums can dip below zero; those
    are truncated to 0 with a warning.
    """
    seq = np.asarray(sequence, dtype=np.float64)
    if seq.ndim != 1 or seq.shape[0] < 2:
        raise ValueError("need a 1-d sequence of length >= 2")
    if kernel not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}; known: {sorted(KERNELS)}")
    count = seq.shape[0]
    if bandwidth is None:
        bandwidth = default_bandwidth(count)
    if bandwidth < 1:
        raise ValueError("bandwidth must be >= 1")

    if np.all(seq == seq[0]):
        return VarianceEstimate(sigma2=0.0, kernel=kernel, bandwidth=float(bandwidth))
    centered = seq - seq.mean()
    max_lag = min(count - 1, int(math.floor(bandwidth)))
    lags = np.arange(max_lag + 1)
    kernel_weights = KERNELS[kernel](lags / bandwidth)
    acov = np.array(
        [centered[: count - lag] @ centered[lag:] / count for lag in lags]
    )
    sigma2 = float(acov[0] * kernel_weights[0] + 2.0 * (kernel_weights[1:] * acov[1:]).sum())
    if sigma2 < 0.0:
        warnings.warn(
            f"long-run variance estimate {sigma2:.3e} is negative; truncated to 0",
            NumericalWarning,
            stacklevel=2,
        )
        sigma2 = 0.0
    return VarianceEstimate(sigma2=sigma2, kernel=kernel, bandwidth=float(bandwidth))


def confidence_interval(
    point: float,
    sigma2: float,
    count: int,
    level: float = 0.95,
    clip_unit: bool = True,
) -> tuple[float, float]:
    """Normal-approximation interval point +- z * sigma / sqrt(count).

    clip_unit restricts the interval to [0, 1] for probability-valued
    points.
    """
    if not 0.0 < level < 1.0:
        raise ValueError("confidence level must lie strictly between 0 and 1")
    if sigma2 < 0.0:
        raise ValueError("variance must be non-negative")
    if count < 1:
        raise ValueError("count must be >= 1")
    z = norm.ppf(0.5 * (1.0 + level))
    half = z * math.sqrt(sigma2 / count)
    low, high = point - half, point + half
    if clip_unit:
        low, high = max(low, 0.0), min(high, 1.0)
    return low, high


# ---------------------------------------------------------------------------
# moving-block bootstrap
# ---------------------------------------------------------------------------

def _block_resample(length: int, block: int, rng: np.random.Generator) -> np.ndarray:
    num_blocks = -(-length // block)  # ceil
    starts = rng.integers(0, length - block + 1, size=num_blocks)
    idx = (starts[:, None] + np.arange(block)[None, :]).ravel()
    return idx[:length]


def block_bootstrap_ci(
    x: SeriesLike,
    y: SeriesLike,
    statistic: Callable[[np.ndarray, np.ndarray], float],
    block: Optional[int] = None,
    replicates: int = 1000,
    level: float = 0.95,
    seed: int = 0,
) -> tuple[float, float]:
    """Moving-block bootstrap percentile interval for a pair statistic.

    Blocks of time indices are resampled jointly from both series, which
    preserves the cross-dependence and the short-range serial dependence
    within blocks. Replicate seeds are split deterministically from the
    master seed, so the result does not depend on evaluation order.
    """
    if not 0.0 < level < 1.0:
        raise ValueError("confidence level must lie strictly between 0 and 1")
    if replicates < 2:
        raise ValueError("need at least 2 bootstrap replicates")
    xv = series_values(x)
    yv = series_values(y)
    length = xv.shape[0]
    if block is None:
        block = default_bandwidth(length)
    block = min(max(int(block), 1), length)
    children = np.random.SeedSequence(seed).spawn(replicates)
    stats = np.empty(replicates, dtype=np.float64)
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        idx = _block_resample(length, block, rng)
        stats[i] = statistic(xv[idx], yv[idx])
    alpha = 1.0 - level
    low, high = np.quantile(stats, [alpha / 2.0, 1.0 - alpha / 2.0])
    return float(low), float(high)


# ---------------------------------------------------------------------------
# full report for one pair
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DependenceReport:
    """Point estimates plus variance and interval information for a pair."""

    label_x: str
    label_y: str
    scheme: str
    estimates: DependenceEstimates
    coincidence_variance: VarianceEstimate
    score_variance: VarianceEstimate
    comparison_ci: tuple[float, float]
    coefficient_ci: tuple[float, float]
    level: float


def analyze_pair(
    x: SeriesLike,
    y: SeriesLike,
    n: int,
    stride: int = 1,
    scheme: Optional[WeightScheme] = None,
    level: float = 0.95,
    kernel: str = "bartlett",
    bandwidth: Optional[float] = None,
    block: Optional[int] = None,
    replicates: int = 1000,
    seed: int = 0,
) -> DependenceReport:
    """Estimates, long-run variances, and confidence intervals for a pair.

    Coincidence probability and total score get kernel-based intervals
    from their per-window sequences; the comparison value and the
    standardized coefficient get moving-block bootstrap intervals.
    """
    scheme = scheme or scheme_for_length(n)
    est = dependence_estimates(x, y, n, stride, scheme)
    _, indicators = coincidence_probability(x, y, n, stride)
    _, scores = total_score(x, y, n, stride, scheme)

    def with_ci(var: VarianceEstimate, point: float) -> VarianceEstimate:
        low, high = confidence_interval(point, var.sigma2, est.num_windows, level)
        return replace(var, ci_low=low, ci_high=high, level=level)

    var_p = with_ci(long_run_variance(indicators, kernel, bandwidth), est.coincidence)
    var_s = with_ci(long_run_variance(scores, kernel, bandwidth), est.total_score)

    def comparison_stat(xa: np.ndarray, ya: np.ndarray) -> float:
        return comparison_value(xa, ya, n, stride)

    def coefficient_stat(xa: np.ndarray, ya: np.ndarray) -> float:
        p_hat, _ = coincidence_probability(xa, ya, n, stride)
        q_hat = comparison_value(xa, ya, n, stride)
        r_hat, s_hat = anti_estimates(xa, ya, n, stride)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NumericalWarning)
            return standardized_coefficient(p_hat, q_hat, r_hat, s_hat)

    seed_q, seed_c = np.random.SeedSequence(seed).generate_state(2)
    q_ci = block_bootstrap_ci(x, y, comparison_stat, block, replicates, level, int(seed_q))
    c_ci = block_bootstrap_ci(x, y, coefficient_stat, block, replicates, level, int(seed_c))

    return DependenceReport(
        label_x=series_label(x, "x"),
        label_y=series_label(y, "y"),
        scheme=scheme.name,
        estimates=est,
        coincidence_variance=var_p,
        score_variance=var_s,
        comparison_ci=q_ci,
        coefficient_ci=c_ci,
        level=level,
    )
