"""Seeded count-process simulation for coherence benchmarks.

Simulates Poisson-INGARCH processes: counts Z_t drawn from a Poisson
distribution whose mean follows the linear recursion

    nu_t = beta0 + sum_i beta_i * Z_{t-i} + sum_j alpha_j * nu_{t-j}.

Two independent streams of such counts carry no cross dependence, which
makes them the reference point for how much pattern coherence pure
auto-correlation produces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dependence import total_score
from .metric import WeightScheme, scheme_for_length


@dataclass(frozen=True)
class IngarchSpec:
    """Parameters of a Poisson-INGARCH simulation.

    beta are the feedback coefficients on past counts, alpha those on
    past conditional means (lags 1..p and 1..q respectively). Stationarity
    requires sum(beta) + sum(alpha) < 1. The recursion starts at the
    stationary mean and ``burn_in`` initial draws are discarded.
    """

    beta0: float
    beta: tuple[float, ...] = ()
    alpha: tuple[float, ...] = ()
    length: int = 1000
    seed: int = 0
    burn_in: int = 500

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        if self.beta0 <= 0:
            raise ValueError("beta0 must be positive")
        if any(b < 0 for b in self.beta) or any(a < 0 for a in self.alpha):
            raise ValueError("feedback coefficients must be non-negative")
        if sum(self.beta) + sum(self.alpha) >= 1.0:
            raise ValueError("sum(beta) + sum(alpha) must be < 1 for stationarity")
        if self.length < 1:
            raise ValueError("length must be >= 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")

    @property
    def stationary_mean(self) -> float:
        """beta0 / (1 - sum(beta) - sum(alpha))."""
        return self.beta0 / (1.0 - sum(self.beta) - sum(self.alpha))


def simulate_ingarch(spec: IngarchSpec, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Simulate one count series; fully reproducible from the spec seed.

    Pre-sample history is pinned at the stationary mean and the burn-in
    stretch is dropped, so the returned series is effectively stationary.
    An explicit generator overrides the spec seed (used by benchmark
    drivers that split seeds per replication).
    """
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    p = len(spec.beta)
    q = len(spec.alpha)
    lag = max(p, q, 0)
    steps = spec.burn_in + spec.length
    mean = spec.stationary_mean
    counts = np.empty(lag + steps, dtype=np.float64)
    nus = np.empty(lag + steps, dtype=np.float64)
    counts[:lag] = mean
    nus[:lag] = mean
    beta = np.asarray(spec.beta)
    alpha = np.asarray(spec.alpha)
    for t in range(lag, lag + steps):
        nu = spec.beta0
        if p:
            nu += beta @ counts[t - p : t][::-1]
        if q:
            nu += alpha @ nus[t - q : t][::-1]
        nus[t] = nu
        counts[t] = rng.poisson(nu)
    return counts[lag + spec.burn_in :].astype(np.int64)


@dataclass(frozen=True)
class CoherenceSummary:
    """Total-score distribution over independent replications."""

    mean: float
    min: float
    max: float
    n: int
    scheme: str
    replications: int
    scores: np.ndarray = field(repr=False)


def coherence_benchmark(
    spec: IngarchSpec,
    n: int,
    scheme: Optional[WeightScheme] = None,
    replications: int = 1000,
    stride: int = 1,
) -> CoherenceSummary:
    """Total score between two independent simulated streams.

    Each replication simulates two independent series from ``spec`` under
    seeds split deterministically from ``spec.seed`` (replication order
    never changes the result) and evaluates the weighted total score.
    """
    if replications < 1:
        raise ValueError("replications must be >= 1")
    scheme = scheme or scheme_for_length(n)
    children = np.random.SeedSequence(spec.seed).spawn(replications)
    scores = np.empty(replications, dtype=np.float64)
    for i, child in enumerate(children):
        seed_x, seed_y = child.spawn(2)
        x = simulate_ingarch(spec, np.random.default_rng(seed_x))
        y = simulate_ingarch(spec, np.random.default_rng(seed_y))
        scores[i], _ = total_score(x, y, n, stride, scheme)
    return CoherenceSummary(
        mean=float(scores.mean()),
        min=float(scores.min()),
        max=float(scores.max()),
        n=n,
        scheme=scheme.name,
        replications=replications,
        scores=scores,
    )
