"""Clique-factorized Gaussian marginal likelihood under a hyper-inverse
Wishart covariance prior.

Data are centered by the sample mean and modeled as zero-mean thereafter;
everything downstream consumes only the sufficient statistics (count, mean,
scatter). Component marginals use the degrees-of-freedom convention in which
``delta > 0`` makes the prior proper on every complete set, so a component
on vertex set B integrates its covariance block against an inverse Wishart
with classical degrees of freedom ``delta + |B| - 1`` and scale ``phi_B``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    EmptyDataError,
    InvalidParamsError,
    NonFiniteError,
    NotPositiveDefiniteError,
    SingularScaleError,
)
from .graphs import CliqueDecomposition

LOG_PI = math.log(math.pi)
LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class GaussianSuffStats:
    """Observation count, per-variable means, and centered scatter matrix."""

    count: int
    mean: np.ndarray = field(repr=False)
    scatter: np.ndarray = field(repr=False)

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        scatter = np.asarray(self.scatter, dtype=np.float64)
        if scatter.shape != (mean.size, mean.size):
            raise DimensionMismatchError(
                f"scatter shape {scatter.shape} does not match {mean.size} variables"
            )
        if not np.allclose(scatter, scatter.T, atol=1e-10):
            raise InvalidParamsError("scatter matrix must be symmetric")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "scatter", (scatter + scatter.T) / 2.0)

    @property
    def n(self) -> int:
        return self.mean.size

    @classmethod
    def empty(cls, n: int) -> "GaussianSuffStats":
        return cls(0, np.zeros(n), np.zeros((n, n)))


@dataclass(frozen=True)
class HiwParams:
    """Degrees of freedom and scale matrix of the covariance prior."""

    delta: float
    phi: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.delta <= 0:
            raise InvalidParamsError(f"delta must be > 0, got {self.delta}")
        phi = np.asarray(self.phi, dtype=np.float64)
        if phi.ndim != 2 or phi.shape[0] != phi.shape[1]:
            raise InvalidParamsError(f"phi must be square, got shape {phi.shape}")
        if not np.allclose(phi, phi.T, atol=1e-10):
            raise InvalidParamsError("phi must be symmetric")
        try:
            np.linalg.cholesky(phi)
        except np.linalg.LinAlgError:
            raise InvalidParamsError("phi must be positive definite") from None
        object.__setattr__(self, "phi", (phi + phi.T) / 2.0)


def suff_stats(data) -> GaussianSuffStats:
    """Sufficient statistics of an N x n data matrix (rows = observations)."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise EmptyDataError(f"need a 2-D matrix with at least one row, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("data contains NaN or infinite entries")
    mean = arr.mean(axis=0)
    centered = arr - mean
    return GaussianSuffStats(arr.shape[0], mean, centered.T @ centered)


def pool_stats(a: GaussianSuffStats, b: GaussianSuffStats) -> GaussianSuffStats:
    """Statistics of the concatenated sample, recentering at the pooled mean."""
    if a.n != b.n:
        raise DimensionMismatchError(f"cannot pool stats on {a.n} and {b.n} variables")
    if a.count == 0:
        return b
    if b.count == 0:
        return a
    total = a.count + b.count
    mean = (a.count * a.mean + b.count * b.mean) / total
    diff = a.mean - b.mean
    scatter = a.scatter + b.scatter + (a.count * b.count / total) * np.outer(diff, diff)
    return GaussianSuffStats(total, mean, scatter)


def default_hiw(stats: GaussianSuffStats, delta: float = 3.0, tau: float | None = None) -> HiwParams:
    """Default hyperparameters: identity scale times the mean sample variance."""
    if tau is None:
        if stats.count < 2:
            raise InvalidParamsError("need at least two observations to derive the scale")
        tau = float(np.mean(np.diag(stats.scatter)) / (stats.count - 1))
        if tau <= 0:
            raise InvalidParamsError("data has zero variance; supply tau explicitly")
    if tau <= 0:
        raise InvalidParamsError(f"tau must be > 0, got {tau}")
    return HiwParams(delta=delta, phi=tau * np.eye(stats.n))


def log_multivariate_gamma(p: int, x: float) -> float:
    """log of the p-dimensional multivariate gamma function at x.

    Defined for x > (p - 1) / 2 as
    (p(p-1)/4) log pi + sum_{j=1..p} log Gamma(x + (1 - j) / 2).
    """
    if p < 1:
        raise DomainError(f"dimension must be >= 1, got {p}")
    if x <= (p - 1) / 2.0:
        raise DomainError(f"need x > (p-1)/2 = {(p - 1) / 2}, got {x}")
    total = p * (p - 1) / 4.0 * LOG_PI
    for j in range(1, p + 1):
        total += math.lgamma(x + (1 - j) / 2.0)
    return total


def _logdet_spd(mat: np.ndarray, err_cls=SingularScaleError) -> float:
    try:
        chol = np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        raise err_cls("matrix is not numerically positive definite") from None
    return 2.0 * float(np.sum(np.log(np.diag(chol))))


def log_component_marginal(B: Iterable[int], stats: GaussianSuffStats, hp: HiwParams) -> float:
    """Marginal log density of the centered observations restricted to B.

    The covariance block over B is integrated against its inverse Wishart
    prior, giving

        -(N|B|/2) log pi
        + log MGamma_|B|((delta + N + |B| - 1)/2)
        - log MGamma_|B|((delta + |B| - 1)/2)
        + ((delta + |B| - 1)/2)  log det phi_B
        - ((delta + N + |B| - 1)/2) log det(phi_B + S_B).
    """
    idx = sorted(v - 1 for v in B)
    if not idx:
        raise InvalidParamsError("component vertex set must be non-empty")
    p = len(idx)
    N = stats.count
    delta = hp.delta
    phi_b = hp.phi[np.ix_(idx, idx)]
    s_b = stats.scatter[np.ix_(idx, idx)]
    half_prior = (delta + p - 1) / 2.0
    half_post = (delta + N + p - 1) / 2.0
    return (
        -(N * p / 2.0) * LOG_PI
        + log_multivariate_gamma(p, half_post)
        - log_multivariate_gamma(p, half_prior)
        + half_prior * _logdet_spd(phi_b)
        - half_post * _logdet_spd(phi_b + s_b)
    )


def log_marginal_likelihood(
    d: CliqueDecomposition, stats: GaussianSuffStats, hp: HiwParams
) -> float:
    """Graph marginal likelihood: clique marginals over separator marginals."""
    total = 0.0
    for c in d.cliques:
        total += log_component_marginal(c, stats, hp)
    for s in d.separators:
        if s:
            total -= log_component_marginal(s, stats, hp)
    return total


def log_sublikelihood(B: Iterable[int], sigma_b: np.ndarray, stats: GaussianSuffStats) -> float:
    """Log density of the N centered observations on B under a fixed
    zero-mean Gaussian with covariance sigma_b."""
    idx = sorted(v - 1 for v in B)
    p = len(idx)
    sigma_b = np.asarray(sigma_b, dtype=np.float64)
    if sigma_b.shape != (p, p):
        raise DimensionMismatchError(f"sigma has shape {sigma_b.shape}, expected {(p, p)}")
    try:
        chol = np.linalg.cholesky(sigma_b)
    except np.linalg.LinAlgError:
        raise NotPositiveDefiniteError("sigma_b must be positive definite") from None
    logdet = 2.0 * float(np.sum(np.log(np.diag(chol))))
    s_b = stats.scatter[np.ix_(idx, idx)]
    half_solve = np.linalg.solve(chol, s_b)
    trace_term = float(np.trace(np.linalg.solve(chol, half_solve.T)))
    N = stats.count
    return -(N * p / 2.0) * LOG_2PI - (N / 2.0) * logdet - 0.5 * trace_term


def log_predictive(
    d: CliqueDecomposition,
    train_stats: GaussianSuffStats,
    test_stats: GaussianSuffStats,
    hp: HiwParams,
) -> float:
    """log p(test | graph, train) as a marginal-likelihood difference.

    Pools the two samples (recomputing mean and scatter over the
    concatenation) and subtracts the train-only marginal.
    """
    if train_stats.n != test_stats.n:
        raise DimensionMismatchError(
            f"train has {train_stats.n} variables, test has {test_stats.n}"
        )
    pooled = pool_stats(train_stats, test_stats)
    return log_marginal_likelihood(d, pooled, hp) - log_marginal_likelihood(d, train_stats, hp)


class MarginalScorer:
    """Caches component marginals per vertex set for one chain run.

    Clique and separator sets recur heavily across MCMC iterations, so each
    distinct set is integrated once. Not thread-safe; give each concurrent
    chain its own scorer.
    """

    def __init__(self, stats: GaussianSuffStats, hp: HiwParams):
        self.stats = stats
        self.hp = hp
        self._cache: dict = {}

    def component(self, B) -> float:
        key = B if isinstance(B, frozenset) else frozenset(B)
        value = self._cache.get(key)
        if value is None:
            value = log_component_marginal(key, self.stats, self.hp)
            self._cache[key] = value
        return value

    def decomposition(self, d: CliqueDecomposition) -> float:
        total = 0.0
        for c in d.cliques:
            total += self.component(c)
        for s in d.separators:
            if s:
                total -= self.component(s)
        return total
