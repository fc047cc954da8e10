"""Prior families over decomposable graphs, evaluated in log space.

Every family returns the log of its unnormalized mass; normalizing constants
are intractable in general and all inference works with ratios. Edge-count
families (binomial, beta-binomial) depend on the graph only through the edge
count r; cohesion-style families depend on the multisets of clique and
separator sizes, so they are invariant to clique ordering and vertex
relabeling. Empty separators contribute nothing in every family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.special import betaln, logsumexp

from .errors import InvalidParamsError, InvalidSpecError, SizeMismatchError, TooLargeError
from .graphs import CliqueDecomposition, LabeledGraph

CRP_N_CAP = 200

FAMILIES = (
    "uniform",
    "binomial",
    "beta_binomial",
    "cohesion",
    "pgm",
    "two_param",
    "finite_capacity",
)


class GraphPrior:
    """Base class: log prior mass up to the global normalizing constant."""

    family = "?"

    def log_prior(self, g: LabeledGraph, d: CliqueDecomposition) -> float:
        raise NotImplementedError

    def log_prior_ratio(
        self,
        g: LabeledGraph,
        d: CliqueDecomposition,
        g_new: LabeledGraph,
        d_new: CliqueDecomposition,
    ) -> float:
        """log prior(g_new) - log prior(g); graphs must share the vertex count."""
        if g.n != g_new.n:
            raise SizeMismatchError(f"graphs on {g.n} and {g_new.n} vertices")
        return self.log_prior(g_new, d_new) - self.log_prior(g, d)


@dataclass(frozen=True)
class UniformPrior(GraphPrior):
    """Equal mass on every decomposable graph."""

    family = "uniform"

    def log_prior(self, g, d):
        return 0.0


@dataclass(frozen=True)
class BinomialPrior(GraphPrior):
    """Independent edge inclusion with probability rho: mass rho^r (1-rho)^(m-r)."""

    rho: float
    family = "binomial"

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise InvalidSpecError(f"binomial rho must be in (0, 1), got {self.rho}")

    def log_prior(self, g, d):
        return g.r * math.log(self.rho) + (g.m - g.r) * math.log1p(-self.rho)


@dataclass(frozen=True)
class BetaBinomialPrior(GraphPrior):
    """Edge probability integrated against Beta(alpha_e, beta_e).

    Mass B(alpha_e + r, beta_e + m - r) / B(alpha_e, beta_e); the (1, 1)
    case weights each graph inversely to the number of same-size graphs in
    the unrestricted space, penalizing medium-sized graphs.
    """

    alpha_e: float
    beta_e: float
    family = "beta_binomial"

    def __post_init__(self):
        if self.alpha_e <= 0 or self.beta_e <= 0:
            raise InvalidSpecError(
                f"beta_binomial alpha_e, beta_e must be > 0, got ({self.alpha_e}, {self.beta_e})"
            )

    def log_prior(self, g, d):
        return betaln(self.alpha_e + g.r, self.beta_e + g.m - g.r) - betaln(
            self.alpha_e, self.beta_e
        )


@dataclass(frozen=True)
class CohesionPrior(GraphPrior):
    """Product of per-clique weights over product of per-separator weights.

    Weight tables are size-indexed (the concrete families only ever depend
    on component cardinality). The empty separator always carries weight 1.
    """

    psi_clique: Mapping[int, float]
    psi_sep: Mapping[int, float]
    family = "cohesion"

    def __post_init__(self):
        for name, table in (("psi_clique", self.psi_clique), ("psi_sep", self.psi_sep)):
            for size, w in table.items():
                if not isinstance(size, int) or size < 0:
                    raise InvalidSpecError(f"{name} sizes must be nonnegative ints, got {size}")
                if w <= 0:
                    raise InvalidSpecError(f"{name}[{size}] must be positive, got {w}")
        if self.psi_sep.get(0, 1.0) != 1.0:
            raise InvalidSpecError("separator weight for the empty set is fixed at 1")
        object.__setattr__(self, "psi_clique", dict(self.psi_clique))
        object.__setattr__(self, "psi_sep", dict(self.psi_sep))

    def _lookup(self, table, name, size):
        try:
            return table[size]
        except KeyError:
            raise InvalidSpecError(f"{name} has no weight for component size {size}") from None

    def log_prior(self, g, d):
        total = 0.0
        for c in d.clique_sizes():
            total += math.log(self._lookup(self.psi_clique, "psi_clique", c))
        for s in d.nonempty_separator_sizes():
            total -= math.log(self._lookup(self.psi_sep, "psi_sep", s))
        return total


@dataclass(frozen=True)
class PgmPrior(GraphPrior):
    """Product graphical model prior: a^n_c b^n_s with factorial cohesions.

    Mass a^n_c b^n_s * prod (|C_j|-1)! / prod (|S_j|-1)!. Small ``a`` favors
    few large cliques, small ``b`` few separators (strongly separated
    cliques). The b -> 0 limit restricted to separator-free graphs is the
    Chinese-restaurant partition law with concentration ``a``.
    """

    a: float
    b: float
    family = "pgm"

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise InvalidSpecError(f"pgm a, b must be > 0, got ({self.a}, {self.b})")

    def log_prior(self, g, d):
        total = d.n_c * math.log(self.a) + d.n_s * math.log(self.b)
        for c in d.clique_sizes():
            total += math.lgamma(c)
        for s in d.nonempty_separator_sizes():
            total -= math.lgamma(s)
        return total


@dataclass(frozen=True)
class TwoParamPrior(GraphPrior):
    """Four-parameter extension controlling relative component sizes.

    Clique factor prod_j (a2 + a1(j-1)) Gamma(|C_j| - a1) / Gamma(1 - a1),
    divided by the analogous separator factor with (b1, b2) over non-empty
    separators. Reduces to the factorial-cohesion family when a1 = b1 = 0.
    A nonpositive sequential factor (possible only for negative a2 or b2)
    is treated as zero prior mass.
    """

    a1: float
    a2: float
    b1: float
    b2: float
    family = "two_param"

    def __post_init__(self):
        if not 0.0 <= self.a1 < 1.0:
            raise InvalidSpecError(f"two_param a1 must be in [0, 1), got {self.a1}")
        if self.a2 <= -self.a1:
            raise InvalidSpecError(f"two_param a2 must exceed -a1, got {self.a2}")
        if not 0.0 <= self.b1 < 1.0:
            raise InvalidSpecError(f"two_param b1 must be in [0, 1), got {self.b1}")
        if self.b2 <= -self.b1:
            raise InvalidSpecError(f"two_param b2 must exceed -b1, got {self.b2}")

    @staticmethod
    def _side(sizes, discount, strength):
        total = 0.0
        for j, size in enumerate(sizes):
            factor = strength + discount * j
            if factor <= 0.0:
                return None
            total += math.log(factor) + math.lgamma(size - discount) - math.lgamma(1.0 - discount)
        return total

    def log_prior(self, g, d):
        top = self._side(d.clique_sizes(), self.a1, self.a2)
        bottom = self._side(d.nonempty_separator_sizes(), self.b1, self.b2)
        if top is None or bottom is None:
            return -math.inf
        return top - bottom


@dataclass(frozen=True)
class FiniteCapacityPrior(GraphPrior):
    """Caps the clique and separator counts at c1 and d1.

    Clique factor prod_j (c1 - j + 1) Gamma(c2 + |C_j|) / Gamma(c2), divided
    by the analogous separator factor with (d1, d2) over non-empty
    separators. Exceeding either capacity yields -inf (zero mass), so a
    sampler simply rejects such proposals.
    """

    c1: float
    c2: float
    d1: float
    d2: float
    family = "finite_capacity"

    def __post_init__(self):
        if min(self.c1, self.c2, self.d1, self.d2) <= 0:
            raise InvalidSpecError("finite_capacity parameters must all be > 0")
        if self.c1 <= self.d1:
            raise InvalidSpecError(
                f"finite_capacity requires c1 > d1, got c1={self.c1}, d1={self.d1}"
            )

    @staticmethod
    def _side(sizes, capacity, scale):
        total = 0.0
        for j, size in enumerate(sizes):
            factor = capacity - j
            if factor <= 0.0:
                return None
            total += math.log(factor) + math.lgamma(scale + size) - math.lgamma(scale)
        return total

    def log_prior(self, g, d):
        if d.n_c > self.c1 or d.n_s > self.d1:
            return -math.inf
        top = self._side(d.clique_sizes(), self.c1, self.c2)
        bottom = self._side(d.nonempty_separator_sizes(), self.d1, self.d2)
        if top is None or bottom is None:
            return -math.inf
        return top - bottom


_FAMILY_CLASSES = {
    "uniform": UniformPrior,
    "binomial": BinomialPrior,
    "beta_binomial": BetaBinomialPrior,
    "cohesion": CohesionPrior,
    "pgm": PgmPrior,
    "two_param": TwoParamPrior,
    "finite_capacity": FiniteCapacityPrior,
}


def make_prior(family: str, **params) -> GraphPrior:
    """Construct a prior by family name; unknown names or parameters raise
    InvalidSpecError."""
    try:
        cls = _FAMILY_CLASSES[family]
    except KeyError:
        raise InvalidSpecError(
            f"unknown prior family {family!r}; expected one of {', '.join(FAMILIES)}"
        ) from None
    try:
        return cls(**params)
    except TypeError as exc:
        raise InvalidSpecError(f"bad parameters for family {family!r}: {exc}") from None


def log_prior(spec: GraphPrior, g: LabeledGraph, d: CliqueDecomposition) -> float:
    """Log unnormalized prior mass of g with decomposition d."""
    return spec.log_prior(g, d)


def log_prior_ratio(
    spec: GraphPrior,
    g: LabeledGraph,
    d: CliqueDecomposition,
    g_new: LabeledGraph,
    d_new: CliqueDecomposition,
) -> float:
    return spec.log_prior_ratio(g, d, g_new, d_new)


@dataclass(frozen=True)
class CrpReference:
    """Chinese-restaurant reference law for the clique count.

    ``pmf[k-1]`` is Pr(n_c = k) for k = 1..n under concentration ``a``; the
    mean and variance come from the exact harmonic-style sums.
    """

    n: int
    a: float
    pmf: np.ndarray = field(repr=False)
    mean: float
    variance: float


def _log_stirling_first_kind_row(n: int) -> np.ndarray:
    """log of unsigned Stirling numbers of the first kind s(n, k), k = 1..n.

    Row-by-row recurrence s(n+1, k) = s(n, k-1) + n s(n, k), carried in log
    space with logaddexp so n = 200 stays finite.
    """
    row = np.array([0.0])
    for m in range(1, n):
        new = np.empty(m + 1)
        log_m = math.log(m)
        new[0] = log_m + row[0]
        new[m] = row[m - 1]
        if m > 1:
            new[1:m] = np.logaddexp(row[: m - 1], log_m + row[1:m])
        row = new
    return row


def crp_clique_count_pmf(n: int, a: float) -> CrpReference:
    """Distribution of the number of blocks in a CRP partition of n items.

    Pr(k) is proportional to s(n, k) a^k with s the unsigned Stirling
    numbers of the first kind; the log-space weights are normalized by
    log-sum-exp (analytically the normalizer is Gamma(a+n)/Gamma(a)).
    """
    if not 1 <= n <= CRP_N_CAP:
        raise TooLargeError(f"crp reference capped at n={CRP_N_CAP}, got {n}")
    if a <= 0:
        raise InvalidParamsError(f"concentration must be positive, got {a}")
    log_s = _log_stirling_first_kind_row(n)
    ks = np.arange(1, n + 1)
    log_w = log_s + ks * math.log(a)
    pmf = np.exp(log_w - logsumexp(log_w))
    mean = float(sum(a / (a + i) for i in range(n)))
    variance = float(sum(a * i / (a + i) ** 2 for i in range(1, n)))
    return CrpReference(n=n, a=a, pmf=pmf, mean=mean, variance=variance)


def west_update_concentration(
    a_current: float,
    n_c: int,
    n: int,
    gamma_shape: float,
    gamma_rate: float,
    rng: np.random.Generator,
) -> float:
    """One data-augmentation refresh of a CRP concentration parameter.

    Under a Gamma(shape, rate) prior and an observed block count n_c out of
    n items: draw eta ~ Beta(a+1, n), then draw a from the two-component
    gamma mixture with rate (rate - log eta), shapes (shape + n_c) and
    (shape + n_c - 1), odds on the first component
    (shape + n_c - 1) / (n (rate - log eta)).
    """
    if a_current <= 0:
        raise InvalidParamsError(f"current concentration must be > 0, got {a_current}")
    if n < 1 or not 1 <= n_c <= n:
        raise InvalidParamsError(f"need 1 <= n_c <= n, got n_c={n_c}, n={n}")
    if gamma_shape <= 0 or gamma_rate <= 0:
        raise InvalidParamsError("gamma prior shape and rate must be > 0")
    eta = rng.beta(a_current + 1.0, n)
    rate_post = gamma_rate - math.log(eta)
    odds = (gamma_shape + n_c - 1.0) / (n * rate_post)
    shape_post = gamma_shape + n_c if rng.random() < odds / (1.0 + odds) else gamma_shape + n_c - 1.0
    return float(rng.gamma(shape_post, 1.0 / rate_post))
