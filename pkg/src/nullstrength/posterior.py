"""Monte Carlo draws from the flat-prior posterior of two group means.

Under the noninformative prior p(mu, sigma^2) ~ 1/sigma^2 the marginal
posterior of a group mean is a scaled, shifted Student-t::

    mu_X | x ~ t_{m-1}(xbar, s_x^2 / m)

Draws are generated as standard-t variates and then mapped affinely, so
shifting or rescaling a summary transforms its draws the same way for a
fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ControlNearZero, DegenerateSample, DrawCountTooSmall
from .rng import RngSeed, as_seed

DEFAULT_K = 10_000
MIN_K = 1_000
#: ``relative_difference_draws`` refuses when at least this fraction of
#: control-mean draws is <= 0.
NEAR_ZERO_FRACTION = 1e-3

_X_STREAM, _Y_STREAM = 0, 1


@dataclass(frozen=True)
class SampleSummary:
    """Sufficient statistics of one group: sample mean, sample sd and size."""

    mean: float
    sd: float
    n: int

    def __post_init__(self) -> None:
        if not math.isfinite(self.mean):
            raise DegenerateSample(f"mean must be finite, got {self.mean!r}")
        if int(self.n) != self.n or self.n < 2:
            raise DegenerateSample(f"n must be an integer >= 2, got {self.n!r}")
        if not (math.isfinite(self.sd) and self.sd > 0):
            raise DegenerateSample(f"sd must be positive and finite, got {self.sd!r}")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def from_observations(cls, values) -> SampleSummary:
        a = np.asarray(values, dtype=float)
        if a.ndim != 1 or a.size < 2:
            raise DegenerateSample("need at least two observations")
        return cls(float(a.mean()), float(a.std(ddof=1)), int(a.size))

    @property
    def df(self) -> int:
        return self.n - 1

    @property
    def se(self) -> float:
        """Standard error of the mean, ``sd / sqrt(n)``."""
        return self.sd / math.sqrt(self.n)

    def scaled(self, factor: float) -> SampleSummary:
        return SampleSummary(self.mean * factor, self.sd * factor, self.n)


@dataclass(frozen=True)
class PosteriorDrawSet:
    """``k`` paired, independent posterior draws of the two group means."""

    k: int
    mu_x_draws: np.ndarray = field(repr=False)
    mu_y_draws: np.ndarray = field(repr=False)
    seed: RngSeed

    def __post_init__(self) -> None:
        for name in ("mu_x_draws", "mu_y_draws"):
            a = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            if a.shape != (self.k,):
                raise ValueError(f"{name} must have shape ({self.k},), got {a.shape}")
            a.flags.writeable = False
            object.__setattr__(self, name, a)


def _check_k(k: int) -> int:
    if int(k) != k or k < MIN_K:
        raise DrawCountTooSmall(f"k must be an integer >= {MIN_K}, got {k!r}")
    return int(k)


def sample_mean_posterior(s: SampleSummary, k: int, rng: np.random.Generator) -> np.ndarray:
    """``k`` draws of one group mean from ``t_{n-1}(mean, sd^2 / n)``."""
    t = kernels.standard_t(rng, float(s.df), k)
    return s.mean + s.se * t


def draw_posterior_means(
    x: SampleSummary,
    y: SampleSummary,
    k: int = DEFAULT_K,
    seed: RngSeed | int | None = None,
) -> PosteriorDrawSet:
    """Draw ``k`` posterior samples of the control (``x``) and experiment (``y``) means.

    The two groups use independent sub-streams of ``seed``; identical
    arguments reproduce identical arrays.
    """
    k = _check_k(k)
    seed = as_seed(seed)
    mu_x = sample_mean_posterior(x, k, seed.generator(_X_STREAM))
    mu_y = sample_mean_posterior(y, k, seed.generator(_Y_STREAM))
    return PosteriorDrawSet(k, mu_x, mu_y, seed)


def difference_draws(d: PosteriorDrawSet) -> np.ndarray:
    """Signed differences ``mu_y - mu_x``, one per draw."""
    return d.mu_y_draws - d.mu_x_draws


def control_nonpositive_fraction(d: PosteriorDrawSet) -> float:
    return float(np.count_nonzero(d.mu_x_draws <= 0.0)) / d.k


def check_control_away_from_zero(d: PosteriorDrawSet) -> None:
    frac = control_nonpositive_fraction(d)
    if frac >= NEAR_ZERO_FRACTION:
        raise ControlNearZero(
            f"{frac:.2%} of control-mean draws are <= 0; the relative difference is "
            "unstable here, use the raw statistic instead"
        )


def relative_difference_draws(d: PosteriorDrawSet) -> np.ndarray:
    """Signed relative differences ``(mu_y - mu_x) / mu_x``, one per draw."""
    check_control_away_from_zero(d)
    return (d.mu_y_draws - d.mu_x_draws) / d.mu_x_draws
