"""The most difference in means (delta_M) and its relative form (r delta_M).

delta_M is the upper end ``c`` of the zero-centred credible interval
``(-c, c)`` holding ``1 - alpha`` of the posterior of ``mu_Y - mu_X``.
Since ``-c < d <= c`` iff ``|d| <= c``, solving ``F(c) - F(-c) = 1 - alpha``
on the ECDF of the signed draws is the same as taking the
``ceil((1 - alpha) K)``-th smallest ``|d|``.  No interpolation: the bound is
never understated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .errors import ControlMeanNotPositive, EmptyDraws
from .posterior import (
    DEFAULT_K,
    PosteriorDrawSet,
    SampleSummary,
    check_control_away_from_zero,
    draw_posterior_means,
)
from .rng import RngSeed, as_seed

#: Fresh draws used by ``credibility_rate``, as a multiple of ``k``.
CHECK_MULTIPLIER = 5


class Scale(str, enum.Enum):
    RAW = "raw"
    RELATIVE = "relative"


@dataclass(frozen=True)
class DeltaMResult:
    value: float
    alpha_dm: float
    k: int
    seed: RngSeed
    kind: Scale = Scale.RAW

    @property
    def credibility(self) -> float:
        return 1.0 - self.alpha_dm

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "alpha_dm": self.alpha_dm,
            "credibility": self.credibility,
            "k": self.k,
            "seed": self.seed.to_dict(),
            "kind": self.kind.value,
        }


def _check_alpha(alpha_dm: float) -> float:
    if not 0.0 < alpha_dm < 1.0:
        raise ValueError(f"alpha_dm must lie in (0, 1), got {alpha_dm!r}")
    return float(alpha_dm)


def order_rank(alpha_dm: float, k: int) -> int:
    """1-based rank of the order statistic holding ``1 - alpha_dm`` of ``k`` draws."""
    # tolerance keeps e.g. (1 - 0.05) * 10000 at rank 9500, not 9501
    r = math.ceil((1.0 - alpha_dm) * k - 1e-9)
    return min(max(r, 1), k)


def zero_centered_upper_bound(draws, alpha_dm: float) -> float:
    """Smallest ``c`` with ``F(c) - F(-c) >= 1 - alpha_dm`` on the draws' ECDF."""
    alpha_dm = _check_alpha(alpha_dm)
    a = np.asarray(draws, dtype=np.float64).ravel()
    if a.size == 0:
        raise EmptyDraws("no draws given")
    return kernels.abs_kth(a, order_rank(alpha_dm, a.size))


def delta_m_from_draws(d: PosteriorDrawSet, alpha_dm: float, kind: Scale = Scale.RAW) -> DeltaMResult:
    """delta_M (raw) or r delta_M (relative) from an existing draw set."""
    alpha_dm = _check_alpha(alpha_dm)
    kind = Scale(kind)
    relative = kind is Scale.RELATIVE
    if relative:
        check_control_away_from_zero(d)
    value = kernels.diff_abs_kth(d.mu_x_draws, d.mu_y_draws, order_rank(alpha_dm, d.k), relative)
    return DeltaMResult(value, alpha_dm, d.k, d.seed, kind)


def compute_delta_m(
    x: SampleSummary,
    y: SampleSummary,
    alpha_dm: float = 0.05,
    k: int = DEFAULT_K,
    seed: RngSeed | int | None = None,
) -> DeltaMResult:
    """Largest absolute difference in population means supported by the data."""
    _check_alpha(alpha_dm)
    return delta_m_from_draws(draw_posterior_means(x, y, k, seed), alpha_dm, Scale.RAW)


def compute_r_delta_m(
    x: SampleSummary,
    y: SampleSummary,
    alpha_dm: float = 0.05,
    k: int = DEFAULT_K,
    seed: RngSeed | int | None = None,
) -> DeltaMResult:
    """Largest absolute relative difference, as a fraction of the control mean."""
    _check_alpha(alpha_dm)
    if x.mean <= 0:
        raise ControlMeanNotPositive(f"control mean must be > 0 for r delta_M, got {x.mean}")
    return delta_m_from_draws(draw_posterior_means(x, y, k, seed), alpha_dm, Scale.RELATIVE)


def credibility_rate(
    x: SampleSummary,
    y: SampleSummary,
    alpha_dm: float = 0.05,
    k: int = DEFAULT_K,
    seed: RngSeed | int | None = None,
    check_seed: RngSeed | int | None = None,
    kind: Scale = Scale.RAW,
    bound: float | None = None,
) -> float:
    """Fraction of fresh posterior draws whose |difference| is within the bound.

    The bound is delta_M (or r delta_M) computed from ``k`` draws under
    ``seed`` unless given explicitly.  The check uses ``5 * k`` draws under
    ``check_seed``, which must address a different stream than ``seed``.
    """
    kind = Scale(kind)
    seed = as_seed(seed)
    check_seed = seed.derive("credibility-check") if check_seed is None else as_seed(check_seed)
    if check_seed == seed:
        raise ValueError("check_seed must differ from seed")
    if bound is None:
        compute = compute_r_delta_m if kind is Scale.RELATIVE else compute_delta_m
        bound = compute(x, y, alpha_dm, k, seed).value
    check = draw_posterior_means(x, y, CHECK_MULTIPLIER * k, check_seed)
    hits = kernels.count_abs_within(check.mu_x_draws, check.mu_y_draws, float(bound), kind is Scale.RELATIVE)
    return hits / check.k


@dataclass(frozen=True)
class CalibrationCell:
    kind: Scale
    alpha_dm: float
    ratio: float
    n: int
    rate: float


def calibration_summaries(ratio: float, n: int, control_mean: float = 10.0, sd: float = 1.0):
    """Equal-size, equal-sd summaries whose ``xbar_DM / s_DM`` equals ``ratio``."""
    s_dm = sd * math.sqrt(2.0 / n)
    x = SampleSummary(control_mean, sd, n)
    y = SampleSummary(control_mean + ratio * s_dm, sd, n)
    return x, y


def calibration_grid(
    alphas: Iterable[float] = (0.05, 0.10, 0.20),
    ratios: Iterable[float] = (0.0, 0.5, 1.0, 2.0, 4.0),
    ns: Iterable[int] = (6, 12, 24, 48, 96),
    kinds: Iterable[Scale] = (Scale.RAW, Scale.RELATIVE),
    k: int = DEFAULT_K,
    seed: RngSeed | int | None = None,
) -> list[CalibrationCell]:
    """Credibility rate over a grid of standardized effects and sample sizes."""
    seed = as_seed(seed)
    cells = []
    for kind in map(Scale, kinds):
        for alpha in alphas:
            for ratio in ratios:
                for n in ns:
                    x, y = calibration_summaries(ratio, n)
                    cell_seed = seed.derive(kind.value, alpha, ratio, n)
                    rate = credibility_rate(
                        x, y, alpha, k, cell_seed, cell_seed.derive("check"), kind=kind
                    )
                    cells.append(CalibrationCell(kind, alpha, ratio, n, rate))
    return cells


def mean_credibility(cells: Iterable[CalibrationCell]) -> dict[tuple[Scale, float], float]:
    """Average credibility rate per ``(kind, alpha)``."""
    groups: dict[tuple[Scale, float], list[float]] = {}
    for c in cells:
        groups.setdefault((c.kind, c.alpha_dm), []).append(c.rate)
    return {key: float(np.mean(v)) for key, v in groups.items()}
