"""Candidate statistics for comparing the null strength of two-sample results.

Every statistic here is computed from group summaries.  The deterministic
ones are written with numpy ufuncs so they accept either a
:class:`~nullstrength.posterior.SampleSummary` or a :class:`SummaryBatch`
of equal-length arrays (used by the simulation harness).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import stats

from .deltam import Scale, delta_m_from_draws
from .errors import ControlMeanZero, StatisticalPreconditionError
from .posterior import DEFAULT_K, SampleSummary, difference_draws, draw_posterior_means
from .rng import RngSeed, as_seed


@dataclass(frozen=True)
class SummaryBatch:
    """Many sample summaries of one group, stored as arrays."""

    mean: np.ndarray
    sd: np.ndarray
    n: np.ndarray

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=float)
        sd = np.broadcast_to(np.asarray(self.sd, dtype=float), mean.shape)
        n = np.broadcast_to(np.asarray(self.n, dtype=float), mean.shape)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "sd", sd)
        object.__setattr__(self, "n", n)

    def __len__(self) -> int:
        return self.mean.shape[0]

    def __getitem__(self, i: int) -> SampleSummary:
        return SampleSummary(float(self.mean[i]), float(self.sd[i]), int(self.n[i]))


Summary = Union[SampleSummary, SummaryBatch]


class StatisticId(str, enum.Enum):
    XBAR_DM = "xbar_dm"
    R_XBAR_DM = "r_xbar_dm"
    S_DM = "s_dm"
    RS_DM = "rs_dm"
    BF = "bf"
    P_N = "p_n"
    P_E = "p_e"
    P_DELTA = "p_delta"
    CD = "cd"
    DELTA_M = "delta_m"
    R_DELTA_M = "r_delta_m"
    RND = "rnd"


class Direction(str, enum.Enum):
    SMALLER = "smaller_is_stronger_null"
    LARGER = "larger_is_stronger_null"


DIRECTIONS: dict[StatisticId, Direction] = {
    StatisticId.XBAR_DM: Direction.SMALLER,
    StatisticId.R_XBAR_DM: Direction.SMALLER,
    StatisticId.S_DM: Direction.SMALLER,
    StatisticId.RS_DM: Direction.SMALLER,
    StatisticId.BF: Direction.SMALLER,
    StatisticId.P_N: Direction.LARGER,
    # a small TOST p-value is strong evidence of equivalence
    StatisticId.P_E: Direction.SMALLER,
    StatisticId.P_DELTA: Direction.LARGER,
    StatisticId.CD: Direction.SMALLER,
    StatisticId.DELTA_M: Direction.SMALLER,
    StatisticId.R_DELTA_M: Direction.SMALLER,
    StatisticId.RND: Direction.SMALLER,
}

#: Statistics compared by magnitude rather than signed value.
COMPARED_BY_MAGNITUDE = frozenset(
    {StatisticId.XBAR_DM, StatisticId.R_XBAR_DM, StatisticId.RS_DM, StatisticId.CD}
)

#: Statistics that need posterior draws or a random stream.
STOCHASTIC = frozenset({StatisticId.BF, StatisticId.DELTA_M, StatisticId.R_DELTA_M, StatisticId.RND})


def prefers_first(statistic_id: StatisticId, first, second):
    """True where the decision rule designates the first result as the stronger null.

    Ties are not a designation of the first result (the rules are strict).
    """
    sid = StatisticId(statistic_id)
    a, b = np.asarray(first, dtype=float), np.asarray(second, dtype=float)
    if sid in COMPARED_BY_MAGNITUDE:
        a, b = np.abs(a), np.abs(b)
    out = a < b if DIRECTIONS[sid] is Direction.SMALLER else a > b
    return bool(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class NullRegion:
    """Interval of negligible differences ``[lower, upper]`` around zero.

    With ``scale=RELATIVE`` the bounds are fractions of the control sample
    mean and are resolved to raw units at evaluation time.
    """

    lower: float
    upper: float
    scale: Scale = Scale.RAW

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale", Scale(self.scale))
        if not self.lower < 0 < self.upper:
            raise ValueError(f"null region must satisfy lower < 0 < upper, got [{self.lower}, {self.upper}]")

    @classmethod
    def symmetric(cls, delta: float, scale: Scale = Scale.RAW) -> NullRegion:
        return cls(-delta, delta, scale)

    def resolve(self, control_mean):
        """Raw ``(lower, upper)`` bounds for the given control sample mean(s)."""
        if self.scale is Scale.RAW:
            return self.lower, self.upper
        with np.errstate(invalid="ignore"):
            a = np.multiply(self.lower, control_mean)
            b = np.multiply(self.upper, control_mean)
        return _out(np.minimum(a, b)), _out(np.maximum(a, b))


@dataclass(frozen=True)
class CandidateValue:
    statistic_id: StatisticId
    value: float
    direction: Direction
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _out(v):
    a = np.asarray(v)
    return float(a) if a.ndim == 0 else a


def _relative(num, x: Summary):
    if isinstance(x, SampleSummary):
        if x.mean == 0:
            raise ControlMeanZero("relative statistic undefined for a control mean of 0")
        return num / x.mean
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x.mean == 0, np.nan, num / x.mean)


def xbar_dm(x: Summary, y: Summary):
    """Difference in sample means, ``ybar - xbar``."""
    return _out(np.subtract(y.mean, x.mean))


def r_xbar_dm(x: Summary, y: Summary):
    """Difference in sample means relative to the control mean."""
    return _out(_relative(np.subtract(y.mean, x.mean), x))


def s_dm(x: Summary, y: Summary):
    """Standard error of the difference in means (unpooled)."""
    return _out(np.sqrt(np.square(x.sd) / x.n + np.square(y.sd) / y.n))


def rs_dm(x: Summary, y: Summary):
    return _out(_relative(s_dm(x, y), x))


def welch_df(x: Summary, y: Summary):
    """Welch-Satterthwaite degrees of freedom."""
    vx = np.square(x.sd) / x.n
    vy = np.square(y.sd) / y.n
    return _out((vx + vy) ** 2 / (vx**2 / (x.n - 1) + vy**2 / (y.n - 1)))


def welch_t(x: Summary, y: Summary):
    return _out(np.subtract(y.mean, x.mean) / s_dm(x, y))


def welch_p(x: Summary, y: Summary):
    """Two-tailed p-value of Welch's unequal-variance t-test."""
    return _out(2.0 * stats.t.sf(np.abs(welch_t(x, y)), welch_df(x, y)))


def tost_p(x: Summary, y: Summary, region: NullRegion):
    """Two one-sided Welch tests against the region bounds; the larger p-value."""
    lo, hi = region.resolve(x.mean)
    diff = np.subtract(y.mean, x.mean)
    se = s_dm(x, y)
    df = welch_df(x, y)
    p_lower = stats.t.sf((diff - lo) / se, df)  # H0: mu_DM <= lower
    p_upper = stats.t.cdf((diff - hi) / se, df)  # H0: mu_DM >= upper
    return _out(np.maximum(p_lower, p_upper))


def welch_interval(x: Summary, y: Summary, alpha: float):
    """Two-sided ``1 - alpha`` Welch confidence interval of ``mu_Y - mu_X``."""
    half = stats.t.ppf(1.0 - alpha / 2.0, welch_df(x, y)) * s_dm(x, y)
    diff = np.subtract(y.mean, x.mean)
    return _out(diff - half), _out(diff + half)


def sgpv_from_intervals(interval, null):
    """Second-generation p-value of ``interval`` against ``null``.

    ``|I & H0| / |I| * max(|I| / (2 |H0|), 1)``.
    """
    i_lo, i_hi = (np.asarray(v, dtype=float) for v in interval)
    h_lo, h_hi = (np.asarray(v, dtype=float) for v in null)
    i_len = i_hi - i_lo
    h_len = h_hi - h_lo
    overlap = np.clip(np.minimum(i_hi, h_hi) - np.maximum(i_lo, h_lo), 0.0, None)
    with np.errstate(invalid="ignore"):
        correction = np.maximum(np.where(np.isinf(h_len), 0.0, i_len / (2.0 * h_len)), 1.0)
    return _out(overlap / i_len * correction)


def sgpv(x: Summary, y: Summary, alpha_dm: float, region: NullRegion):
    """Second-generation p-value of the Welch interval against the null region."""
    return sgpv_from_intervals(welch_interval(x, y, alpha_dm), region.resolve(x.mean))


def cohens_d(x: Summary, y: Summary):
    """Difference in means over the pooled standard deviation."""
    pooled = np.sqrt(
        ((x.n - 1) * np.square(x.sd) + (y.n - 1) * np.square(y.sd)) / (x.n + y.n - 2)
    )
    return _out(np.subtract(y.mean, x.mean) / pooled)


def bf_from_differences(differences, lower: float, upper: float) -> float:
    """Posterior odds that the difference lies outside ``[lower, upper]``.

    Returns ``inf`` when no draw falls inside and ``0.0`` when all do.
    """
    d = np.asarray(differences)
    inside = np.count_nonzero((d >= lower) & (d <= upper))
    outside = d.size - inside
    if inside == 0:
        return math.inf
    return outside / inside


def bf_proxy(
    x: SampleSummary,
    y: SampleSummary,
    region: NullRegion,
    k: int = DEFAULT_K,
    seed: RngSeed | int | None = None,
) -> float:
    """Flat-prior posterior odds against the null region (smaller = stronger null)."""
    lo, hi = region.resolve(x.mean)
    return bf_from_differences(difference_draws(draw_posterior_means(x, y, k, seed)), lo, hi)


def rnd(seed: RngSeed | int | None = None) -> float:
    """A uniform (0, 1) draw: the coin-flip baseline."""
    return float(as_seed(seed).generator().random())


def evaluate_all(
    x: SampleSummary,
    y: SampleSummary,
    alpha_dm: float,
    region: NullRegion,
    k: int = DEFAULT_K,
    seed: RngSeed | int | None = None,
) -> list[CandidateValue]:
    """Every candidate statistic for one result, in :class:`StatisticId` order.

    delta_M, r delta_M and the Bayes-factor proxy share one posterior draw
    set.  A statistic that is undefined for these inputs is returned with
    ``value=nan`` and the reason in ``error``.
    """
    seed = as_seed(seed)
    cache = {}

    def draws():
        if "d" not in cache:
            cache["d"] = draw_posterior_means(x, y, k, seed)
        return cache["d"]

    def bf():
        lo, hi = region.resolve(x.mean)
        return bf_from_differences(difference_draws(draws()), lo, hi)

    compute = {
        StatisticId.XBAR_DM: lambda: xbar_dm(x, y),
        StatisticId.R_XBAR_DM: lambda: r_xbar_dm(x, y),
        StatisticId.S_DM: lambda: s_dm(x, y),
        StatisticId.RS_DM: lambda: rs_dm(x, y),
        StatisticId.BF: bf,
        StatisticId.P_N: lambda: welch_p(x, y),
        StatisticId.P_E: lambda: tost_p(x, y, region),
        StatisticId.P_DELTA: lambda: sgpv(x, y, alpha_dm, region),
        StatisticId.CD: lambda: cohens_d(x, y),
        StatisticId.DELTA_M: lambda: delta_m_from_draws(draws(), alpha_dm, Scale.RAW).value,
        StatisticId.R_DELTA_M: lambda: _r_delta_m(x, draws(), alpha_dm),
        StatisticId.RND: lambda: rnd(seed.derive("rnd")),
    }
    out = []
    for sid in StatisticId:
        try:
            out.append(CandidateValue(sid, float(compute[sid]()), DIRECTIONS[sid]))
        except StatisticalPreconditionError as exc:
            out.append(CandidateValue(sid, math.nan, DIRECTIONS[sid], f"{type(exc).__name__}: {exc}"))
    return out


def _r_delta_m(x: SampleSummary, d, alpha_dm: float) -> float:
    from .errors import ControlMeanNotPositive

    if x.mean <= 0:
        raise ControlMeanNotPositive(f"control mean must be > 0 for r delta_M, got {x.mean}")
    return delta_m_from_draws(d, alpha_dm, Scale.RELATIVE).value
