"""Risk simulation: how often does a statistic pick the stronger null?

Pairs of population configurations are generated so that one null-strength
measure decides which experiment has the higher null strength.  Samples
are drawn from both configurations, each candidate statistic predicts the
winner through its decision rule, and the 0-1 losses are averaged over
samples (comparison error) and over pairs (integrated error).

Sample summaries are drawn directly from their sampling distributions,
``xbar ~ N(mu, sigma^2 / n)`` and ``s^2 ~ sigma^2 chi2(n - 1) / (n - 1)``,
which is equivalent to simulating raw observations and reducing them.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, astuple, dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from . import candidates as cand
from .candidates import NullRegion, StatisticId, SummaryBatch, prefers_first
from .deltam import Scale, delta_m_from_draws
from .errors import RegimeUnattainable, StatisticalPreconditionError
from .measures import (
    RAW_MEASURES,
    RELATIVE_MEASURES,
    MeasureId,
    PopulationConfig,
    Winner,
    ground_truth,
)
from .posterior import DEFAULT_K, difference_draws, draw_posterior_means
from .rng import RngSeed, as_seed

#: Control means of the first and second experiment in every pair.
CONTROL_MEANS = (20.0, 200.0)
SIMULTANEOUS = "simultaneous"
RATIO_SAMPLES = 200


class Regime(str, enum.Enum):
    NULL = "null_results"
    POSITIVE = "positive_results"

    @classmethod
    def parse(cls, name: str) -> Regime:
        return cls({"null": "null_results", "positive": "positive_results"}.get(name, name))


# -- configuration designs --------------------------------------------------


@dataclass(frozen=True)
class Param:
    """How one generating parameter is chosen for a pair.

    ``vary``: the two windows are assigned to the experiments at random.
    ``shared``: one draw from ``low`` is used by both experiments.
    ``fixed``: ``low`` is the value.
    """

    mode: str
    low: tuple | float
    high: tuple | None = None
    integer: bool = False

    def draw(self, rng: np.random.Generator) -> tuple[float, float]:
        if self.mode == "fixed":
            return self.low, self.low
        if self.mode == "shared":
            v = self._uniform(rng, self.low)
            return v, v
        w1, w2 = (self.low, self.high) if rng.random() < 0.5 else (self.high, self.low)
        return self._uniform(rng, w1), self._uniform(rng, w2)

    def _uniform(self, rng, window):
        lo, hi = window
        if self.integer:
            return int(rng.integers(lo, hi, endpoint=True))
        return float(rng.uniform(lo, hi))


def vary(w1, w2, integer=False) -> Param:
    return Param("vary", tuple(w1), tuple(w2), integer)


def shared(window, integer=False) -> Param:
    return Param("shared", tuple(window), None, integer)


def fixed(value) -> Param:
    return Param("fixed", value)


@dataclass(frozen=True)
class Design:
    """Generating parameters of one investigation.

    ``effect`` is mu_DM (raw family) or r mu_DM (relative family);
    ``spread`` is sigma_D or r sigma_D.  Groups have equal size and variance.
    """

    effect: Param
    spread: Param
    n: Param = fixed(30)
    alpha: Param = fixed(0.05)


_ALPHA = vary((0.01, 0.08), (0.05, 0.20))
_RAW_N = vary((6, 20), (16, 40), integer=True)
_REL_N = vary((6, 18), (14, 30), integer=True)

DESIGNS: dict[tuple[Scale, Regime, str], Design] = {
    (Scale.RAW, Regime.NULL, "abs_mu_dm"): Design(vary((0.5, 3), (2, 4.5)), shared((20, 40)), fixed(50)),
    (Scale.RAW, Regime.NULL, "sigma_d"): Design(shared((0.5, 3)), vary((20, 35), (30, 45)), fixed(50)),
    (Scale.RAW, Regime.NULL, "df_d"): Design(shared((0, 2)), shared((8, 12)), _RAW_N),
    (Scale.RAW, Regime.NULL, "alpha_dm"): Design(shared((0, 1.2)), shared((8, 12)), fixed(30), _ALPHA),
    (Scale.RAW, Regime.NULL, SIMULTANEOUS): Design(
        vary((0.5, 1.5), (1, 2)), vary((20, 30), (25, 35)), vary((6, 15), (12, 20), integer=True), _ALPHA
    ),
    (Scale.RAW, Regime.POSITIVE, "abs_mu_dm"): Design(vary((0.5, 3), (2, 4.5)), shared((0.5, 2))),
    (Scale.RAW, Regime.POSITIVE, "sigma_d"): Design(shared((2, 4.5)), vary((0.5, 1.2), (1.0, 1.7))),
    (Scale.RAW, Regime.POSITIVE, "df_d"): Design(shared((2, 4)), shared((1, 2)), _RAW_N),
    (Scale.RAW, Regime.POSITIVE, "alpha_dm"): Design(shared((2, 4)), shared((1, 2)), fixed(30), _ALPHA),
    (Scale.RAW, Regime.POSITIVE, SIMULTANEOUS): Design(
        vary((4, 6), (5, 7)), vary((0.5, 1), (0.8, 1.3)), vary((6, 18), (14, 30), integer=True), _ALPHA
    ),
    (Scale.RELATIVE, Regime.NULL, "abs_r_mu_dm"): Design(
        vary((0.02, 0.12), (0.08, 0.18)), shared((0.8, 1.2)), fixed(50)
    ),
    (Scale.RELATIVE, Regime.NULL, "r_sigma_d"): Design(
        shared((0.02, 0.18)), vary((0.8, 1.1), (1.0, 1.3)), fixed(50)
    ),
    (Scale.RELATIVE, Regime.NULL, "df_d"): Design(shared((0, 0.035)), shared((0.15, 0.3)), _REL_N),
    (Scale.RELATIVE, Regime.NULL, "alpha_dm"): Design(
        shared((0, 0.075)), shared((0.5, 0.8)), fixed(30), _ALPHA
    ),
    (Scale.RELATIVE, Regime.NULL, SIMULTANEOUS): Design(
        vary((0.005, 0.02), (0.01, 0.03)),
        vary((0.2, 0.3), (0.25, 0.35)),
        vary((6, 15), (12, 20), integer=True),
        _ALPHA,
    ),
    (Scale.RELATIVE, Regime.POSITIVE, "abs_r_mu_dm"): Design(
        vary((0.05, 0.30), (0.20, 0.45)), shared((0.05, 0.2))
    ),
    (Scale.RELATIVE, Regime.POSITIVE, "r_sigma_d"): Design(
        shared((0.2, 0.45)), vary((0.05, 0.12), (0.10, 0.17))
    ),
    (Scale.RELATIVE, Regime.POSITIVE, "df_d"): Design(shared((0.2, 0.4)), shared((0.1, 0.2)), _REL_N),
    (Scale.RELATIVE, Regime.POSITIVE, "alpha_dm"): Design(
        shared((0.2, 0.4)), shared((0.1, 0.2)), fixed(30), _ALPHA
    ),
    (Scale.RELATIVE, Regime.POSITIVE, SIMULTANEOUS): Design(
        vary((0.2, 0.35), (0.3, 0.45)),
        vary((0.05, 0.1), (0.08, 0.13)),
        vary((6, 18), (14, 30), integer=True),
        _ALPHA,
    ),
}


def family_measures(family: Scale) -> tuple[MeasureId, ...]:
    return RELATIVE_MEASURES if Scale(family) is Scale.RELATIVE else RAW_MEASURES


def default_family(investigation) -> Scale:
    if investigation != SIMULTANEOUS and MeasureId.parse(str(getattr(investigation, "value", investigation))).relative:
        return Scale.RELATIVE
    return Scale.RAW


def default_region(family: Scale) -> NullRegion:
    """[-1, 1] raw, or [-10%, +10%] of the control sample mean."""
    if Scale(family) is Scale.RELATIVE:
        return NullRegion(-0.1, 0.1, Scale.RELATIVE)
    return NullRegion(-1.0, 1.0, Scale.RAW)


def _investigation_key(investigation) -> str:
    if investigation == SIMULTANEOUS:
        return SIMULTANEOUS
    return MeasureId.parse(str(getattr(investigation, "value", investigation))).value


# -- pairs --------------------------------------------------------------------


@dataclass(frozen=True)
class ConfigPair:
    exp1: PopulationConfig
    exp2: PopulationConfig
    independent_measure: MeasureId | None
    regime: Regime
    family: Scale = Scale.RAW

    @property
    def scored_measures(self) -> tuple[MeasureId, ...]:
        """Measures whose ground truth is scored: one, or all four when simultaneous."""
        if self.independent_measure is None:
            return family_measures(self.family)
        return (self.independent_measure,)

    def swapped(self) -> ConfigPair:
        return ConfigPair(self.exp2, self.exp1, self.independent_measure, self.regime, self.family)

    def to_dict(self) -> dict:
        return {
            "exp1": self.exp1.to_dict(),
            "exp2": self.exp2.to_dict(),
            "independent_measure": None if self.independent_measure is None else self.independent_measure.value,
            "regime": self.regime.value,
            "family": self.family.value,
        }


def sample_summaries(config: PopulationConfig, m_samples: int, rng: np.random.Generator):
    """``m_samples`` draws of both groups' sample summaries under ``config``."""
    sx, sy = math.sqrt(config.var_x), math.sqrt(config.var_y)
    m, n = config.m, config.n
    xbar = rng.normal(config.mu_x, sx / math.sqrt(m), m_samples)
    ybar = rng.normal(config.mu_y, sy / math.sqrt(n), m_samples)
    s_x = sx * np.sqrt(rng.chisquare(m - 1, m_samples) / (m - 1))
    s_y = sy * np.sqrt(rng.chisquare(n - 1, m_samples) / (n - 1))
    return SummaryBatch(xbar, s_x, m), SummaryBatch(ybar, s_y, n)


def t_critical(config: PopulationConfig) -> float:
    """``|t|`` quantile at ``alpha_dm`` with ``m + n - 1`` degrees of freedom."""
    return abs(float(stats.t.ppf(config.alpha_dm, config.m + config.n - 1)))


def expected_t_ratio(
    config: PopulationConfig, m_samples: int = RATIO_SAMPLES, seed: RngSeed | int | np.random.Generator | None = None
) -> float:
    """Monte Carlo mean Welch t-statistic divided by ``|t_critical|``.

    Configurations with ``|ratio| <= 1`` are classed as null results.
    """
    if m_samples < 30:
        raise ValueError(f"m_samples must be >= 30, got {m_samples}")
    rng = seed if isinstance(seed, np.random.Generator) else as_seed(seed).generator()
    xb, yb = sample_summaries(config, m_samples, rng)
    return float(np.mean(cand.welch_t(xb, yb))) / t_critical(config)


def in_regime(ratio: float, regime: Regime) -> bool:
    return abs(ratio) <= 1.0 if Regime(regime) is Regime.NULL else abs(ratio) > 1.0


def _build(family: Scale, mu_x: float, sign: float, effect: float, spread: float, n: int, alpha: float):
    scale = mu_x if family is Scale.RELATIVE else 1.0
    var = (spread * scale) ** 2 / 2.0
    return PopulationConfig(mu_x, mu_x + sign * effect * scale, var, var, n, n, alpha)


def generate_config_pairs(
    measure,
    regime: Regime | str,
    n_pairs: int,
    seed: RngSeed | int | None = None,
    family: Scale | str | None = None,
    design: Design | None = None,
    max_tries: int = 2000,
) -> list[ConfigPair]:
    """Generate pairs whose designations on ``measure`` are a fair coin.

    Parameters
    ----------
    measure : MeasureId or ``"simultaneous"``
        Independent measure, or ``"simultaneous"`` to vary all four measures
        of the family independently.
    regime : Regime
        Both configurations of every pair must fall in this expected t-ratio
        class; candidates outside it are rejected and redrawn.
    family : Scale, optional
        ``raw`` or ``relative`` measure family.  Defaults to the family of
        ``measure`` (raw for ``df_d``, ``alpha_dm`` and simultaneous).
    design : Design, optional
        Overrides the built-in generating windows.

    Raises
    ------
    RegimeUnattainable
        If ``max_tries`` candidates in a row are rejected.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    regime = Regime.parse(regime) if isinstance(regime, str) else regime
    key = _investigation_key(measure)
    family = default_family(key) if family is None else Scale(family)
    if design is None:
        try:
            design = DESIGNS[(family, regime, key)]
        except KeyError:
            raise ValueError(f"no design for {family.value} {key} investigation") from None
    independent = None if key == SIMULTANEOUS else MeasureId(key)
    scored = family_measures(family) if independent is None else (independent,)
    rng = as_seed(seed).derive("pairs", family.value, regime.value, key).generator()
    mu1, mu2 = CONTROL_MEANS
    pairs = []
    for _ in range(n_pairs):
        for _attempt in range(max_tries):
            e1, e2 = design.effect.draw(rng)
            s1, s2 = design.spread.draw(rng)
            n1, n2 = design.n.draw(rng)
            a1, a2 = design.alpha.draw(rng)
            sign1, sign2 = rng.choice((-1.0, 1.0), 2)
            c1 = _build(family, mu1, sign1, e1, s1, n1, a1)
            c2 = _build(family, mu2, sign2, e2, s2, n2, a2)
            if any(ground_truth(c1, c2, m) is Winner.TIE for m in scored):
                continue
            if in_regime(expected_t_ratio(c1, RATIO_SAMPLES, rng), regime) and in_regime(
                expected_t_ratio(c2, RATIO_SAMPLES, rng), regime
            ):
                pairs.append(ConfigPair(c1, c2, independent, regime, family))
                break
        else:
            raise RegimeUnattainable(
                f"no {regime.value} pair for {family.value} {key} within {max_tries} tries"
            )
    return pairs


@dataclass(frozen=True)
class IndependenceCheck:
    measure: MeasureId
    p_value: float | None
    shared: int
    n: int

    @property
    def degenerate(self) -> bool:
        """Constant designation (always one experiment, or always tied)."""
        return self.p_value is None


def verify_designation_independence(
    pairs: Sequence[ConfigPair], reference: MeasureId | None = None
) -> dict[MeasureId, IndependenceCheck]:
    """Binomial test of shared designations between ``reference`` and every other measure.

    Pairs where the other measure ties are left out.  A measure whose
    designation never changes across the remaining pairs is reported as
    degenerate, with no p-value.
    """
    if len(pairs) < 30:
        raise ValueError("need at least 30 pairs")
    reference = pairs[0].independent_measure if reference is None else MeasureId(reference)
    if reference is None:
        raise ValueError("simultaneous pairs need an explicit reference measure")
    family = pairs[0].family
    ref = [ground_truth(p.exp1, p.exp2, reference) for p in pairs]
    out = {}
    for m in family_measures(family):
        if m is reference:
            continue
        other = [ground_truth(p.exp1, p.exp2, m) for p in pairs]
        decided = [(a, b) for a, b in zip(ref, other) if b is not Winner.TIE]
        shared_count = sum(a is b for a, b in decided)
        if len({b for _, b in decided}) < 2:
            out[m] = IndependenceCheck(m, None, shared_count, len(decided))
        else:
            p = stats.binomtest(shared_count, len(decided), 0.5).pvalue
            out[m] = IndependenceCheck(m, float(p), shared_count, len(decided))
    return out


# -- evaluating statistics on sample batches -----------------------------------


_VECTORIZED = {
    StatisticId.XBAR_DM: lambda x, y, a, r: cand.xbar_dm(x, y),
    StatisticId.R_XBAR_DM: lambda x, y, a, r: cand.r_xbar_dm(x, y),
    StatisticId.S_DM: lambda x, y, a, r: cand.s_dm(x, y),
    StatisticId.RS_DM: lambda x, y, a, r: cand.rs_dm(x, y),
    StatisticId.P_N: lambda x, y, a, r: cand.welch_p(x, y),
    StatisticId.P_E: lambda x, y, a, r: cand.tost_p(x, y, r),
    StatisticId.P_DELTA: lambda x, y, a, r: cand.sgpv(x, y, a, r),
    StatisticId.CD: lambda x, y, a, r: cand.cohens_d(x, y),
}


def evaluate_batch(
    statistics: Iterable[StatisticId],
    x: SummaryBatch,
    y: SummaryBatch,
    alpha_dm: float,
    region: NullRegion,
    k: int = DEFAULT_K,
    seed: RngSeed | int | None = None,
) -> dict[StatisticId, np.ndarray]:
    """Candidate statistics for each sample in a batch; ``nan`` where undefined.

    Sample ``j`` draws its posterior from ``seed.derive(j)``; the
    stochastic statistics share that draw set.
    """
    seed = as_seed(seed)
    statistics = [StatisticId(s) for s in statistics]
    out = {}
    for sid in statistics:
        if sid in _VECTORIZED:
            out[sid] = np.asarray(_VECTORIZED[sid](x, y, alpha_dm, region), dtype=float)
        elif sid is StatisticId.RND:
            out[sid] = seed.derive("rnd").generator().random(len(x))
    posterior = [s for s in statistics if s in (StatisticId.BF, StatisticId.DELTA_M, StatisticId.R_DELTA_M)]
    if posterior:
        vals = {s: np.full(len(x), np.nan) for s in posterior}
        for j in range(len(x)):
            xj, yj = x[j], y[j]
            d = draw_posterior_means(xj, yj, k, seed.derive(j))
            for s in posterior:
                try:
                    if s is StatisticId.BF:
                        lo, hi = region.resolve(xj.mean)
                        vals[s][j] = cand.bf_from_differences(difference_draws(d), lo, hi)
                    elif s is StatisticId.DELTA_M:
                        vals[s][j] = delta_m_from_draws(d, alpha_dm, Scale.RAW).value
                    elif xj.mean > 0:
                        vals[s][j] = delta_m_from_draws(d, alpha_dm, Scale.RELATIVE).value
                except StatisticalPreconditionError:
                    pass
        out.update(vals)
    return {s: out[s] for s in statistics}


def experiment_seed(seed: RngSeed, pair_index: int, config: PopulationConfig) -> RngSeed:
    """Stream of one experiment; keyed by the configuration, not its position."""
    return seed.derive("experiment", pair_index, *astuple(config))


def pair_loss_counts(
    pair: ConfigPair,
    statistics: Sequence[StatisticId],
    region: NullRegion,
    m_samples: int,
    k: int,
    seed: RngSeed,
    pair_index: int = 0,
) -> dict[tuple[StatisticId, MeasureId], tuple[int, int]]:
    """Incorrect and failed decision counts over ``m_samples`` for each statistic and scored measure.

    Failures (statistic undefined on either sample) count as incorrect.
    """
    values = []
    for cfg in (pair.exp1, pair.exp2):
        s = experiment_seed(seed, pair_index, cfg)
        x, y = sample_summaries(cfg, m_samples, s.generator())
        values.append(evaluate_batch(statistics, x, y, cfg.alpha_dm, region, k, s))
    out = {}
    for sid in statistics:
        v1, v2 = values[0][sid], values[1][sid]
        failed = np.isnan(v1) | np.isnan(v2)
        with np.errstate(invalid="ignore"):
            first = np.asarray(prefers_first(sid, v1, v2))
        for measure in pair.scored_measures:
            truth_first = ground_truth(pair.exp1, pair.exp2, measure) is Winner.EXP1
            wrong = failed | (first != truth_first)
            out[(sid, measure)] = (int(np.count_nonzero(wrong)), int(np.count_nonzero(failed)))
    return out


def comparison_error(
    statistic_id: StatisticId,
    pair: ConfigPair,
    region: NullRegion | None = None,
    m_samples: int = 50,
    seed: RngSeed | int | None = None,
    k: int = DEFAULT_K,
    measure: MeasureId | None = None,
    pair_index: int = 0,
) -> float:
    """Mean 0-1 loss of one statistic on one configuration pair."""
    if m_samples < 50:
        raise ValueError(f"m_samples must be >= 50, got {m_samples}")
    region = default_region(pair.family) if region is None else region
    sid = StatisticId(statistic_id)
    measure = pair.scored_measures[0] if measure is None else MeasureId(measure)
    counts = pair_loss_counts(pair, [sid], region, m_samples, k, as_seed(seed), pair_index)
    return counts[(sid, measure)][0] / m_samples


# -- integrated error --------------------------------------------------------


@dataclass(frozen=True)
class ErrorReport:
    statistic_id: StatisticId
    measure: MeasureId
    regime: Regime
    error_rate: float
    n_configs: int
    m_samples_per_config: int
    binomial_p_vs_half: float
    seed: RngSeed
    family: Scale = Scale.RAW
    investigation: str = ""
    n_incorrect: int = 0
    n_failed: int = 0
    k: int = DEFAULT_K

    @property
    def n_decisions(self) -> int:
        return self.n_configs * self.m_samples_per_config

    def better_than_random(self, level: float = 0.01) -> bool:
        return self.error_rate < 0.5 and self.binomial_p_vs_half < level

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic_id.value,
            "measure": self.measure.value,
            "regime": self.regime.value,
            "error_rate": self.error_rate,
            "n_configs": self.n_configs,
            "m_samples": self.m_samples_per_config,
            "binomial_p": self.binomial_p_vs_half,
            "seed": self.seed.to_dict(),
            "family": self.family.value,
            "investigation": self.investigation,
            "n_incorrect": self.n_incorrect,
            "n_failed": self.n_failed,
            "k": self.k,
        }


def _score_chunk(args):
    pairs, start, statistics, region, m_samples, k, seed = args
    total: dict = {}
    for offset, pair in enumerate(pairs):
        for key, (wrong, failed) in pair_loss_counts(
            pair, statistics, region, m_samples, k, seed, start + offset
        ).items():
            w, f = total.get(key, (0, 0))
            total[key] = (w + wrong, f + failed)
    return total


def score_pairs(
    pairs: Sequence[ConfigPair],
    statistics: Sequence[StatisticId],
    region: NullRegion,
    m_samples: int,
    k: int,
    seed: RngSeed,
    workers: int | None = None,
) -> dict[tuple[StatisticId, MeasureId], tuple[int, int]]:
    """Summed ``(incorrect, failed)`` counts over all pairs.

    Exact integer sums, so the result does not depend on ``workers``.
    """
    workers = (os.cpu_count() or 1) if workers is None else max(1, int(workers))
    n_chunks = min(len(pairs), workers * 4)
    bounds = np.linspace(0, len(pairs), n_chunks + 1).astype(int)
    jobs = [
        (list(pairs[a:b]), int(a), list(statistics), region, m_samples, k, seed)
        for a, b in zip(bounds[:-1], bounds[1:])
        if b > a
    ]
    if workers == 1 or len(jobs) == 1:
        parts = map(_score_chunk, jobs)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_score_chunk, jobs))
    total: dict = {}
    for part in parts:
        for key, (w, f) in part.items():
            tw, tf = total.get(key, (0, 0))
            total[key] = (tw + w, tf + f)
    return total


def run_investigation(
    measure,
    regime: Regime | str,
    statistics: Iterable[StatisticId] = tuple(StatisticId),
    n_configs: int = 200,
    m_samples: int = 50,
    region: NullRegion | None = None,
    seed: RngSeed | int | None = None,
    family: Scale | str | None = None,
    k: int = DEFAULT_K,
    workers: int | None = None,
    pairs: Sequence[ConfigPair] | None = None,
) -> list[ErrorReport]:
    """Integrated error of several statistics on one investigation.

    All statistics are scored on the same generated pairs and samples.
    """
    regime = Regime.parse(regime) if isinstance(regime, str) else Regime(regime)
    key = _investigation_key(measure)
    family = default_family(key) if family is None else Scale(family)
    seed = as_seed(seed)
    region = default_region(family) if region is None else region
    statistics = [StatisticId(s) for s in statistics]
    if pairs is None:
        pairs = generate_config_pairs(key, regime, n_configs, seed, family)
    counts = score_pairs(pairs, statistics, region, m_samples, k, seed.derive("score"), workers)
    total = len(pairs) * m_samples
    reports = []
    for sid in statistics:
        for measure_id in pairs[0].scored_measures:
            wrong, failed = counts[(sid, measure_id)]
            reports.append(
                ErrorReport(
                    statistic_id=sid,
                    measure=measure_id,
                    regime=regime,
                    error_rate=wrong / total,
                    n_configs=len(pairs),
                    m_samples_per_config=m_samples,
                    binomial_p_vs_half=float(stats.binomtest(wrong, total, 0.5).pvalue),
                    seed=seed,
                    family=family,
                    investigation=key,
                    n_incorrect=wrong,
                    n_failed=failed,
                    k=k,
                )
            )
    return reports


def integrated_error(
    statistic_id: StatisticId,
    measure,
    regime: Regime | str,
    n_configs: int = 200,
    m_samples: int = 50,
    region: NullRegion | None = None,
    seed: RngSeed | int | None = None,
    family: Scale | str | None = None,
    k: int = DEFAULT_K,
    workers: int | None = None,
) -> ErrorReport:
    """Comparison error averaged over ``n_configs`` generated pairs."""
    if n_configs < 50:
        raise ValueError(f"n_configs must be >= 50, got {n_configs}")
    key = _investigation_key(measure)
    reports = run_investigation(
        key, regime, [statistic_id], n_configs, m_samples, region, seed, family, k, workers
    )
    if key == SIMULTANEOUS:
        raise ValueError("use run_investigation for simultaneous investigations")
    return reports[0]


def scaled_errors(reports: Iterable[ErrorReport]) -> dict[tuple, float]:
    """Error rates relative to random, scaled so the best statistic in each column is -1.

    Columns are ``(family, regime, investigation, measure)``.  A value of 0
    means random; positive values are worse than random.
    """
    reports = list(reports)
    best: dict[tuple, float] = {}
    for r in reports:
        col = (r.family, r.regime, r.investigation, r.measure)
        best[col] = min(best.get(col, 1.0), r.error_rate)
    out = {}
    for r in reports:
        col = (r.family, r.regime, r.investigation, r.measure)
        span = 0.5 - best[col]
        out[col + (r.statistic_id,)] = (r.error_rate - 0.5) / span if span > 0 else math.nan
    return out


# -- covariation -------------------------------------------------------------


@dataclass(frozen=True)
class CovariationResult:
    statistic_id: StatisticId
    measure: MeasureId
    rho: float
    ci: tuple[float, float]
    means: tuple[float, ...] = field(repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["statistic_id"] = self.statistic_id.value
        d["measure"] = self.measure.value
        return d


def default_series(measure: MeasureId, points: int = 8) -> list[PopulationConfig]:
    """Configurations ordered toward higher null strength on ``measure``.

    Raw series hold mu_X = 20, sigma_D = 5, n = 20, mu_DM = 1 except for
    the varied parameter; relative series hold mu_X = 100, r sigma_D = 0.3,
    r mu_DM = 0.1.
    """
    measure = MeasureId(measure)
    n_series = [6, 8, 10, 13, 17, 22, 30, 40]
    a_series = [0.01, 0.02, 0.04, 0.06, 0.09, 0.12, 0.16, 0.20]
    if points != 8:
        n_series = np.unique(np.geomspace(6, 40, points).round().astype(int)).tolist()
        a_series = np.linspace(0.01, 0.2, points).tolist()

    def raw(mu_dm=1.0, sigma_d=5.0, n=20, alpha=0.05):
        return PopulationConfig(20.0, 20.0 + mu_dm, sigma_d**2 / 2, sigma_d**2 / 2, n, n, alpha)

    def rel(r_mu=0.1, r_sigma=0.3, n=20, alpha=0.05):
        return raw(100.0 * r_mu, 100.0 * r_sigma, n, alpha).with_(mu_x=100.0, mu_y=100.0 * (1 + r_mu))

    if measure is MeasureId.ABS_MU_DM:
        return [raw(mu_dm=v) for v in np.linspace(4.0, 0.5, points)]
    if measure is MeasureId.SIGMA_D:
        return [raw(sigma_d=v) for v in np.linspace(10.0, 3.0, points)]
    if measure is MeasureId.ABS_R_MU_DM:
        return [rel(r_mu=v) for v in np.linspace(0.4, 0.05, points)]
    if measure is MeasureId.R_SIGMA_D:
        return [rel(r_sigma=v) for v in np.linspace(0.6, 0.15, points)]
    if measure is MeasureId.DF_D:
        return [raw(n=v) for v in n_series]
    return [raw(alpha=v) for v in a_series]


def relative_series(measure: MeasureId, points: int = 8) -> list[PopulationConfig]:
    """Series for the relative family; df and alpha series use mu_X = 100."""
    measure = MeasureId(measure)
    if measure in (MeasureId.DF_D, MeasureId.ALPHA_DM):
        return [
            c.with_(mu_x=100.0, mu_y=110.0, var_x=450.0, var_y=450.0)
            for c in default_series(measure, points)
        ]
    return default_series(measure, points)


def series_values(
    statistics: Sequence[StatisticId],
    series: Sequence[PopulationConfig],
    m_samples: int,
    region: NullRegion,
    k: int,
    seed: RngSeed,
) -> dict[StatisticId, np.ndarray]:
    """Statistic values of shape ``(len(series), m_samples)``."""
    rows: dict[StatisticId, list] = {StatisticId(s): [] for s in statistics}
    for i, cfg in enumerate(series):
        s = seed.derive("series", i, *astuple(cfg))
        x, y = sample_summaries(cfg, m_samples, s.generator())
        vals = evaluate_batch(rows, x, y, cfg.alpha_dm, region, k, s)
        for sid in rows:
            rows[sid].append(vals[sid])
    return {sid: np.vstack(v) for sid, v in rows.items()}


def _spearman_with_index(means: np.ndarray) -> np.ndarray:
    """Spearman rho of each row of ``means`` against 0..P-1."""
    ranks = stats.rankdata(means, axis=-1)
    idx = np.arange(1, means.shape[-1] + 1, dtype=float)
    rc = ranks - ranks.mean(axis=-1, keepdims=True)
    ic = idx - idx.mean()
    denom = np.sqrt((rc**2).sum(axis=-1) * (ic**2).sum())
    with np.errstate(invalid="ignore", divide="ignore"):
        return (rc * ic).sum(axis=-1) / denom


def covariation_from_values(
    values: np.ndarray,
    statistic_id: StatisticId,
    measure: MeasureId,
    n_boot: int = 1000,
    n_tests: int = 1,
    seed: RngSeed | int | None = None,
) -> CovariationResult:
    """Spearman rho of point index against mean value, with a bootstrap CI.

    The percentile interval has level ``1 - 0.05 / n_tests`` (Bonferroni).
    """
    sid = StatisticId(statistic_id)
    if sid in cand.COMPARED_BY_MAGNITUDE:
        values = np.abs(values)
    p, m = values.shape
    means = np.nanmean(values, axis=1)
    rho = float(_spearman_with_index(means))
    rng = as_seed(seed).derive("bootstrap", sid.value, MeasureId(measure).value).generator()
    idx = rng.integers(0, m, size=(n_boot, p, m))
    boot_means = np.nanmean(np.take_along_axis(values[None, :, :], idx, axis=2), axis=2)
    boot_rho = _spearman_with_index(boot_means)
    tail = 0.05 / n_tests / 2.0
    lo, hi = np.nanquantile(boot_rho, [tail, 1.0 - tail])
    return CovariationResult(sid, MeasureId(measure), rho, (float(lo), float(hi)), tuple(means.tolist()))


def covariation_study(
    statistic_id: StatisticId,
    measure: MeasureId,
    series: Sequence[PopulationConfig],
    m_samples: int = 1000,
    region: NullRegion | None = None,
    seed: RngSeed | int | None = None,
    k: int = DEFAULT_K,
    n_boot: int = 1000,
    n_tests: int = 48,
) -> CovariationResult:
    """Rank correlation of a statistic's mean with position along a series."""
    if len(series) < 5:
        raise ValueError("series needs at least 5 configurations")
    measure = MeasureId(measure)
    region = default_region(Scale.RELATIVE if measure.relative else Scale.RAW) if region is None else region
    seed = as_seed(seed)
    vals = series_values([statistic_id], series, m_samples, region, k, seed.derive(measure.value))
    return covariation_from_values(vals[StatisticId(statistic_id)], statistic_id, measure, n_boot, n_tests, seed)


def covariation_grid(
    statistics: Iterable[StatisticId] = tuple(StatisticId),
    family: Scale | str = Scale.RAW,
    m_samples: int = 1000,
    seed: RngSeed | int | None = None,
    k: int = DEFAULT_K,
    n_boot: int = 1000,
    n_tests: int = 48,
    points: int = 8,
) -> list[CovariationResult]:
    """Covariation of every statistic with every measure series of a family."""
    family = Scale(family)
    seed = as_seed(seed)
    region = default_region(family)
    statistics = [StatisticId(s) for s in statistics]
    make = relative_series if family is Scale.RELATIVE else default_series
    out = []
    for measure in family_measures(family):
        vals = series_values(
            statistics, make(measure, points), m_samples, region, k, seed.derive(family.value, measure.value)
        )
        for sid in statistics:
            out.append(covariation_from_values(vals[sid], sid, measure, n_boot, n_tests, seed))
    return out
