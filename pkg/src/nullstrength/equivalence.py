"""Testing for a negligible effect with delta_M, and multi-analyst consensus.

delta_M is computed once; each analyst then applies their own threshold to
the stored result.  No thresholding step draws from the posterior again.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Hashable, Mapping

import numpy as np

from .deltam import DeltaMResult, Scale, _check_alpha
from .errors import IncompleteDecisionMatrix, ScaleMismatch
from .posterior import DEFAULT_K, SampleSummary, difference_draws, draw_posterior_means
from .rng import RngSeed


class Designation(str, enum.Enum):
    PRACTICALLY_EQUIVALENT = "practically_equivalent"
    NOT_PRACTICALLY_EQUIVALENT = "not_practically_equivalent"


@dataclass(frozen=True)
class EquivalenceDecision:
    threshold: float
    delta_m: DeltaMResult
    designation: Designation

    @property
    def equivalent(self) -> bool:
        return self.designation is Designation.PRACTICALLY_EQUIVALENT

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "delta_m": self.delta_m.to_dict(),
            "designation": self.designation.value,
        }


def test_negligible(
    result: DeltaMResult, threshold: float, kind: Scale | str | None = None
) -> EquivalenceDecision:
    """Reject ``H0: |mu_DM| >= threshold`` when ``delta_M < threshold``.

    Parameters
    ----------
    result : DeltaMResult
        A stored delta_M or r delta_M.
    threshold : float
        Positive bound of the null region, in the units of ``result``
        (a fraction of the control mean for r delta_M).
    kind : Scale, optional
        Scale the threshold is expressed on.  When given it must match
        ``result.kind``.

    Returns
    -------
    EquivalenceDecision
        ``practically_equivalent`` only under the strict inequality; a tie
        retains the null.
    """
    if not threshold > 0:
        raise ValueError(f"threshold must be positive, got {threshold!r}")
    if kind is not None and Scale(kind) is not result.kind:
        raise ScaleMismatch(
            f"{Scale(kind).value} threshold applied to a {result.kind.value} delta_M"
        )
    designation = (
        Designation.PRACTICALLY_EQUIVALENT
        if result.value < threshold
        else Designation.NOT_PRACTICALLY_EQUIVALENT
    )
    return EquivalenceDecision(float(threshold), result, designation)


test_negligible.__test__ = False  # not a pytest test despite the name


def consensus(
    decisions_by_analyst: Mapping[Hashable, Mapping[Hashable, EquivalenceDecision]],
) -> list:
    """Results every analyst designated practically equivalent.

    ``decisions_by_analyst`` maps analyst -> result id -> decision.  Every
    analyst must have decided the same set of results.  The returned ids
    keep the order of the first analyst's mapping.
    """
    if not decisions_by_analyst:
        raise IncompleteDecisionMatrix("no analysts given")
    analysts = list(decisions_by_analyst)
    ids = list(decisions_by_analyst[analysts[0]])
    expected = set(ids)
    for a in analysts[1:]:
        got = set(decisions_by_analyst[a])
        if got != expected:
            missing = sorted(map(str, expected ^ got))
            raise IncompleteDecisionMatrix(f"analyst {a!r} differs on results {missing}")
    return [
        rid
        for rid in ids
        if all(decisions_by_analyst[a][rid].equivalent for a in analysts)
    ]


def macb(
    x: SampleSummary,
    y: SampleSummary,
    alpha_dm: float = 0.05,
    k: int = DEFAULT_K,
    seed: RngSeed | int | None = None,
) -> float:
    """Maximum absolute credible bound of ``mu_Y - mu_X``.

    ``max(|L|, |U|)`` of the equal-tailed ``1 - alpha_dm`` posterior
    interval.  A display approximation of delta_M: close to it when the
    posterior sits far from zero, wider than it when centred on zero.
    """
    alpha_dm = _check_alpha(alpha_dm)
    d = difference_draws(draw_posterior_means(x, y, k, seed))
    lo, hi = np.quantile(d, [alpha_dm / 2.0, 1.0 - alpha_dm / 2.0])
    return float(max(abs(lo), abs(hi)))
