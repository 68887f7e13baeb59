"""Most difference in means statistics for the strength of null results."""

from importlib.metadata import PackageNotFoundError, version

from .candidates import CandidateValue, NullRegion, StatisticId, evaluate_all
from .deltam import DeltaMResult, Scale, compute_delta_m, compute_r_delta_m, credibility_rate
from .equivalence import Designation, EquivalenceDecision, consensus, macb, test_negligible
from .errors import (
    ControlMeanNotPositive,
    ControlMeanZero,
    ControlNearZero,
    StatisticalPreconditionError,
)
from .kernels import BACKEND
from .measures import MeasureId, PopulationConfig, Winner, ground_truth, loss
from .posterior import SampleSummary, draw_posterior_means
from .rng import RngSeed

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover - running from a source tree
    __version__ = "0+unknown"

__all__ = [
    "BACKEND",
    "CandidateValue",
    "ControlMeanNotPositive",
    "ControlMeanZero",
    "ControlNearZero",
    "DeltaMResult",
    "Designation",
    "EquivalenceDecision",
    "MeasureId",
    "NullRegion",
    "PopulationConfig",
    "RngSeed",
    "SampleSummary",
    "Scale",
    "StatisticId",
    "StatisticalPreconditionError",
    "Winner",
    "compute_delta_m",
    "compute_r_delta_m",
    "consensus",
    "credibility_rate",
    "draw_posterior_means",
    "evaluate_all",
    "ground_truth",
    "loss",
    "macb",
    "test_negligible",
]
