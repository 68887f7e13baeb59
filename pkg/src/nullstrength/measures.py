"""Population null-strength measures, ground-truth designations and 0-1 loss."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, replace

from .errors import TieGroundTruth


@dataclass(frozen=True)
class PopulationConfig:
    """Population parameters of one simulated two-group experiment."""

    mu_x: float
    mu_y: float
    var_x: float
    var_y: float
    m: int
    n: int
    alpha_dm: float = 0.05

    def __post_init__(self) -> None:
        if not (self.var_x > 0 and self.var_y > 0):
            raise ValueError("variances must be positive")
        for name in ("m", "n"):
            v = getattr(self, name)
            if int(v) != v or v < 2:
                raise ValueError(f"{name} must be an integer >= 2, got {v!r}")
            object.__setattr__(self, name, int(v))
        if not 0 < self.alpha_dm < 1:
            raise ValueError(f"alpha_dm must lie in (0, 1), got {self.alpha_dm!r}")

    @property
    def mu_dm(self) -> float:
        return self.mu_y - self.mu_x

    @property
    def sigma_d(self) -> float:
        return math.sqrt(self.var_x + self.var_y)

    @property
    def df_d(self) -> int:
        return self.m + self.n - 2

    @property
    def sigma_dm(self) -> float:
        """Sampling sd of the difference in sample means."""
        return math.sqrt(self.var_x / self.m + self.var_y / self.n)

    def with_(self, **changes) -> PopulationConfig:
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)


class MeasureId(str, enum.Enum):
    ABS_MU_DM = "abs_mu_dm"
    SIGMA_D = "sigma_d"
    DF_D = "df_d"
    ALPHA_DM = "alpha_dm"
    ABS_R_MU_DM = "abs_r_mu_dm"
    R_SIGMA_D = "r_sigma_d"

    @property
    def stronger_null_direction(self) -> str:
        """``"lower"`` or ``"higher"``: the direction of higher null strength."""
        return _DIRECTION[self]

    @property
    def relative(self) -> bool:
        return self in (MeasureId.ABS_R_MU_DM, MeasureId.R_SIGMA_D)

    @classmethod
    def parse(cls, name: str) -> MeasureId:
        """Accept canonical ids plus the short aliases ``mu_dm`` and ``r_mu_dm``."""
        return cls(_ALIASES.get(name, name))


_DIRECTION = {
    MeasureId.ABS_MU_DM: "lower",
    MeasureId.SIGMA_D: "lower",
    MeasureId.DF_D: "higher",
    # larger alpha means a narrower credible bound, hence a stronger null
    MeasureId.ALPHA_DM: "higher",
    MeasureId.ABS_R_MU_DM: "lower",
    MeasureId.R_SIGMA_D: "lower",
}

_ALIASES = {"mu_dm": "abs_mu_dm", "r_mu_dm": "abs_r_mu_dm", "df": "df_d", "alpha": "alpha_dm"}

RAW_MEASURES = (MeasureId.ABS_MU_DM, MeasureId.SIGMA_D, MeasureId.DF_D, MeasureId.ALPHA_DM)
RELATIVE_MEASURES = (MeasureId.ABS_R_MU_DM, MeasureId.R_SIGMA_D, MeasureId.DF_D, MeasureId.ALPHA_DM)


def measures(config: PopulationConfig) -> dict[MeasureId, float]:
    """All null-strength measures of ``config``.

    The relative entries are omitted when ``mu_x <= 0``.
    """
    out = {
        MeasureId.ABS_MU_DM: abs(config.mu_dm),
        MeasureId.SIGMA_D: config.sigma_d,
        MeasureId.DF_D: float(config.df_d),
        MeasureId.ALPHA_DM: config.alpha_dm,
    }
    if config.mu_x > 0:
        out[MeasureId.ABS_R_MU_DM] = abs(config.mu_dm / config.mu_x)
        out[MeasureId.R_SIGMA_D] = config.sigma_d / config.mu_x
    return out


class Winner(str, enum.Enum):
    EXP1 = "exp1_higher_ns"
    EXP2 = "exp2_higher_ns"
    TIE = "tie"

    def swapped(self) -> Winner:
        return {Winner.EXP1: Winner.EXP2, Winner.EXP2: Winner.EXP1}.get(self, self)


TIE_RTOL = 1e-9


def ground_truth(config1: PopulationConfig, config2: PopulationConfig, measure: MeasureId) -> Winner:
    """Which experiment has the higher null strength on ``measure``.

    Values within :data:`TIE_RTOL` of each other are a tie, so that equal
    relative quantities built on different control means compare equal.
    """
    measure = MeasureId(measure)
    if measure.relative and (config1.mu_x <= 0 or config2.mu_x <= 0):
        raise ValueError(f"{measure.value} needs positive control means")
    a = measures(config1)[measure]
    b = measures(config2)[measure]
    if math.isclose(a, b, rel_tol=TIE_RTOL, abs_tol=0.0):
        return Winner.TIE
    first = a < b if measure.stronger_null_direction == "lower" else a > b
    return Winner.EXP1 if first else Winner.EXP2


def loss(gt: Winner, prediction: Winner) -> int:
    """0-1 loss of a predicted designation against the ground truth."""
    gt, prediction = Winner(gt), Winner(prediction)
    if gt is Winner.TIE:
        raise TieGroundTruth("loss is undefined when the ground truth is a tie")
    return int(gt is not prediction)
