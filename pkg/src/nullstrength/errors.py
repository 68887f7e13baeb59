"""Exception types raised by nullstrength."""


class StatisticalPreconditionError(ValueError):
    """Inputs are well-formed but the requested statistic is undefined for them."""


class DegenerateSample(ValueError):
    """A sample summary has n < 2 or a non-positive standard deviation."""


class DrawCountTooSmall(ValueError):
    """Fewer Monte Carlo draws were requested than the supported minimum."""


class EmptyDraws(ValueError):
    """An empty draw array was passed to a quantile routine."""


class ControlNearZero(StatisticalPreconditionError):
    """Too much posterior mass of the control mean lies at or below zero.

    The relative difference in means is unstable in this case; report the raw
    statistic instead.
    """


class ControlMeanNotPositive(StatisticalPreconditionError):
    """The relative statistic requires a positive control sample mean."""


class ControlMeanZero(StatisticalPreconditionError, ZeroDivisionError):
    """A relative quantity was requested with a control sample mean of zero."""


class ScaleMismatch(ValueError):
    """A raw threshold was applied to a relative result, or vice versa."""


class IncompleteDecisionMatrix(ValueError):
    """Analysts did not all decide the same set of results."""


class TieGroundTruth(ValueError):
    """Loss is undefined when the ground truth designation is a tie."""


class RegimeUnattainable(RuntimeError):
    """Rejection sampling could not place a configuration pair in the regime."""


class SchemaMismatch(ValueError):
    """A study table header does not match the expected column set."""
