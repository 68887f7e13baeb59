import pytest

from nullstrength.posterior import SampleSummary


@pytest.fixture
def chol_row1():
    """Control and experiment summaries of the first cholesterol null result."""
    return SampleSummary(3.45, 0.24, 6), SampleSummary(3.26, 0.22, 6)


@pytest.fixture
def chol_row2():
    return SampleSummary(1251.0, 161.0, 10), SampleSummary(1179.0, 143.0, 5)
