import numpy as np
import pytest

from clex.corpus import PeriodSlice, PeriodSpec


@pytest.fixture
def make_slice():
    """Build a PeriodSlice from raw sentences."""

    def _make(sentences, name="T", years=(1, 100)):
        return PeriodSlice(
            period=PeriodSpec(name, *years),
            sentences=[list(s) for s in sentences],
            charter_count=len(sentences),
        )

    return _make


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
