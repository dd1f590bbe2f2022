import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from props import PROPERTIES

seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("name", list(PROPERTIES))
@settings(max_examples=40)
@given(seed=seeds)
def test_property(name, seed):
    problem = PROPERTIES[name](np.random.default_rng(seed))
    assert problem is None, f"seed {seed}: {problem}"
