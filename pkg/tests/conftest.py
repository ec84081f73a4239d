from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from heckelab.scalar import Scalar

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixture_path():
    return lambda name: str(FIXTURES / name)


small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def scalars(draw, max_terms=4, span=6):
    n = draw(st.integers(0, max_terms))
    coeffs = {draw(st.integers(-span, span)): draw(small_fractions) for _ in range(n)}
    return Scalar(coeffs)
