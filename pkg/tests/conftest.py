"""Shared strategies and hypothesis settings for the test suite."""

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from rcskit.poly import GaussianRational, Poly

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


st_fraction = st.fractions(
    min_value=Fraction(-8), max_value=Fraction(8), max_denominator=8
)

st_gaussian_rational = st.builds(GaussianRational, st_fraction, st_fraction)


def st_exact_poly(max_degree=6, allow_zero=True):
    min_size = 0 if allow_zero else 1
    base = st.lists(st_gaussian_rational, min_size=min_size, max_size=max_degree + 1)
    strat = base.map(Poly.exact)
    if not allow_zero:
        strat = strat.filter(lambda p: not p.is_zero)
    return strat


st_theta_fraction = st.fractions(
    min_value=Fraction(-1), max_value=Fraction(1), max_denominator=16
)


@pytest.fixture
def rng_seed():
    return 20240817
