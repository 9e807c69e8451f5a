from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


def small_rationals(lo=-3, hi=3, denominators=(1, 2, 3)):
    return st.builds(lambda n, d: Fraction(n, d), st.integers(lo * 3, hi * 3),
                     st.sampled_from(denominators))
