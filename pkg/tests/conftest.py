import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def complexes(radius: float = 10.0):
    """Finite complex numbers in the square of half-width ``radius``."""
    part = st.floats(-radius, radius, allow_nan=False, allow_infinity=False)
    return st.builds(complex, part, part)


def separated(points, min_sep: float) -> bool:
    pts = np.asarray(points, dtype=complex)
    if pts.size < 2:
        return True
    d = np.abs(pts[:, None] - pts[None, :])
    return bool(d[~np.eye(pts.size, dtype=bool)].min() > min_sep)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
