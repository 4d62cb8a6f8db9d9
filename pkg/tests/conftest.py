import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("GEOLOG_EXAMPLES", "60")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


def q(x) -> Fraction:
    return Fraction(x)


@pytest.fixture(scope="session")
def geographies():
    """Geographies of the surface fixtures, computed once per session."""
    from geolog import fixtures
    from geolog.geography import geography_of

    out = {}
    for name, make in [
        ("fig1", lambda: fixtures.fig1_pair(4)),
        ("cremona", fixtures.cremona_pair),
        ("quadric-2a", fixtures.quadric_2a_pair),
        ("plane-blowup-2b", fixtures.plane_blowup_2b_pair),
        ("fiber-modification-2c", fixtures.fiber_modification_2c_pair),
    ]:
        X, cube = make()
        out[name] = geography_of(X, cube)
    return out
