import math

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")


def d_trap_oracle(lam: float, z: float) -> float:
    """Trap-convention D via scipy's standard-convention pbdv."""
    from scipy.special import pbdv

    return 2.0 ** (lam / 2.0) * pbdv(lam, math.sqrt(2.0) * z)[0]


def dprime_trap_oracle(lam: float, z: float) -> float:
    from scipy.special import pbdv

    return 2.0 ** (lam / 2.0) * math.sqrt(2.0) * pbdv(lam, math.sqrt(2.0) * z)[1]


@pytest.fixture
def rel():
    def _rel(a, b):
        return abs(a - b) / max(abs(b), 1e-300)
    return _rel
