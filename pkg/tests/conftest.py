import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


def random_state(rng, real=False):
    psi = rng.normal(size=(2, 2, 2))
    if not real:
        psi = psi + 1j * rng.normal(size=(2, 2, 2))
    return psi / np.linalg.norm(psi)


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_invertible(rng):
    while True:
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if abs(np.linalg.det(m)) > 0.2:
            return m


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
