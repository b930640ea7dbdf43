import numpy as np
import pytest


def random_rotation(rng, d):
    """Haar-ish random element of SO(d) from a QR factorization."""
    a = rng.standard_normal((d, d))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, -1] = -q[:, -1]
    return q


def random_reflection(rng, d):
    """Random orthogonal matrix with determinant -1."""
    q = random_rotation(rng, d)
    q[:, 0] = -q[:, 0]
    return q


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
