import numpy as np
import pytest


@pytest.fixture
def gen():
    return np.random.default_rng(20240611)


def rel_err(a, b, ord=np.inf):
    a, b = np.asarray(a), np.asarray(b)
    return np.linalg.norm((a - b).ravel(), ord) / np.linalg.norm(np.asarray(b).ravel(), ord)
