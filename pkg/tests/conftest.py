import numpy as np
import pytest


@pytest.fixture
def rng_np():
    """Seeded numpy generator for test-local random data."""
    return np.random.default_rng(20240817)
