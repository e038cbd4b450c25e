import random

import pytest


@pytest.fixture
def rng():
    # fixed seed: sampled property tests must be reproducible
    return random.Random(1729)
