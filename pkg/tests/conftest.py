from __future__ import annotations

import os
import random
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

# Hypothesis runs derandomized unless QASA_SEED is set, in which case the
# seed also feeds the hand-rolled samplers below.
settings.register_profile(
    "qasa",
    derandomize="QASA_SEED" not in os.environ,
    deadline=None,
    max_examples=40,
    database=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("qasa")


def seed() -> int:
    return int(os.environ.get("QASA_SEED", "20240917"))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(seed())


FIXTURES = Path(__file__).parent / "fixtures"
