import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from weightlab import weights


@pytest.fixture(scope="session")
def corpus():
    return weights.reference_corpus()


@pytest.fixture()
def linear():
    """w(t) = t."""
    return weights.power_weight(1.0, 1.0)


@pytest.fixture()
def sqrt_weight():
    """w(t) = sqrt(t)."""
    return weights.power_weight(1.0, 0.5)
