import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from monopsony_lab import DetectionTech, LaborSupply, Policy, ProductionTech  # noqa: E402

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CONFIG_DIR = os.path.join(REPO, "configs")


@pytest.fixture
def tech():
    return ProductionTech(alpha=0.5)


@pytest.fixture
def supply():
    return LaborSupply(b=1.0, eta=1.4)


@pytest.fixture
def interior_policy():
    """Calibration with a single interior formality threshold."""
    return Policy(tau=0.3, c_f=0.05, delta=0.1, phi=0.2, detection=DetectionTech(l_bar=1.0, gamma=2.0))


@pytest.fixture
def config_dir():
    return CONFIG_DIR
