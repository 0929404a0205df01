"""Shared fixtures; hypothesis runs derandomized so failures reproduce."""
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "conifold",
    derandomize=True,
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("conifold")

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture
def repo_root() -> Path:
    return ROOT


@pytest.fixture
def inputs_dir() -> Path:
    return ROOT / "inputs"


@pytest.fixture
def golden_dir() -> Path:
    return ROOT / "golden"
