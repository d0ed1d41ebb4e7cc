"""Shared fixtures."""

import json

import numpy as np
import pytest

from makeev.config import get_settings
from makeev.services.equipart import Hyperplane, HyperplaneArrangement, WeightedPointCloud


@pytest.fixture(autouse=True)
def _fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def cell_limit(monkeypatch):
    """Call with a limit to lower MAKEEV_CELL_LIMIT for one test."""

    def _set(limit: int) -> None:
        monkeypatch.setenv("MAKEEV_CELL_LIMIT", str(limit))
        get_settings.cache_clear()

    return _set


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def quadrant_arrangement():
    """The coordinate lines x = 0 and y = 0 in the plane."""
    return HyperplaneArrangement(2, (Hyperplane([1.0, 0.0], 0.0), Hyperplane([0.0, 1.0], 0.0)))


@pytest.fixture
def quadrant_mass():
    return WeightedPointCloud(2, [[1, 1], [-1, 1], [-1, -1], [1, -1]])


@pytest.fixture
def quadrant_files(tmp_path):
    arrangement = tmp_path / "arrangement.json"
    arrangement.write_text(json.dumps({
        "d": 2,
        "hyperplanes": [{"a": [1.0, 0.0], "b": 0.0}, {"a": [0.0, 1.0], "b": 0.0}],
    }))
    masses = tmp_path / "masses.json"
    masses.write_text(json.dumps({
        "d": 2,
        "masses": [{"points": [[1, 1], [-1, 1], [-1, -1], [1, -1]]}],
    }))
    return arrangement, masses
