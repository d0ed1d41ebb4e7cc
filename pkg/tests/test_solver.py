import numpy as np
import pytest

from makeev.errors import DomainError
from makeev.services import equipart
from makeev.services.equipart import Hyperplane, HyperplaneArrangement, WeightedPointCloud
from makeev.services.solver import AnnealSchedule, arrangement_residual, solve_arrangement

QUICK = AnnealSchedule(initial_temperature=0.2, factor=0.2, stages=2)


def test_schedule_temperatures():
    assert AnnealSchedule(0.2, 0.2, 3).temperatures() == pytest.approx([0.2, 0.04, 0.008])


def test_schedule_from_settings(monkeypatch):
    monkeypatch.setenv("MAKEEV_ANNEAL_STAGES", "3")
    schedule = AnnealSchedule.from_settings()
    assert schedule.stages == 3
    assert len(schedule.temperatures()) == 3


def test_residual_is_zero_on_exact_quadrants(quadrant_arrangement, quadrant_mass):
    assert arrangement_residual(quadrant_arrangement, [quadrant_mass], 2) == pytest.approx(0.0, abs=1e-12)
    assert arrangement_residual(quadrant_arrangement, [quadrant_mass], 2, orthogonal=True) == pytest.approx(0.0, abs=1e-12)


def test_residual_sees_skew_normals(quadrant_mass):
    skew = HyperplaneArrangement(2, (
        Hyperplane([1.0, 0.0], 0.0),
        Hyperplane.from_raw([1.0, 1.0], 0.0),
    ))
    assert arrangement_residual(skew, [quadrant_mass], 1, orthogonal=True) > 0.5


def test_orthogonal_needs_room():
    mass = WeightedPointCloud(2, np.random.default_rng(0).normal(size=(10, 2)))
    with pytest.raises(DomainError):
        solve_arrangement([mass], 3, 2, orthogonal=True, restarts=1, schedule=QUICK)


def test_invalid_levels():
    mass = WeightedPointCloud(2, np.random.default_rng(0).normal(size=(10, 2)))
    with pytest.raises(DomainError):
        solve_arrangement([mass], 2, 3, restarts=1, schedule=QUICK)
    with pytest.raises(DomainError):
        solve_arrangement([], 1, 1)


def test_same_seed_same_answer():
    rng = np.random.default_rng(5)
    mass = WeightedPointCloud(2, rng.normal(size=(20, 2)))
    first = solve_arrangement([mass], 1, 1, restarts=2, seed=7, schedule=QUICK, workers=1)
    second = solve_arrangement([mass], 1, 1, restarts=2, seed=7, schedule=QUICK, workers=2)
    assert np.array_equal(first.arrangement.normals, second.arrangement.normals)
    assert np.array_equal(first.arrangement.offsets, second.arrangement.offsets)
    assert first.restart_residuals == second.restart_residuals
    assert first.best_restart == second.best_restart


def test_result_residual_matches_fourier_report():
    rng = np.random.default_rng(11)
    mass = WeightedPointCloud(2, rng.normal(size=(30, 2)))
    result = solve_arrangement([mass], 1, 1, restarts=2, seed=1, schedule=QUICK)
    report = equipart.check_equipartition(result.arrangement, [mass], 1)
    assert report.masses[0].max_relative_residual == pytest.approx(result.residual, abs=1e-9)
    assert len(result.restart_residuals) == 2


@pytest.mark.slow
def test_ham_sandwich():
    rng = np.random.default_rng(42)
    red = WeightedPointCloud(2, rng.normal(loc=(-2.0, 0.0), size=(50, 2)))
    blue = WeightedPointCloud(2, rng.normal(loc=(2.0, 1.0), size=(50, 2)))
    result = solve_arrangement([red, blue], 1, 1, restarts=20, seed=42)
    assert result.residual <= 0.01


@pytest.mark.slow
def test_two_lines_quarter_a_gaussian():
    rng = np.random.default_rng(3)
    mass = WeightedPointCloud(2, rng.normal(size=(200, 2)))
    result = solve_arrangement([mass], 2, 2, restarts=20, seed=3)
    assert result.residual <= 0.02


@pytest.mark.slow
def test_three_planes_pairwise_level():
    rng = np.random.default_rng(4)
    mass = WeightedPointCloud(3, rng.normal(size=(200, 3)))
    result = solve_arrangement([mass], 3, 2, restarts=20, seed=4)
    assert result.residual <= 0.05
