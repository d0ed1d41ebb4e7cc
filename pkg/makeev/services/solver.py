"""
Arrangement Solver

Numerically searches for k hyperplanes that l-of-k equipartition given
discrete masses (and, optionally, have pairwise orthogonal normals).

Each restart:
  1. works in normalized coordinates (all points centred and scaled into the
     unit ball, every mass rescaled to total weight 1);
  2. minimizes the smoothed objective
        sum_masses sum_{h in E_{l,k}} c~_h^2  +  [orthogonal] sum_{r<s} <a_r, a_s>^2
     with L-BFGS-B once per annealing stage, where the half-space indicator
     is replaced by a logistic of the signed distance at temperature tau;
  3. polishes the result by random perturbations judged with the exact
     boundary-split residual.

Restarts run in a thread pool. Restart r draws from default_rng([seed, r]),
so the outcome does not depend on scheduling; ties go to the lowest index.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from makeev.config import get_settings
from makeev.errors import DomainError
from makeev.services.equipart import (
    Hyperplane,
    HyperplaneArrangement,
    WeightedPointCloud,
    check_orthogonality,
    equipartition_set,
    sign_coefficients,
)

logger = logging.getLogger(__name__)

POLISH_STEPS = 400
POLISH_PATIENCE = 40
POLISH_INITIAL_STEP = 0.05


@dataclass(frozen=True)
class AnnealSchedule:
    initial_temperature: float
    factor: float
    stages: int

    @classmethod
    def from_settings(cls) -> "AnnealSchedule":
        s = get_settings()
        return cls(s.anneal_initial_temperature, s.anneal_factor, s.anneal_stages)

    def temperatures(self) -> List[float]:
        return [self.initial_temperature * self.factor ** n for n in range(self.stages)]


@dataclass
class SolveResult:
    arrangement: HyperplaneArrangement
    residual: float
    best_restart: int
    restart_residuals: List[float]


# ---------------------------------------------------------------------------
# Residual (exact boundary rule)
# ---------------------------------------------------------------------------

def arrangement_residual(
    arrangement: HyperplaneArrangement,
    masses: Sequence[WeightedPointCloud],
    l: int,
    orthogonal: bool = False,
    boundary_eps: Optional[float] = None,
) -> float:
    """
    max over masses and h in E_{l,k} of |c_h| / (total / 2^k), maxed with
    max |<a_r, a_s>| when ``orthogonal``.
    """
    k = arrangement.k
    e_set = equipartition_set(l, k)
    worst = 0.0
    for mass in masses:
        coeffs = sign_coefficients(arrangement, mass, boundary_eps)
        worst = max(worst, float(np.max(np.abs(coeffs[e_set]))) * 2 ** k / mass.total)
    if orthogonal and k >= 2:
        worst = max(worst, max(abs(v.inner_product) for v in check_orthogonality(arrangement)))
    return worst


# ---------------------------------------------------------------------------
# Normalized problem
# ---------------------------------------------------------------------------

class _Problem:
    """Masses in normalized coordinates plus the constraint index sets."""

    def __init__(self, masses: Sequence[WeightedPointCloud], k: int, l: int, orthogonal: bool):
        d = masses[0].d
        if any(m.d != d for m in masses):
            raise DomainError("All masses must live in the same dimension")
        if orthogonal and k > d:
            raise DomainError(f"{k} pairwise orthogonal normals do not fit in R^{d}")

        all_points = np.concatenate([m.points for m in masses])
        self.center = all_points.mean(axis=0)
        self.radius = float(np.max(np.linalg.norm(all_points - self.center, axis=1))) or 1.0

        self.d, self.k, self.l, self.orthogonal = d, k, l, orthogonal
        self.points = [(m.points - self.center) / self.radius for m in masses]
        self.weights = [m.weights / m.total for m in masses]
        self.masks = [((h >> np.arange(k)) & 1).astype(bool) for h in equipartition_set(l, k)]
        self.normalized_masses = [
            WeightedPointCloud(d, p, w) for p, w in zip(self.points, self.weights)
        ]
        self.pairs = np.triu_indices(k, 1)

    @staticmethod
    def unit_rows(theta: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(theta, axis=1, keepdims=True)
        return theta / np.where(norms == 0, 1.0, norms)

    def smoothed(self, flat: np.ndarray, tau: float) -> float:
        theta = self.unit_rows(flat.reshape(self.k, self.d + 1))
        a, b = theta[:, :-1], theta[:, -1]
        total = 0.0
        for points, weights in zip(self.points, self.weights):
            sigma = np.tanh((points @ a.T - b) / (2.0 * tau))
            for mask in self.masks:
                c = weights @ np.prod(sigma[:, mask], axis=1)
                total += c * c
        if self.orthogonal:
            gram = a @ a.T
            total += float(np.sum(gram[self.pairs] ** 2))
        return float(total)

    def arrangement(self, theta: np.ndarray) -> HyperplaneArrangement:
        theta = self.unit_rows(theta)
        return HyperplaneArrangement(
            self.d, tuple(Hyperplane(row[:-1], row[-1]) for row in theta)
        )

    def exact(self, theta: np.ndarray) -> float:
        try:
            arrangement = self.arrangement(theta)
        except DomainError:
            # a normal collapsed to zero
            return float("inf")
        return arrangement_residual(arrangement, self.normalized_masses, self.l, self.orthogonal)

    def to_original(self, theta: np.ndarray) -> HyperplaneArrangement:
        """<a, y> = b with y = (x - c) / r  <=>  <a, x> = b r + <a, c>."""
        theta = self.unit_rows(theta)
        return HyperplaneArrangement(
            self.d,
            tuple(
                Hyperplane.from_raw(row[:-1], row[-1] * self.radius + float(row[:-1] @ self.center))
                for row in theta
            ),
        )


def _polish(problem: _Problem, theta: np.ndarray, rng: np.random.Generator) -> Tuple[np.ndarray, float]:
    best, best_res = theta, problem.exact(theta)
    step, stale = POLISH_INITIAL_STEP, 0
    for _ in range(POLISH_STEPS):
        if best_res == 0.0:
            break
        trial = problem.unit_rows(best + step * rng.normal(size=best.shape))
        res = problem.exact(trial)
        if res <= best_res:
            if res < best_res:
                stale = 0
            best, best_res = trial, res
        else:
            stale += 1
        if stale >= POLISH_PATIENCE:
            step, stale = step / 2, 0
    return best, best_res


def _run_restart(problem: _Problem, schedule: AnnealSchedule, seed: int, restart: int) -> Tuple[np.ndarray, float]:
    rng = np.random.default_rng([seed, restart])
    theta = rng.normal(size=(problem.k, problem.d + 1))
    theta[:, -1] *= 0.1
    theta = problem.unit_rows(theta)

    for tau in schedule.temperatures():
        result = minimize(problem.smoothed, theta.ravel(), args=(tau,), method="L-BFGS-B")
        theta = problem.unit_rows(result.x.reshape(problem.k, problem.d + 1))

    theta, residual = _polish(problem, theta, rng)
    logger.info(f"Restart {restart}: residual {residual:.4g}")
    return theta, residual


def solve_arrangement(
    masses: Sequence[WeightedPointCloud],
    k: int,
    l: int,
    orthogonal: bool = False,
    restarts: Optional[int] = None,
    seed: int = 0,
    schedule: Optional[AnnealSchedule] = None,
    workers: Optional[int] = None,
) -> SolveResult:
    """Best-of-restarts arrangement; nonconvergence shows up as a large residual."""
    if not masses:
        raise DomainError("At least one mass is required")
    if k < 1 or l < 1 or l > k:
        raise DomainError(f"Need 1 <= l <= k, got l={l}, k={k}")

    settings = get_settings()
    restarts = restarts or settings.solver_restarts
    schedule = schedule or AnnealSchedule.from_settings()
    problem = _Problem(masses, k, l, orthogonal)

    logger.info(f"Solving k={k}, l={l}, orthogonal={orthogonal} with {restarts} restarts, seed {seed}")
    with ThreadPoolExecutor(max_workers=workers or settings.workers) as pool:
        outcomes = list(pool.map(lambda r: _run_restart(problem, schedule, seed, r), range(restarts)))

    residuals = [res for _, res in outcomes]
    best = min(range(restarts), key=lambda r: (residuals[r], r))
    arrangement = problem.to_original(outcomes[best][0])
    residual = arrangement_residual(arrangement, masses, l, orthogonal)
    logger.info(f"Best restart {best}: residual {residual:.4g}")
    return SolveResult(arrangement=arrangement, residual=residual, best_restart=best, restart_residuals=residuals)
