"""
Equipartition Verification

Discrete masses (weighted point clouds), hyperplane arrangements and the
Fourier test for l-of-k equipartitions.

Regions and characters are indexed by integers: g in Z_2^k is encoded as
sum g_i 2^{i-1}, so bit i-1 says on which side of hyperplane i a region
lies (0 = positive side <a, x> > b, 1 = negative side). A point within
``boundary_eps`` of a hyperplane puts half of its weight on each side.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import hadamard
from scipy.spatial.distance import pdist
from scipy.stats import special_ortho_group

from makeev.config import get_settings
from makeev.errors import DomainError
from makeev.models.schemas import FourierReport, MassFourier, OrthogonalityVerdict

logger = logging.getLogger(__name__)

# |a|^2 + b^2 must equal 1 within this tolerance
SPHERE_TOL = 1e-12


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """H = {u : <u, a> = b} with (a, b) on the unit sphere and a != 0."""
    a: np.ndarray
    b: float

    def __post_init__(self):
        a = _frozen(self.a)
        if a.ndim != 1 or a.size < 1:
            raise DomainError("Hyperplane normal must be a nonempty vector")
        if not np.any(a):
            raise DomainError("Hyperplane normal a = 0 describes a hyperplane at infinity")
        norm = float(a @ a + self.b ** 2)
        if abs(norm - 1.0) > SPHERE_TOL:
            raise DomainError(f"|a|^2 + b^2 = {norm}, expected 1", {"norm": norm})
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", float(self.b))

    @classmethod
    def from_raw(cls, a: Sequence[float], b: float) -> "Hyperplane":
        """Rescale (a, b) onto the unit sphere; the hyperplane itself is unchanged."""
        vec = np.array(list(a) + [b], dtype=float)
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise DomainError("Hyperplane coefficients are all zero")
        return cls(vec[:-1] / norm, vec[-1] / norm)

    @property
    def d(self) -> int:
        return int(self.a.size)

    def negated(self) -> "Hyperplane":
        return Hyperplane(-self.a, -self.b)


@dataclass(frozen=True, eq=False)
class HyperplaneArrangement:
    d: int
    hyperplanes: Tuple[Hyperplane, ...]

    def __post_init__(self):
        planes = tuple(self.hyperplanes)
        if not planes:
            raise DomainError("An arrangement needs at least one hyperplane")
        for i, h in enumerate(planes, start=1):
            if h.d != self.d:
                raise DomainError(f"Hyperplane {i} lives in R^{h.d}, arrangement in R^{self.d}")
        object.__setattr__(self, "hyperplanes", planes)

    @property
    def k(self) -> int:
        return len(self.hyperplanes)

    @property
    def normals(self) -> np.ndarray:
        return np.stack([h.a for h in self.hyperplanes])

    @property
    def offsets(self) -> np.ndarray:
        return np.array([h.b for h in self.hyperplanes])


@dataclass(frozen=True, eq=False)
class WeightedPointCloud:
    """A discrete mass: points in R^d with positive weights."""
    d: int
    points: np.ndarray
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        points = _frozen(self.points)
        if points.ndim != 2 or points.shape[1] != self.d or points.shape[0] < 1:
            raise DomainError(f"Points must form an (n, {self.d}) array, got shape {points.shape}")
        weights = np.ones(points.shape[0]) if self.weights is None else self.weights
        weights = _frozen(weights)
        if weights.shape != (points.shape[0],):
            raise DomainError(f"Expected {points.shape[0]} weights, got {weights.shape[0]}")
        if np.any(weights <= 0):
            raise DomainError("Weights must be positive")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @property
    def total(self) -> float:
        return float(self.weights.sum())

    @property
    def diameter(self) -> float:
        if self.points.shape[0] < 2:
            return 0.0
        return float(pdist(self.points).max())


# ---------------------------------------------------------------------------
# Z_2^k
# ---------------------------------------------------------------------------

def group_elements(k: int) -> np.ndarray:
    return np.arange(2 ** k)


def weight(h: int) -> int:
    return bin(h).count("1")


def character(h: int, g: int) -> int:
    """chi_h(g) = (-1)^{<h, g>}."""
    return -1 if weight(h & g) % 2 else 1


def equipartition_set(l: int, k: int) -> List[int]:
    """E_{l,k}: nonzero h of Hamming weight at most l, ascending."""
    if l < 1 or l > k:
        raise DomainError(f"Need 1 <= l <= k, got l={l}, k={k}", {"l": l, "k": k})
    return [h for h in range(1, 2 ** k) if weight(h) <= l]


# ---------------------------------------------------------------------------
# Region masses and Fourier coefficients
# ---------------------------------------------------------------------------

def default_boundary_eps(mass: WeightedPointCloud) -> float:
    scale = get_settings().boundary_eps_scale
    return scale * (mass.diameter or 1.0)


def _check_dims(arrangement: HyperplaneArrangement, mass: WeightedPointCloud) -> None:
    if arrangement.d != mass.d:
        raise DomainError(
            f"Arrangement lives in R^{arrangement.d}, mass in R^{mass.d}",
            {"arrangement_d": arrangement.d, "mass_d": mass.d},
        )


def side_probabilities(arrangement: HyperplaneArrangement, mass: WeightedPointCloud, boundary_eps: float) -> np.ndarray:
    """(n, k) array: share of each point on the positive side of each hyperplane (0, 1/2 or 1)."""
    s = mass.points @ arrangement.normals.T - arrangement.offsets
    probs = np.where(s > 0, 1.0, 0.0)
    probs[np.abs(s) <= boundary_eps] = 0.5
    return probs


def table_from_probabilities(probs: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """f(g) = sum_x w_x prod_i (p_i if g_i = 0 else 1 - p_i)."""
    k = probs.shape[1]
    table = np.empty(2 ** k)
    for g in range(2 ** k):
        bits = (g >> np.arange(k)) & 1
        factors = np.where(bits == 0, probs, 1.0 - probs)
        table[g] = weights @ np.prod(factors, axis=1)
    return table


def region_masses(
    arrangement: HyperplaneArrangement,
    mass: WeightedPointCloud,
    boundary_eps: Optional[float] = None,
) -> np.ndarray:
    """f(g) for every region g; sums to the total weight."""
    _check_dims(arrangement, mass)
    eps = default_boundary_eps(mass) if boundary_eps is None else boundary_eps
    return table_from_probabilities(side_probabilities(arrangement, mass, eps), mass.weights)


def fourier_coefficients(table: Sequence[float]) -> np.ndarray:
    """c_h = 2^{-k} sum_g f(g) chi_h(g), via the Sylvester Hadamard matrix."""
    f = np.asarray(table, dtype=float)
    n = f.size
    if n < 2 or n & (n - 1):
        raise DomainError(f"Region table length {n} is not 2^k with k >= 1")
    return hadamard(n) @ f / n


def sign_coefficients(
    arrangement: HyperplaneArrangement,
    mass: WeightedPointCloud,
    boundary_eps: Optional[float] = None,
) -> np.ndarray:
    """
    c_h in product form: 2^{-k} sum_x w_x prod_{i in h} sgn(<a_i, x> - b_i),
    with sgn = 0 inside the boundary band.
    """
    _check_dims(arrangement, mass)
    eps = default_boundary_eps(mass) if boundary_eps is None else boundary_eps
    signs = 2.0 * side_probabilities(arrangement, mass, eps) - 1.0
    k = arrangement.k
    coeffs = np.empty(2 ** k)
    for h in range(2 ** k):
        chosen = ((h >> np.arange(k)) & 1).astype(bool)
        coeffs[h] = mass.weights @ np.prod(signs[:, chosen], axis=1)
    return coeffs / 2 ** k


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------

def check_orthogonality(arrangement: HyperplaneArrangement, tol: float = 1e-9) -> List[OrthogonalityVerdict]:
    """One verdict |<a_r, a_s>| <= tol per pair r < s (1-based)."""
    if arrangement.k < 2:
        raise DomainError("Orthogonality needs at least two hyperplanes")
    verdicts = []
    normals = arrangement.normals
    for r, s in itertools.combinations(range(arrangement.k), 2):
        ip = float(normals[r] @ normals[s])
        verdicts.append(OrthogonalityVerdict(r=r + 1, s=s + 1, inner_product=ip, passed=abs(ip) <= tol))
    return verdicts


def check_equipartition(
    arrangement: HyperplaneArrangement,
    masses: Sequence[WeightedPointCloud],
    l: int,
    rel_tol: float = 1e-9,
    boundary_eps: Optional[float] = None,
    orthogonal: bool = False,
    ortho_tol: Optional[float] = None,
) -> FourierReport:
    """
    Fourier verdict per mass: max_{h in E_{l,k}} |c_h| <= rel_tol * total / 2^k.

    With ``orthogonal`` the pairwise normal products are checked as well
    (tolerance ``ortho_tol``, default ``rel_tol``).
    """
    k = arrangement.k
    e_set = equipartition_set(l, k)
    reports = []
    for n, mass in enumerate(masses, start=1):
        table = region_masses(arrangement, mass, boundary_eps)
        coeffs = fourier_coefficients(table)
        scale = mass.total / 2 ** k
        residual = float(np.max(np.abs(coeffs[e_set]))) / scale
        reports.append(
            MassFourier(
                total_weight=mass.total,
                region_masses=table.tolist(),
                coefficients=coeffs.tolist(),
                max_relative_residual=residual,
                passed=residual <= rel_tol,
            )
        )
        logger.debug(f"Mass {n}: relative residual {residual:.3e}")

    ortho = None
    if orthogonal:
        ortho = check_orthogonality(arrangement, rel_tol if ortho_tol is None else ortho_tol)

    return FourierReport(l=l, k=k, rel_tol=rel_tol, equipartition_set=e_set, masses=reports, orthogonality=ortho)


def subset_arrangement(arrangement: HyperplaneArrangement, indices: Sequence[int]) -> HyperplaneArrangement:
    """The sub-arrangement of the given 1-based hyperplanes."""
    return HyperplaneArrangement(arrangement.d, tuple(arrangement.hyperplanes[i - 1] for i in indices))


def subset_equipartition(
    arrangement: HyperplaneArrangement,
    mass: WeightedPointCloud,
    l: int,
    rel_tol: float = 1e-9,
    boundary_eps: Optional[float] = None,
) -> bool:
    """
    Brute force: every l hyperplanes cut the mass into 2^l regions of
    mass total / 2^l (within rel_tol * total / 2^l).
    """
    if l < 1 or l > arrangement.k:
        raise DomainError(f"Need 1 <= l <= k, got l={l}, k={arrangement.k}")
    target = mass.total / 2 ** l
    for subset in itertools.combinations(range(1, arrangement.k + 1), l):
        table = region_masses(subset_arrangement(arrangement, subset), mass, boundary_eps)
        if np.max(np.abs(table - target)) > rel_tol * target:
            return False
    return True


# ---------------------------------------------------------------------------
# Symmetries
# ---------------------------------------------------------------------------

def negate_hyperplane(arrangement: HyperplaneArrangement, i: int) -> HyperplaneArrangement:
    """Swap the sides of hyperplane i (1-based): x_i -> -x_i."""
    if i < 1 or i > arrangement.k:
        raise DomainError(f"Hyperplane index {i} outside 1..{arrangement.k}")
    planes = list(arrangement.hyperplanes)
    planes[i - 1] = planes[i - 1].negated()
    return HyperplaneArrangement(arrangement.d, tuple(planes))


def random_rotation(d: int, rng: np.random.Generator) -> np.ndarray:
    if d < 2:
        return np.eye(d)
    return special_ortho_group.rvs(d, random_state=rng)


def apply_rigid_motion(
    arrangement: HyperplaneArrangement,
    masses: Sequence[WeightedPointCloud],
    rotation: np.ndarray,
    translation: np.ndarray,
) -> Tuple[HyperplaneArrangement, List[WeightedPointCloud]]:
    """Move points x -> R x + v and every hyperplane along with them."""
    rotation = np.asarray(rotation, dtype=float)
    translation = np.asarray(translation, dtype=float)
    planes = []
    for h in arrangement.hyperplanes:
        a = rotation @ h.a
        planes.append(Hyperplane.from_raw(a, h.b + float(a @ translation)))
    moved = [
        WeightedPointCloud(m.d, m.points @ rotation.T + translation, m.weights)
        for m in masses
    ]
    return HyperplaneArrangement(arrangement.d, tuple(planes)), moved
