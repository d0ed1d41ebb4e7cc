"""
Certification Service

Runs the two polynomial criteria:

- full monomial: p_U == t_1^d ... t_k^d in the ring truncated at degree d+1,
  which needs dim(U) == k*d;
- ideal non-membership: p_{l,k}^m survives truncation by the uniform caps
  d+1 (or the staircase caps d+i).

On top of these it certifies theorem presets, runs preset grids in a thread
pool, and searches for the smallest certifiable d under a padding policy.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from makeev.config import get_settings
from makeev.errors import DomainError, ResourceLimitError
from makeev.models.schemas import (
    CertificateResult,
    CertificateStatus,
    RepresentationSpec,
    SearchCandidate,
    SearchPolicy,
    SearchReport,
    SpecFile,
    TheoremPreset,
)
from makeev.services import bounds, gf2poly, presets
from makeev.services.gf2poly import DegreeCaps
from makeev.services.repbuild import build_U, dimension, equip, equip_poly, full_pairs, make_spec, ortho

logger = logging.getLogger(__name__)

SKIPPED = "skipped"
SKIPPED_RESOURCE = "skipped(resource)"


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------

def certify_full_monomial(spec: RepresentationSpec, d: int) -> CertificateResult:
    """
    Full-monomial test of p_U at dimension d.

    DimensionMismatch is returned without computing anything when
    dim(U) != k*d. ResourceLimitError propagates.
    """
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}", {"d": d})

    dim_u = dimension(spec)
    if dim_u != spec.k * d:
        logger.info(f"Dimension mismatch: dim U = {dim_u}, k*d = {spec.k * d}")
        return CertificateResult(
            k=spec.k, d=d, spec=spec, dim_U=dim_u, status=CertificateStatus.DIMENSION_MISMATCH,
        )

    caps = DegreeCaps.uniform(spec.k, d + 1)
    p_u = build_U(spec, caps)
    certified = gf2poly.is_target_monomial(p_u, [d] * spec.k)
    status = CertificateStatus.CERTIFIED if certified else CertificateStatus.NOT_CERTIFIED
    logger.info(f"k={spec.k}, d={d}: {status.value} (support {p_u.support_size()})")
    return CertificateResult(
        k=spec.k,
        d=d,
        spec=spec,
        dim_U=dim_u,
        status=status,
        residual_support=p_u.support_size(),
        max_degrees=gf2poly.max_degrees(p_u),
    )


def bk_nonmembership(m: int, l: int, k: int, d: int, staircase: bool = False) -> bool:
    """
    True iff p_{l,k}^m is outside <t_1^{e_1}, ..., t_k^{e_k}> with
    e_i = d+1, or e_i = d+i when ``staircase`` is set.

    A polynomial lies in a monomial ideal iff each of its monomials does,
    so non-membership is the same as surviving truncation.
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}", {"m": m})
    if l < 1 or l > k:
        raise DomainError(f"Need 1 <= l <= k, got l={l}, k={k}", {"l": l, "k": k})
    if d < 0:
        raise DomainError(f"d must be >= 0, got {d}", {"d": d})

    caps = [d + i if staircase else d + 1 for i in range(1, k + 1)]
    # Linear forms need caps >= 2; cut back to the real caps afterwards.
    work = DegreeCaps(tuple(max(e, 2) for e in caps))
    p = gf2poly.power(equip_poly(l, range(1, k + 1), work), m)
    p = gf2poly.truncate(p, DegreeCaps(tuple(caps)))
    return not p.is_zero()


def certify_preset(preset: TheoremPreset) -> CertificateResult:
    instance = presets.resolve(preset)
    result = certify_full_monomial(instance.spec, instance.d)
    return result.model_copy(update={"preset": preset.label()})


# ---------------------------------------------------------------------------
# Search policies
# ---------------------------------------------------------------------------

def _pad(k: int, deficit: int) -> List:
    """
    Bisection blocks Equip(1, suffix) filling ``deficit`` dimensions,
    cycling through suffix lengths k, k-1, ..., 1.
    """
    counts = {length: 0 for length in range(k, 0, -1)}
    while deficit > 0:
        for length in range(k, 0, -1):
            if length <= deficit:
                counts[length] += 1
                deficit -= length
    return [
        equip(1, range(k - length + 1, k + 1), count)
        for length, count in counts.items()
        if count
    ]


def policy_spec(policy: SearchPolicy, m: int, l: int, k: int, d: int) -> Tuple[Optional[RepresentationSpec], str]:
    """The spec a policy proposes at d, or (None, reason) when it has none."""
    if policy == "paper":
        preset = presets.preset_for(m, l, k)
        if preset is None:
            return None, f"no theorem preset covers (l, k) = ({l}, {k})"
        instance = presets.resolve(preset)
        if instance.d != d:
            return None, f"{preset.label()} certifies d={instance.d} only"
        return instance.spec, ""

    base = [equip(l, range(1, k + 1), m)]
    if policy == "ortho-then-pad" and k >= 2:
        base.append(ortho(full_pairs(k)))
    deficit = k * d - dimension(make_spec(k, base))
    if deficit < 0:
        return None, f"constraints exceed k*d = {k * d} by {-deficit}"
    return make_spec(k, base + _pad(k, deficit)), ""


def search_floor(m: int, l: int, k: int) -> int:
    return bounds.makeev_lower(m, l, k) if l >= 2 else m


@dataclass
class GridOutcome:
    """A grid entry: a certificate, or the reason it was skipped."""
    preset: TheoremPreset
    result: Optional[CertificateResult] = None
    skipped: Optional[str] = None


class CertificationService:
    """
    Certificates, grids and searches with a shared worker pool size.

    Each certificate is single threaded; grids and searches spread
    independent certificates over ``workers`` threads and report in input
    order.
    """

    def __init__(self, workers: Optional[int] = None):
        self.workers = workers or get_settings().workers
        logger.info(f"Certification service initialized with {self.workers} workers")

    def certify(self, spec: RepresentationSpec, d: int) -> CertificateResult:
        return certify_full_monomial(spec, d)

    def certify_preset(self, preset: TheoremPreset) -> CertificateResult:
        return certify_preset(preset)

    def _map(self, fn: Callable, items: Sequence) -> List:
        if self.workers == 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, items))

    def certify_grid(self, preset_list: Sequence[TheoremPreset]) -> List[GridOutcome]:
        """Certify every preset; resource-limited entries are skipped and reported."""

        def run(preset: TheoremPreset) -> GridOutcome:
            try:
                return GridOutcome(preset=preset, result=certify_preset(preset))
            except ResourceLimitError as e:
                logger.warning(f"Skipping {preset.label()}: {e.message}")
                return GridOutcome(preset=preset, skipped=SKIPPED_RESOURCE)

        logger.info(f"Certifying grid of {len(preset_list)} presets")
        return self._map(run, list(preset_list))

    def minimal_certified_d(
        self,
        m: int,
        l: int,
        k: int,
        policy: SearchPolicy = "paper",
        d_max: Optional[int] = None,
    ) -> SearchReport:
        """
        Smallest d in [floor, d_max] whose policy spec certifies.

        The floor is makeev_lower (m for l = 1). d_max defaults to the
        configured search limit, then to bk_upper. Candidates are evaluated
        in batches of ``workers``; the first batch with a success ends the
        search.
        """
        if m < 1 or k < 1 or l < 1 or l > k:
            raise DomainError(f"Need m >= 1 and 1 <= l <= k, got m={m}, l={l}, k={k}")

        d_min = search_floor(m, l, k)
        if d_max is None:
            d_max = get_settings().search_d_max or bounds.bk_upper(m, l, k)

        candidates: List[SearchCandidate] = []
        found: Optional[Tuple[int, RepresentationSpec]] = None

        def evaluate(d: int) -> Tuple[SearchCandidate, Optional[RepresentationSpec]]:
            spec, reason = policy_spec(policy, m, l, k, d)
            if spec is None:
                return SearchCandidate(d=d, status=SKIPPED, reason=reason), None
            try:
                result = certify_full_monomial(spec, d)
            except ResourceLimitError as e:
                logger.warning(f"Search candidate d={d} skipped: {e.message}")
                return SearchCandidate(d=d, status=SKIPPED_RESOURCE, reason=e.message), None
            return SearchCandidate(d=d, status=result.status.value), spec if result.certified else None

        logger.info(f"Searching d in {d_min}..{d_max} for m={m}, l={l}, k={k}, policy={policy}")
        ds = list(range(d_min, d_max + 1))
        for start in range(0, len(ds), self.workers):
            batch = ds[start:start + self.workers]
            for candidate, spec in self._map(evaluate, batch):
                candidates.append(candidate)
                if spec is not None and found is None:
                    found = (candidate.d, spec)
            if found is not None:
                break

        if found is None:
            return SearchReport(m=m, l=l, k=k, policy=policy, d_min=d_min, d_max=d_max, found=False, candidates=candidates)

        d, spec = found
        # Candidates past the winner are dropped
        candidates = [c for c in candidates if c.d <= d]
        return SearchReport(
            m=m,
            l=l,
            k=k,
            policy=policy,
            d_min=d_min,
            d_max=d_max,
            found=True,
            d=d,
            spec=SpecFile.from_spec(spec, d),
            candidates=candidates,
        )


# Singleton instance
_certification_service = None


def get_certification_service() -> CertificationService:
    """
    Get or create singleton certification service instance.
    """
    global _certification_service
    if _certification_service is None:
        _certification_service = CertificationService()
    return _certification_service


def minimal_certified_d(
    m: int,
    l: int,
    k: int,
    policy: SearchPolicy = "paper",
    d_max: Optional[int] = None,
) -> SearchReport:
    return get_certification_service().minimal_certified_d(m, l, k, policy, d_max)


def certify_grid(preset_list: Sequence[TheoremPreset]) -> List[GridOutcome]:
    return get_certification_service().certify_grid(preset_list)
