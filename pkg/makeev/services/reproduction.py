"""
Reproduction Table

Certifies every theorem preset instance and lines the result up against
golden values copied from the theorem statements. A row is ok when the
certificate passes at exactly the golden dimension.
"""

import logging
from typing import Callable, Dict, List, Optional

from makeev.models.schemas import TableRow, TheoremPreset
from makeev.services import bounds
from makeev.services.certify import GridOutcome, get_certification_service
from makeev.services.presets import FAMILIES, reproduction_grid, resolve

logger = logging.getLogger(__name__)


# Dimension stated by each theorem for its parameters
GOLDEN_D: Dict[str, Callable[[TheoremPreset], int]] = {
    "thm3.1": lambda p: 2 ** p.q * (p.k + 1) - p.t,
    "thm3.2": lambda p: 2 ** p.q * (p.k + 1) - p.t,
    "thm4.1": lambda p: 7 * 2 ** p.q - 2 * p.t,
    "thm4.2": lambda p: 7 * 2 ** p.q - 2 * p.t,
    "prop4.3": lambda p: 7 * 2 ** p.q - 4,
    "prop5.4a": lambda p: p.d + 2 ** p.q * (p.k + 1) - p.t + 1,
    "prop5.4b": lambda p: p.d + 7 * 2 ** p.q - 2 * p.t + 1,
    "prop6.1a": lambda p: 7,
    "prop6.1b": lambda p: 9,
}

# Families whose statement is a bound on Delta or Delta-perp
BOUND_FAMILIES = {"thm3.1", "thm3.2", "thm4.1", "thm4.2", "prop6.1a", "prop6.1b"}


def _params(p: TheoremPreset) -> str:
    return ", ".join(f"{name}={getattr(p, name)}" for name in ("k", "q", "t", "d") if getattr(p, name) is not None)


def table_row(outcome: GridOutcome) -> TableRow:
    preset = outcome.preset
    instance = resolve(preset)
    expected = GOLDEN_D[preset.identifier](preset)

    lower: Optional[int] = None
    upper: Optional[int] = None
    if preset.identifier in BOUND_FAMILIES:
        lower = bounds.makeev_lower(instance.m, instance.l, instance.k, instance.orthogonal)
        upper = bounds.theorem_upper(instance.m, instance.l, instance.k, instance.orthogonal)

    if outcome.result is None:
        status, ok = outcome.skipped or "skipped", False
    else:
        status = outcome.result.status.value
        ok = outcome.result.certified and instance.d == expected
        if lower is not None and instance.d < lower:
            ok = False

    return TableRow(
        family=preset.identifier,
        params=_params(preset),
        m=instance.m,
        l=instance.l,
        k=instance.k,
        orthogonal=instance.orthogonal,
        lower=lower,
        upper=upper,
        expected_d=expected,
        d=instance.d,
        status=status,
        ok=ok,
    )


def build_table(max_q: int = 3, families: Optional[List[str]] = None) -> List[TableRow]:
    """Certify the reproduction grid (q up to ``max_q``) and return rows in grid order."""
    grid = reproduction_grid(max_q=max_q, max_q_l2=min(max_q, 2))
    if families:
        unknown = set(families) - set(FAMILIES)
        if unknown:
            logger.warning(f"Ignoring unknown families: {sorted(unknown)}")
        grid = [p for p in grid if p.identifier in families]

    outcomes = get_certification_service().certify_grid(grid)
    rows = [table_row(o) for o in outcomes]
    failed = sum(not r.ok for r in rows)
    logger.info(f"Reproduction table: {len(rows)} rows, {failed} not ok")
    return rows
