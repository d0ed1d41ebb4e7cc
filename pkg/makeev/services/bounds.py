"""
Bound formulas for Delta(m; k), Delta(m; l/k) and the orthogonal Delta^perp(m; l/k).

All formulas are integer exact. m is decomposed as m = 2^{q+1} - t with
2^q <= m <= 2^{q+1} - 1, so 1 <= t <= 2^q.
"""

import logging
from math import comb
from typing import Optional, Tuple

from makeev.errors import DomainError
from makeev.models.schemas import BoundReport, BoundSource

logger = logging.getLogger(__name__)

# Appendix instances outside the theorem families: (m, l, k, orthogonal) -> d
APPENDIX_UPPER = {
    (1, 3, 4, True): 7,
    (1, 3, 5, True): 9,
}


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _positive(**values: int) -> None:
    for name, value in values.items():
        if value < 1:
            raise DomainError(f"{name} must be >= 1, got {value}", {name: value})


def _level(l: int, k: int, minimum: int = 1) -> None:
    if l < minimum or l > k:
        raise DomainError(f"Need {minimum} <= l <= k, got l={l}, k={k}", {"l": l, "k": k})


def decompose(m: int) -> Tuple[int, int]:
    """(q, t) with m = 2^{q+1} - t and 1 <= t <= 2^q."""
    _positive(m=m)
    q = m.bit_length() - 1
    return q, 2 ** (q + 1) - m


def equipartition_count(l: int, k: int) -> int:
    """|E_{l,k}|: nonzero characters of weight at most l."""
    _level(l, k)
    return sum(comb(k, j) for j in range(1, l + 1))


def ramos_lower(m: int, k: int) -> int:
    """Degrees-of-freedom lower bound ceil(m (2^k - 1) / k) for Delta(m; k)."""
    _positive(m=m, k=k)
    return _ceil_div(m * (2 ** k - 1), k)


def mlz_upper(m: int, k: int) -> int:
    """2^q (2^{k-1} + 1) - t for m = 2^{q+1} - t."""
    _positive(k=k)
    q, t = decompose(m)
    return 2 ** q * (2 ** (k - 1) + 1) - t


def makeev_lower(m: int, l: int, k: int, orthogonal: bool = False) -> int:
    """
    ceil((m (2^l - 1)(k - l + 1) + [orthogonal] C(k, 2)) / k).

    Only defined for l >= 2.
    """
    _positive(m=m)
    _level(l, k, minimum=2)
    count = m * (2 ** l - 1) * (k - l + 1)
    if orthogonal:
        count += comb(k, 2)
    return _ceil_div(count, k)


def bk_upper(m: int, l: int, k: int) -> int:
    """
    m * sum_{j=0}^{l} C(k-1, j).

    The formula is authoritative, so bk_upper(1, 3, 4) = 8. The value 7 quoted
    for (1; 3/4) is the orthogonal preset bound, reported by theorem_upper.
    """
    _positive(m=m)
    _level(l, k)
    return m * sum(comb(k - 1, j) for j in range(0, l + 1))


def expected_lower(m: int, l: int, k: int, orthogonal: bool = False) -> int:
    """Constraint count divided by k; an expectation, not a proven bound."""
    _positive(m=m)
    count = m * equipartition_count(l, k) + (comb(k, 2) if orthogonal else 0)
    return _ceil_div(count, k)


def theorem_upper(m: int, l: int, k: int, orthogonal: bool = False) -> Optional[int]:
    """
    Upper bound from the theorem families, None when none applies.

    l = 2:           2^q (k + 1) - t
    (l, k) = (3, 4): 7 * 2^q - 2t
    The orthogonal variants need q >= 1 and t >= 2. The two appendix
    instances are included as well.
    """
    _positive(m=m, k=k)
    _level(l, k)
    appendix = APPENDIX_UPPER.get((m, l, k, orthogonal))
    if appendix is not None:
        return appendix

    q, t = decompose(m)
    if orthogonal and (q < 1 or t < 2):
        return None
    if l == 2:
        return 2 ** q * (k + 1) - t
    if (l, k) == (3, 4):
        return 7 * 2 ** q - 2 * t
    return None


def bound_report(m: int, l: int, k: int, orthogonal: bool = False) -> BoundReport:
    """Best lower bound and best known upper bound with its source."""
    lower = makeev_lower(m, l, k, orthogonal) if l >= 2 else m
    if l < 2:
        _level(l, k)

    upper: Optional[int] = theorem_upper(m, l, k, orthogonal)
    source: Optional[BoundSource] = "theorem-preset" if upper is not None else None
    if upper is None and not orthogonal:
        if l == k:
            upper, source = mlz_upper(m, k), "mlz"
        else:
            upper, source = bk_upper(m, l, k), "bk"

    if upper is not None and upper < lower:
        logger.warning(f"Upper bound {upper} ({source}) below lower bound {lower} for m={m}, l={l}, k={k}")
        upper, source = None, None

    return BoundReport(
        m=m,
        l=l,
        k=k,
        orthogonal=orthogonal,
        lower=lower,
        upper_known=upper,
        upper_source=source,
        expected_lower=expected_lower(m, l, k, orthogonal),
    )


def render_bracket(report: BoundReport) -> str:
    """'11 ≤ Δ ≤ 12', or '7 ≤ Δ⊥ ≤ 9' for the orthogonal problem."""
    symbol = "Δ⊥" if report.orthogonal else "Δ"
    if report.upper_known is None:
        return f"{report.lower} ≤ {symbol}"
    return f"{report.lower} ≤ {symbol} ≤ {report.upper_known}"
