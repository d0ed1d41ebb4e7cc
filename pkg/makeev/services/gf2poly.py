"""
Truncated GF(2) Polynomial Ring

Exact arithmetic in Z_2[t_1, ..., t_k] / (t_1^{e_1}, ..., t_k^{e_k}), the ring
in which every representation polynomial p_U is evaluated.

Storage is dense: one boolean cell per exponent vector (a_1, ..., a_k) with
0 <= a_i < e_i. Cells are addressed in mixed radix with t_1 varying fastest,
i.e. index = sum a_i * prod_{j<i} e_j. The numpy array has shape
(e_1, ..., e_k) and is read in Fortran order for that index.

Polynomials are immutable: the coefficient array is frozen after
construction, so values can be shared freely between threads.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from makeev.config import get_settings
from makeev.errors import DomainError, ResourceLimitError

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]


@dataclass(frozen=True)
class DegreeCaps:
    """
    Per-variable truncation degrees e_1..e_k.

    Monomials containing t_i^{e_i} vanish. Construction fails with a
    ResourceLimitError when prod e_i exceeds the configured cell limit.
    """

    caps: Tuple[int, ...]

    def __post_init__(self):
        caps = tuple(int(e) for e in self.caps)
        object.__setattr__(self, "caps", caps)

        if len(caps) < 1:
            raise DomainError("DegreeCaps needs at least one variable")
        if any(e < 1 for e in caps):
            raise DomainError(f"Every cap must be >= 1, got {list(caps)}", {"caps": list(caps)})

        limit = get_settings().cell_limit
        if self.cells > limit:
            raise ResourceLimitError(
                f"{self.cells} cells for caps {list(caps)} exceed the cell limit {limit}",
                {"caps": list(caps), "cells": self.cells, "limit": limit},
            )

    @classmethod
    def uniform(cls, k: int, e: int) -> "DegreeCaps":
        """Caps (e, ..., e) on k variables; e = d + 1 for the full-monomial test."""
        return cls(tuple([e] * k))

    @classmethod
    def staircase(cls, k: int, d: int) -> "DegreeCaps":
        """Caps (d+1, d+2, ..., d+k) matching the ideal <t_1^{d+1}, ..., t_k^{d+k}>."""
        return cls(tuple(d + i for i in range(1, k + 1)))

    @property
    def k(self) -> int:
        return len(self.caps)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.caps

    @property
    def cells(self) -> int:
        return math.prod(self.caps)

    def index_of(self, exponents: Sequence[int]) -> int:
        """Mixed-radix index of an exponent vector, t_1 varying fastest."""
        self.check_exponents(exponents)
        return int(np.ravel_multi_index(tuple(exponents), self.caps, order="F"))

    def check_exponents(self, exponents: Sequence[int]) -> Exponents:
        exps = tuple(int(a) for a in exponents)
        if len(exps) != self.k:
            raise DomainError(f"Expected {self.k} exponents, got {len(exps)}")
        for i, (a, e) in enumerate(zip(exps, self.caps), start=1):
            if a < 0 or a >= e:
                raise DomainError(
                    f"Exponent {a} of t{i} outside 0..{e - 1}",
                    {"variable": i, "exponent": a, "cap": e},
                )
        return exps


class TruncatedPolynomial:
    """
    An element of the truncated ring.

    Use the module constructors (zero, one, monomial, linear_form,
    from_terms) rather than building coefficient arrays by hand.
    """

    __slots__ = ("caps", "cells")

    def __init__(self, caps: DegreeCaps, cells: np.ndarray):
        cells = np.array(cells, dtype=bool, copy=True)
        if cells.shape != caps.shape:
            raise DomainError(f"Coefficient array shape {cells.shape} does not match caps {caps.shape}")
        cells.flags.writeable = False
        self.caps = caps
        self.cells = cells

    @classmethod
    def _wrap(cls, caps: DegreeCaps, cells: np.ndarray) -> "TruncatedPolynomial":
        # Takes ownership of a freshly allocated array without copying.
        poly = cls.__new__(cls)
        cells.flags.writeable = False
        poly.caps = caps
        poly.cells = cells
        return poly

    @property
    def k(self) -> int:
        return self.caps.k

    def support_size(self) -> int:
        return support_size(self)

    def max_degree(self, i: int) -> int:
        return max_degree(self, i)

    def is_zero(self) -> bool:
        return not bool(self.cells.any())

    def terms(self) -> List[Exponents]:
        return terms(self)

    def __add__(self, other: "TruncatedPolynomial") -> "TruncatedPolynomial":
        return add(self, other)

    def __mul__(self, other: "TruncatedPolynomial") -> "TruncatedPolynomial":
        return mul(self, other)

    def __pow__(self, e: int) -> "TruncatedPolynomial":
        return power(self, e)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedPolynomial):
            return NotImplemented
        return self.caps == other.caps and bool(np.array_equal(self.cells, other.cells))

    __hash__ = None

    def __repr__(self) -> str:
        n = self.support_size()
        if n > 12:
            return f"TruncatedPolynomial(caps={list(self.caps.caps)}, terms={n})"
        return f"TruncatedPolynomial({render(self)})"


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def zero(caps: DegreeCaps) -> TruncatedPolynomial:
    """The zero polynomial: every cell clear."""
    return TruncatedPolynomial._wrap(caps, np.zeros(caps.shape, dtype=bool))


def one(caps: DegreeCaps) -> TruncatedPolynomial:
    """The unit: the monomial with exponent vector 0."""
    return monomial(caps, (0,) * caps.k)


def monomial(caps: DegreeCaps, exponents: Sequence[int]) -> TruncatedPolynomial:
    exps = caps.check_exponents(exponents)
    cells = np.zeros(caps.shape, dtype=bool)
    cells[exps] = True
    return TruncatedPolynomial._wrap(caps, cells)


def linear_form(caps: DegreeCaps, coeffs: Sequence[int]) -> TruncatedPolynomial:
    """
    The linear form a_1 t_1 + ... + a_k t_k.

    Every variable that appears needs a cap of at least 2; an all-zero
    coefficient vector gives the zero polynomial.
    """
    bits = [int(a) for a in coeffs]
    if len(bits) != caps.k:
        raise DomainError(f"Linear form needs {caps.k} coefficients, got {len(bits)}")
    if any(a not in (0, 1) for a in bits):
        raise DomainError(f"Linear form coefficients must be bits, got {bits}")

    cells = np.zeros(caps.shape, dtype=bool)
    for i, a in enumerate(bits):
        if not a:
            continue
        if caps.caps[i] < 2:
            raise DomainError(
                f"Cap of t{i + 1} is {caps.caps[i]}; a linear term needs cap >= 2",
                {"variable": i + 1, "cap": caps.caps[i]},
            )
        unit = [0] * caps.k
        unit[i] = 1
        cells[tuple(unit)] = True
    return TruncatedPolynomial._wrap(caps, cells)


def from_terms(
    caps: DegreeCaps,
    exponent_list: Iterable[Sequence[int]],
    truncate: bool = False,
) -> TruncatedPolynomial:
    """
    Sum of monomials over GF(2); repeated exponent vectors cancel in pairs.

    Out-of-range exponents raise a DomainError unless ``truncate`` is set,
    in which case they are dropped.
    """
    cells = np.zeros(caps.shape, dtype=bool)
    for exponents in exponent_list:
        exps = tuple(int(a) for a in exponents)
        if truncate and (len(exps) == caps.k) and any(a >= e for a, e in zip(exps, caps.caps)):
            continue
        exps = caps.check_exponents(exps)
        cells[exps] ^= True
    return TruncatedPolynomial._wrap(caps, cells)


# ---------------------------------------------------------------------------
# Ring operations
# ---------------------------------------------------------------------------

def _require_same_caps(p: TruncatedPolynomial, q: TruncatedPolynomial) -> None:
    if p.caps != q.caps:
        raise DomainError(
            f"Caps mismatch: {list(p.caps.caps)} vs {list(q.caps.caps)}",
            {"left": list(p.caps.caps), "right": list(q.caps.caps)},
        )


def add(p: TruncatedPolynomial, q: TruncatedPolynomial) -> TruncatedPolynomial:
    """Coefficientwise exclusive-or."""
    _require_same_caps(p, q)
    return TruncatedPolynomial._wrap(p.caps, np.logical_xor(p.cells, q.cells))


def _bounding_box(p: TruncatedPolynomial) -> Tuple[int, ...]:
    return tuple(max_degree(p, i) + 1 for i in range(1, p.k + 1))


def mul(p: TruncatedPolynomial, q: TruncatedPolynomial) -> TruncatedPolynomial:
    """
    Truncated product.

    Iterates over the support of the sparser operand and XORs a shifted
    block of the denser one into the result for each of its terms. The
    block is clipped to the denser operand's bounding box and to the caps,
    so exponent sums that would overflow are never written.
    """
    _require_same_caps(p, q)
    if support_size(p) < support_size(q):
        p, q = q, p

    shape = p.caps.shape
    out = np.zeros(shape, dtype=bool)
    if q.is_zero() or p.is_zero():
        return TruncatedPolynomial._wrap(p.caps, out)

    box = _bounding_box(p)
    src = p.cells[tuple(slice(0, h) for h in box)]
    for a in np.argwhere(q.cells):
        lengths = [min(h, e - int(ai)) for h, e, ai in zip(box, shape, a)]
        dst = out[tuple(slice(int(ai), int(ai) + n) for ai, n in zip(a, lengths))]
        np.bitwise_xor(dst, src[tuple(slice(0, n) for n in lengths)], out=dst)
    return TruncatedPolynomial._wrap(p.caps, out)


def mul_naive(p: TruncatedPolynomial, q: TruncatedPolynomial) -> TruncatedPolynomial:
    """Reference product: a plain double loop over all cells. Tests only."""
    _require_same_caps(p, q)
    shape = p.caps.shape
    cells = list(np.ndindex(*shape))
    p_vals = p.cells.ravel().tolist()
    q_vals = q.cells.ravel().tolist()

    out = np.zeros(shape, dtype=bool)
    for a, pa in zip(cells, p_vals):
        for b, qb in zip(cells, q_vals):
            if not (pa and qb):
                continue
            c = tuple(x + y for x, y in zip(a, b))
            if all(ci < e for ci, e in zip(c, shape)):
                out[c] ^= True
    return TruncatedPolynomial._wrap(p.caps, out)


def frobenius_square(p: TruncatedPolynomial) -> TruncatedPolynomial:
    """p^2 over GF(2): every exponent vector doubled, then truncated."""
    shape = p.caps.shape
    out = np.zeros(shape, dtype=bool)
    half = tuple(slice(0, (e + 1) // 2) for e in shape)
    out[tuple(slice(None, None, 2) for _ in shape)] = p.cells[half]
    return TruncatedPolynomial._wrap(p.caps, out)


def power(p: TruncatedPolynomial, e: int) -> TruncatedPolynomial:
    """p^e by square-and-multiply; squarings use the Frobenius shortcut."""
    if e < 0:
        raise DomainError(f"Exponent must be >= 0, got {e}")

    result = one(p.caps)
    base = p
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = frobenius_square(base)
            if base.is_zero():
                # A remaining set bit multiplies by this zero power
                return zero(p.caps)
    return result


def truncate(p: TruncatedPolynomial, caps: DegreeCaps) -> TruncatedPolynomial:
    """Restrict p to smaller caps (the quotient map onto a smaller ring)."""
    if caps.k != p.k or any(new > old for new, old in zip(caps.caps, p.caps.caps)):
        raise DomainError(
            f"Cannot truncate caps {list(p.caps.caps)} to {list(caps.caps)}",
            {"from": list(p.caps.caps), "to": list(caps.caps)},
        )
    cells = np.array(p.cells[tuple(slice(0, e) for e in caps.caps)], dtype=bool, copy=True)
    return TruncatedPolynomial._wrap(caps, cells)


def product(factors: Sequence[TruncatedPolynomial], caps: DegreeCaps) -> TruncatedPolynomial:
    """Product of many factors, combined smallest-support-first."""
    ordered = sorted(factors, key=support_size)
    result = one(caps)
    for factor in ordered:
        result = mul(result, factor)
        if result.is_zero():
            break
    return result


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------

def equals(p: TruncatedPolynomial, q: TruncatedPolynomial) -> bool:
    _require_same_caps(p, q)
    return bool(np.array_equal(p.cells, q.cells))


def is_target_monomial(p: TruncatedPolynomial, exponents: Sequence[int]) -> bool:
    """True iff p is exactly the single monomial with the given exponents."""
    exps = p.caps.check_exponents(exponents)
    return support_size(p) == 1 and bool(p.cells[exps])


def support_size(p: TruncatedPolynomial) -> int:
    return int(np.count_nonzero(p.cells))


def max_degree(p: TruncatedPolynomial, i: int) -> int:
    """Largest exponent of t_i over the support; -1 for the zero polynomial."""
    if i < 1 or i > p.k:
        raise DomainError(f"Variable index {i} outside 1..{p.k}")
    others = tuple(axis for axis in range(p.k) if axis != i - 1)
    present = np.flatnonzero(p.cells.any(axis=others)) if others else np.flatnonzero(p.cells)
    return int(present[-1]) if present.size else -1


def max_degrees(p: TruncatedPolynomial) -> List[int]:
    return [max_degree(p, i) for i in range(1, p.k + 1)]


def terms(p: TruncatedPolynomial) -> List[Exponents]:
    """Support as exponent vectors, in ascending mixed-radix index order."""
    flat = np.flatnonzero(p.cells.ravel(order="F"))
    coords = np.unravel_index(flat, p.caps.shape, order="F")
    return [tuple(int(c[n]) for c in coords) for n in range(flat.size)]


def render(p: TruncatedPolynomial) -> str:
    """Debug rendering, e.g. ``t1^3*t2 + t1*t2^2``; ``0`` for the zero polynomial."""
    parts = []
    for exps in terms(p):
        factors = [
            f"t{i}" if a == 1 else f"t{i}^{a}"
            for i, a in enumerate(exps, start=1)
            if a > 0
        ]
        parts.append("*".join(factors) or "1")
    return " + ".join(parts) if parts else "0"


def all_exponents(caps: DegreeCaps) -> Iterable[Exponents]:
    """Every exponent vector of the ring, t_1 varying fastest."""
    for reversed_exps in itertools.product(*(range(e) for e in reversed(caps.caps))):
        yield tuple(reversed(reversed_exps))


def random_polynomial(
    caps: DegreeCaps,
    rng: np.random.Generator,
    density: Optional[float] = None,
) -> TruncatedPolynomial:
    """A uniformly random element (or Bernoulli(density) cells), for property suites."""
    p = 0.5 if density is None else density
    return TruncatedPolynomial._wrap(caps, rng.random(caps.shape) < p)
