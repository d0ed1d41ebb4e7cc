"""
Representation Polynomial Builder

Turns constraint blocks into polynomials of the truncated ring:

  r_j(vars)      product of all weight-j linear forms over the named variables
  Equip(l, vars) product of r_1 .. r_l
  Ortho(pairs)   product of (t_i + t_j)

and multiplies a full RepresentationSpec into p_U. The closed forms of the
Vandermonde-type products are built term by term so they can be checked
against the multiplied-out versions.
"""

import itertools
import logging
from math import comb
from typing import Iterable, List, Sequence, Tuple

from pydantic import ValidationError

from makeev.errors import DomainError
from makeev.models.schemas import Block, EquipBlock, OrthoBlock, RepresentationSpec
from makeev.services import gf2poly
from makeev.services.gf2poly import DegreeCaps, TruncatedPolynomial

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Spec helpers
# ---------------------------------------------------------------------------

def _build(model, **fields):
    try:
        return model(**fields)
    except ValidationError as e:
        raise DomainError(f"Invalid {model.__name__}: {e.errors()[0]['msg']}", {"fields": fields}) from e


def equip(l: int, vars: Sequence[int], mult: int = 1) -> EquipBlock:
    return _build(EquipBlock, l=l, vars=tuple(vars), mult=mult)


def ortho(pairs: Iterable[Tuple[int, int]], mult: int = 1) -> OrthoBlock:
    return _build(OrthoBlock, pairs=tuple(tuple(p) for p in pairs), mult=mult)


def full_pairs(k: int) -> List[Tuple[int, int]]:
    """Every pair (i, j) with 1 <= i < j <= k."""
    return list(itertools.combinations(range(1, k + 1), 2))


def cascade(first: int, k: int, mult: int = 1) -> List[EquipBlock]:
    """Bisection blocks Equip(1, {i..k}) for i = first..k."""
    return [equip(1, range(i, k + 1), mult) for i in range(first, k + 1)]


def make_spec(k: int, blocks: Iterable[Block]) -> RepresentationSpec:
    return _build(RepresentationSpec, k=k, blocks=tuple(blocks))


# ---------------------------------------------------------------------------
# Dimensions and the raw matrix form
# ---------------------------------------------------------------------------

def block_dimension(block: Block) -> int:
    """Dimension of one copy of the block times its multiplicity."""
    if isinstance(block, EquipBlock):
        single = sum(comb(len(block.vars), j) for j in range(1, block.l + 1))
    else:
        single = len(block.pairs)
    return block.mult * single


def dimension(spec: RepresentationSpec) -> int:
    return sum(block_dimension(b) for b in spec.blocks)


def _block_rows(block: Block, k: int) -> List[Tuple[int, ...]]:
    rows = []
    if isinstance(block, EquipBlock):
        for j in range(1, block.l + 1):
            for subset in itertools.combinations(block.vars, j):
                rows.append(tuple(1 if i in subset else 0 for i in range(1, k + 1)))
    else:
        for i, j in block.pairs:
            rows.append(tuple(1 if x in (i, j) else 0 for x in range(1, k + 1)))
    return rows


def linear_factors(spec: RepresentationSpec) -> List[Tuple[int, ...]]:
    """
    Rows of the dim(U) x k bit matrix A: one coefficient vector per
    one-dimensional constituent, blocks in order, each repeated mult times.
    """
    rows: List[Tuple[int, ...]] = []
    for block in spec.blocks:
        rows.extend(_block_rows(block, spec.k) * block.mult)
    return rows


# ---------------------------------------------------------------------------
# Block polynomials
# ---------------------------------------------------------------------------

def _check_vars(vars: Sequence[int], caps: DegreeCaps) -> Tuple[int, ...]:
    vs = tuple(int(v) for v in vars)
    if not vs:
        raise DomainError("Variable set must be nonempty")
    if any(v < 1 or v > caps.k for v in vs):
        raise DomainError(f"Variables {list(vs)} outside 1..{caps.k}")
    if len(set(vs)) != len(vs):
        raise DomainError(f"Variables {list(vs)} contain duplicates")
    return vs


def _indicator(subset: Iterable[int], k: int) -> List[int]:
    chosen = set(subset)
    return [1 if i in chosen else 0 for i in range(1, k + 1)]


def r_poly(j: int, vars: Sequence[int], caps: DegreeCaps) -> TruncatedPolynomial:
    """Product of the linear forms sum_{i in S} t_i over all j-subsets S of vars."""
    vs = _check_vars(vars, caps)
    if j < 1 or j > len(vs):
        raise DomainError(f"Weight {j} outside 1..{len(vs)}", {"j": j, "vars": list(vs)})
    forms = [
        gf2poly.linear_form(caps, _indicator(subset, caps.k))
        for subset in itertools.combinations(vs, j)
    ]
    return gf2poly.product(forms, caps)


def equip_poly(l: int, vars: Sequence[int], caps: DegreeCaps) -> TruncatedPolynomial:
    vs = _check_vars(vars, caps)
    if l < 1 or l > len(vs):
        raise DomainError(f"Level {l} outside 1..{len(vs)}", {"l": l, "vars": list(vs)})
    return gf2poly.product([r_poly(j, vs, caps) for j in range(1, l + 1)], caps)


def ortho_poly(pairs: Iterable[Tuple[int, int]], caps: DegreeCaps) -> TruncatedPolynomial:
    forms = [gf2poly.linear_form(caps, _indicator(pair, caps.k)) for pair in pairs]
    return gf2poly.product(forms, caps)


def block_poly(block: Block, caps: DegreeCaps) -> TruncatedPolynomial:
    """Polynomial of one block raised to its multiplicity."""
    if isinstance(block, EquipBlock):
        base = equip_poly(block.l, block.vars, caps)
    else:
        base = ortho_poly(block.pairs, caps)
    return gf2poly.power(base, block.mult)


def build_U(spec: RepresentationSpec, caps: DegreeCaps) -> TruncatedPolynomial:
    """p_U: block polynomials multiplied together, smallest support first."""
    if caps.k != spec.k:
        raise DomainError(f"Caps have {caps.k} variables but the spec has k = {spec.k}")

    polys = []
    for block in spec.blocks:
        p = block_poly(block, caps)
        logger.debug(f"Block {block.kind} x{block.mult}: support {p.support_size()}")
        if p.is_zero():
            return gf2poly.zero(caps)
        polys.append(p)
    return gf2poly.product(polys, caps)


# ---------------------------------------------------------------------------
# Closed forms (term by term, no multiplication)
# ---------------------------------------------------------------------------

def _orbit_terms(pattern: Sequence[int]) -> List[Tuple[int, ...]]:
    """All placements sigma of the exponent pattern: t_sigma(1)^p1 ... t_sigma(k)^pk."""
    k = len(pattern)
    out = []
    for sigma in itertools.permutations(range(k)):
        exps = [0] * k
        for position, var in enumerate(sigma):
            exps[var] = pattern[position]
        out.append(tuple(exps))
    return out


def _require_k(caps: DegreeCaps, k: int) -> None:
    if caps.k != k:
        raise DomainError(f"Closed form needs {k} variables, caps have {caps.k}")


def closed_p2k(k: int, caps: DegreeCaps) -> TruncatedPolynomial:
    """sum_sigma t_sigma(1)^k t_sigma(2)^(k-1) ... t_sigma(k)."""
    _require_k(caps, k)
    return gf2poly.from_terms(caps, _orbit_terms(range(k, 0, -1)))


def closed_p33(caps: DegreeCaps) -> TruncatedPolynomial:
    """sum_sigma t_sigma(1)^4 t_sigma(2)^2 t_sigma(3)."""
    _require_k(caps, 3)
    return gf2poly.from_terms(caps, _orbit_terms((4, 2, 1)))


P34_ORBITS = ((5, 4, 3, 2), (7, 4, 2, 1), (6, 5, 2, 1), (6, 4, 3, 1))


def closed_p34(caps: DegreeCaps) -> TruncatedPolynomial:
    """The four permutation-orbit sums making up Equip(3, {1..4}); 96 monomials."""
    _require_k(caps, 4)
    terms = [exps for pattern in P34_ORBITS for exps in _orbit_terms(pattern)]
    return gf2poly.from_terms(caps, terms)


def closed_r34(caps: DegreeCaps) -> TruncatedPolynomial:
    """t1 t2 t3 t4 + sum_{i != j} t_i^3 t_j."""
    _require_k(caps, 4)
    terms = [(1, 1, 1, 1)]
    for i, j in itertools.permutations(range(4), 2):
        exps = [0, 0, 0, 0]
        exps[i], exps[j] = 3, 1
        terms.append(tuple(exps))
    return gf2poly.from_terms(caps, terms)
