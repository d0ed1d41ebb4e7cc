"""
Theorem Presets

The exact block list of every representation used in the upper-bound
proofs, together with the (l, k, orthogonal) family each one certifies and
its target dimension. Every preset satisfies dimension(spec) = k * d.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from makeev.errors import DomainError
from makeev.models.schemas import Block, RepresentationSpec, TheoremPreset
from makeev.services import bounds
from makeev.services.repbuild import cascade, equip, full_pairs, make_spec, ortho

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PresetFamily:
    """Which problem a preset family bounds."""
    identifier: str
    l: int
    orthogonal: bool
    fixed_k: Optional[int]
    params: Tuple[str, ...]
    label: str


FAMILIES: Dict[str, PresetFamily] = {
    f.identifier: f
    for f in (
        PresetFamily("thm3.1", 2, False, None, ("k", "q", "t"), "Delta(2^{q+1}-t; 2/k) <= 2^q(k+1)-t"),
        PresetFamily("thm3.2", 2, True, None, ("k", "q", "t"), "Delta-perp(2^{q+1}-t; 2/k) <= 2^q(k+1)-t"),
        PresetFamily("thm4.1", 3, False, 4, ("q", "t"), "Delta(2^{q+1}-t; 3/4) <= 7*2^q-2t"),
        PresetFamily("thm4.2", 3, True, 4, ("q", "t"), "Delta-perp(2^{q+1}-t; 3/4) <= 7*2^q-2t"),
        PresetFamily("prop4.3", 3, False, 4, ("q",), "2^{q+1}-2 masses by any three of four, one more by H2,H3,H4"),
        PresetFamily("prop5.4a", 2, False, None, ("k", "q", "t", "d"), "transversal certificate, l = 2"),
        PresetFamily("prop5.4b", 3, False, 4, ("q", "t", "d"), "transversal certificate, (l, k) = (3, 4)"),
        PresetFamily("prop6.1a", 3, True, 4, (), "Delta-perp(1; 3/4) <= 7"),
        PresetFamily("prop6.1b", 3, True, 5, (), "Delta-perp(1; 3/5) <= 9"),
    )
}


@dataclass(frozen=True)
class PresetInstance:
    """A resolved preset: its spec, target d and the problem instance it bounds."""
    preset: TheoremPreset
    spec: RepresentationSpec
    d: int
    m: int
    l: int
    k: int
    orthogonal: bool


def make_preset(identifier: str, **params: Optional[int]) -> TheoremPreset:
    try:
        return TheoremPreset(identifier=identifier, **{k: v for k, v in params.items() if v is not None})
    except ValidationError as e:
        raise DomainError(f"Unknown preset or parameter: {e.errors()[0]['msg']}", {"identifier": identifier}) from e


# ---------------------------------------------------------------------------
# Parameter checks
# ---------------------------------------------------------------------------

def _need(preset: TheoremPreset, *names: str) -> List[int]:
    values = []
    for name in names:
        value = getattr(preset, name)
        if value is None:
            raise DomainError(f"Preset {preset.identifier} needs parameter {name}", {"missing": name})
        values.append(value)
    return values


def _check_qt(q: int, t: int, orthogonal: bool) -> None:
    if q < 0:
        raise DomainError(f"q must be >= 0, got {q}", {"q": q})
    low = 2 if orthogonal else 1
    if orthogonal and q < 1:
        raise DomainError(f"The orthogonal families need q >= 1, got {q}", {"q": q})
    if t < low or t > 2 ** q:
        raise DomainError(f"t must lie in {low}..{2 ** q} for q={q}, got {t}", {"q": q, "t": t})


def _check_k(preset: TheoremPreset, family: PresetFamily) -> int:
    if family.fixed_k is not None:
        if preset.k is not None and preset.k != family.fixed_k:
            raise DomainError(f"Preset {preset.identifier} is defined for k = {family.fixed_k} only")
        return family.fixed_k
    (k,) = _need(preset, "k")
    if k < 2:
        raise DomainError(f"Preset {preset.identifier} needs k >= 2, got {k}", {"k": k})
    return k


def _reduced_level(k: int) -> int:
    return min(2, k - 1)


# ---------------------------------------------------------------------------
# Block lists, one builder per family
# ---------------------------------------------------------------------------

def _thm31(k: int, q: int, t: int) -> Tuple[List[Block], int, int]:
    m, d = 2 ** (q + 1) - t, 2 ** q * (k + 1) - t
    blocks: List[Block] = [equip(2, range(1, k + 1), m)]
    if t > 1:
        blocks.append(equip(_reduced_level(k), range(2, k + 1), t - 1))
    # (t_1 + t_3) ... (t_1 + t_k) ... (t_{k-2} + t_k)
    gapped = [(i, j) for i, j in full_pairs(k) if j >= i + 2]
    if gapped:
        blocks.append(ortho(gapped))
    blocks.append(equip(1, range(2, k + 1)))
    return blocks, m, d


def _thm32(k: int, q: int, t: int) -> Tuple[List[Block], int, int]:
    m, d = 2 ** (q + 1) - t, 2 ** q * (k + 1) - t
    blocks: List[Block] = [equip(2, range(1, k + 1), m)]
    if t > 2:
        blocks.append(equip(_reduced_level(k), range(2, k + 1), t - 2))
    blocks.append(ortho(full_pairs(k)))
    blocks.extend(cascade(2, k))
    return blocks, m, d


def _thm41(q: int, t: int) -> Tuple[List[Block], int, int]:
    m, d = 2 ** (q + 1) - t, 7 * 2 ** q - 2 * t
    blocks: List[Block] = [equip(3, (1, 2, 3, 4), m)]
    if t > 1:
        blocks.append(equip(2, (2, 3, 4), t - 1))
    blocks.append(ortho([(1, 3), (1, 4), (2, 4)]))
    blocks.append(equip(1, (2, 3, 4)))
    return blocks, m, d


def _thm42(q: int, t: int) -> Tuple[List[Block], int, int]:
    m, d = 2 ** (q + 1) - t, 7 * 2 ** q - 2 * t
    blocks: List[Block] = [equip(3, (1, 2, 3, 4), m)]
    if t > 2:
        blocks.append(equip(2, (2, 3, 4), t - 2))
    blocks.append(ortho(full_pairs(4)))
    blocks.extend(cascade(2, 4))
    return blocks, m, d


def _prop43(q: int) -> Tuple[List[Block], int, int]:
    m, d = 2 ** (q + 1) - 2, 7 * 2 ** q - 4
    blocks: List[Block] = [
        equip(3, (1, 2, 3, 4), m),
        equip(3, (2, 3, 4)),
        equip(1, (3, 4), 2),
        equip(1, (4,)),
    ]
    return blocks, m, d


def _prop54(l: int, k: int, q: int, t: int, d: int) -> Tuple[List[Block], int, int]:
    m = 2 ** (q + 1) - t
    gap = 2 ** q * (k + 1) - t if l == 2 else 7 * 2 ** q - 2 * t
    n = d + gap + 1
    blocks: List[Block] = [
        equip(l, range(1, k + 1), m),
        equip(1, range(1, k + 1), d + 1),
        *cascade(2, k, t),
    ]
    return blocks, m, n


def _prop61a() -> Tuple[List[Block], int, int]:
    blocks: List[Block] = [
        equip(3, (1, 2, 3, 4)),
        ortho(full_pairs(4)),
        equip(1, (2, 3, 4)),
        equip(1, (3, 4), 2),
        equip(1, (4,)),
    ]
    return blocks, 1, 7


def _prop61b() -> Tuple[List[Block], int, int]:
    blocks: List[Block] = [equip(3, (1, 2, 3, 4, 5)), ortho(full_pairs(5)), *cascade(2, 5)]
    return blocks, 1, 9


def resolve(preset: TheoremPreset) -> PresetInstance:
    """Block list, target d and problem instance of a preset; DomainError when out of range."""
    family = FAMILIES[preset.identifier]
    k = _check_k(preset, family)
    ident = preset.identifier

    if ident in ("thm3.1", "thm3.2", "thm4.1", "thm4.2"):
        q, t = _need(preset, "q", "t")
        _check_qt(q, t, family.orthogonal)
        if ident == "thm3.1":
            blocks, m, d = _thm31(k, q, t)
        elif ident == "thm3.2":
            blocks, m, d = _thm32(k, q, t)
        elif ident == "thm4.1":
            blocks, m, d = _thm41(q, t)
        else:
            blocks, m, d = _thm42(q, t)
    elif ident == "prop4.3":
        (q,) = _need(preset, "q")
        if q < 1:
            raise DomainError(f"prop4.3 needs q >= 1, got {q}", {"q": q})
        blocks, m, d = _prop43(q)
    elif ident in ("prop5.4a", "prop5.4b"):
        q, t, base_d = _need(preset, "q", "t", "d")
        _check_qt(q, t, False)
        if base_d < 1:
            raise DomainError(f"d must be >= 1, got {base_d}", {"d": base_d})
        blocks, m, d = _prop54(family.l, k, q, t, base_d)
    elif ident == "prop6.1a":
        blocks, m, d = _prop61a()
    else:
        blocks, m, d = _prop61b()

    spec = make_spec(k, blocks)
    logger.debug(f"Resolved {preset.label()}: k={k}, d={d}, {len(blocks)} blocks")
    return PresetInstance(
        preset=preset, spec=spec, d=d, m=m, l=family.l, k=k, orthogonal=family.orthogonal,
    )


def preset_spec(preset: TheoremPreset) -> Tuple[RepresentationSpec, int]:
    instance = resolve(preset)
    return instance.spec, instance.d


def preset_for(m: int, l: int, k: int) -> Optional[TheoremPreset]:
    """The non-orthogonal theorem family covering Delta(m; l/k), if any."""
    q, t = bounds.decompose(m)
    if l == 2 and k >= 2:
        return TheoremPreset(identifier="thm3.1", k=k, q=q, t=t)
    if (l, k) == (3, 4):
        return TheoremPreset(identifier="thm4.1", q=q, t=t)
    return None


# ---------------------------------------------------------------------------
# Reproduction grid
# ---------------------------------------------------------------------------

def _qt_pairs(q_values, orthogonal: bool):
    for q in q_values:
        if orthogonal and q < 1:
            continue
        for t in range(2 if orthogonal else 1, 2 ** q + 1):
            yield q, t


def reproduction_grid(max_q: int = 3, max_q_l2: int = 2) -> List[TheoremPreset]:
    """
    Every preset instance of the reproduction table, in table order.

    l = 2 families use k = 2..5 and q = 0..max_q_l2; the (3, 4) families use
    q = 0..max_q.
    """
    out: List[TheoremPreset] = []
    for ident, orthogonal in (("thm3.1", False), ("thm3.2", True)):
        for k in range(2, 6):
            for q, t in _qt_pairs(range(0, max_q_l2 + 1), orthogonal):
                out.append(TheoremPreset(identifier=ident, k=k, q=q, t=t))
    for ident, orthogonal in (("thm4.1", False), ("thm4.2", True)):
        for q, t in _qt_pairs(range(0, max_q + 1), orthogonal):
            out.append(TheoremPreset(identifier=ident, q=q, t=t))
    for q in range(1, max_q + 1):
        out.append(TheoremPreset(identifier="prop4.3", q=q))
    for k, q, t, max_d in ((2, 0, 1, 3), (3, 0, 1, 3), (3, 1, 1, 2), (3, 1, 2, 2)):
        for d in range(1, max_d + 1):
            out.append(TheoremPreset(identifier="prop5.4a", k=k, q=q, t=t, d=d))
    for q, t, max_d in ((0, 1, 2), (1, 2, 1)):
        for d in range(1, max_d + 1):
            out.append(TheoremPreset(identifier="prop5.4b", q=q, t=t, d=d))
    out.append(TheoremPreset(identifier="prop6.1a"))
    out.append(TheoremPreset(identifier="prop6.1b"))
    return out


