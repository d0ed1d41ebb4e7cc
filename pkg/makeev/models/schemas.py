"""
Pydantic models for specs, input files and reports.
These schemas are shared by the CLI, the HTTP service and the engine itself,
so every report has exactly one JSON shape.
"""

from enum import Enum
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# ---------------------------------------------------------------------------
# Constraint blocks
# ---------------------------------------------------------------------------
class EquipBlock(_Frozen):
    """
    Equip(l, vars): the characters of weight 1..l on the named variables.

    Block dimension is sum_{j=1}^{l} C(|vars|, j).
    """
    kind: Literal["equip"] = "equip"
    l: int = Field(..., ge=1)
    vars: Tuple[int, ...] = Field(..., min_length=1)
    mult: int = Field(default=1, ge=1)

    @field_validator("vars")
    @classmethod
    def _strictly_increasing(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if v[0] < 1:
            raise ValueError("variable indices are 1-based")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError(f"vars must be strictly increasing, got {list(v)}")
        return v

    @model_validator(mode="after")
    def _level_fits(self) -> "EquipBlock":
        if self.l > len(self.vars):
            raise ValueError(f"level {self.l} exceeds |vars| = {len(self.vars)}")
        return self


class OrthoBlock(_Frozen):
    """Ortho(pairs): one constituent t_i + t_j per pair (i, j), i < j."""
    kind: Literal["ortho"] = "ortho"
    pairs: Tuple[Tuple[int, int], ...] = Field(default=())
    mult: int = Field(default=1, ge=1)

    @field_validator("pairs")
    @classmethod
    def _valid_pairs(cls, v: Tuple[Tuple[int, int], ...]) -> Tuple[Tuple[int, int], ...]:
        for i, j in v:
            if i < 1 or j <= i:
                raise ValueError(f"pair ({i}, {j}) must satisfy 1 <= i < j")
        if len(set(v)) != len(v):
            raise ValueError("pairs must be distinct")
        return v


Block = Annotated[Union[EquipBlock, OrthoBlock], Field(discriminator="kind")]


class RepresentationSpec(_Frozen):
    """A Z_2^k-representation U described as a list of constraint blocks."""
    k: int = Field(..., ge=1)
    blocks: Tuple[Block, ...] = Field(default=())

    @model_validator(mode="after")
    def _indices_within_k(self) -> "RepresentationSpec":
        for n, block in enumerate(self.blocks):
            used = block.vars if isinstance(block, EquipBlock) else [x for p in block.pairs for x in p]
            if any(x > self.k for x in used):
                raise ValueError(f"block {n} uses a variable index above k = {self.k}")
        return self


class SpecFile(RepresentationSpec):
    """On-disk spec: a representation plus the target dimension d."""
    d: int = Field(..., ge=1)

    def to_spec(self) -> RepresentationSpec:
        return RepresentationSpec(k=self.k, blocks=self.blocks)

    @classmethod
    def from_spec(cls, spec: RepresentationSpec, d: int) -> "SpecFile":
        return cls(k=spec.k, d=d, blocks=spec.blocks)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------
class CertificateStatus(str, Enum):
    CERTIFIED = "Certified"
    NOT_CERTIFIED = "NotCertified"
    DIMENSION_MISMATCH = "DimensionMismatch"


PresetId = Literal[
    "thm3.1", "thm3.2", "thm4.1", "thm4.2", "prop4.3",
    "prop5.4a", "prop5.4b", "prop6.1a", "prop6.1b",
]


class TheoremPreset(_Frozen):
    """A theorem family plus its parameters; unused parameters stay None."""
    identifier: PresetId
    k: Optional[int] = None
    q: Optional[int] = None
    t: Optional[int] = None
    d: Optional[int] = None

    def label(self) -> str:
        params = [f"{name}={getattr(self, name)}" for name in ("k", "q", "t", "d") if getattr(self, name) is not None]
        return f"{self.identifier}({', '.join(params)})" if params else self.identifier


class CertificateResult(BaseModel):
    """
    Outcome of the full-monomial test.

    Certified iff p_U is exactly t_1^d ... t_k^d under caps d+1. For
    DimensionMismatch the polynomial is never computed, so residual_support
    is 0 and max_degrees is empty.
    """
    k: int
    d: int
    spec: RepresentationSpec
    dim_U: int
    status: CertificateStatus
    residual_support: int = 0
    max_degrees: List[int] = Field(default_factory=list)
    preset: Optional[str] = None

    @property
    def certified(self) -> bool:
        return self.status == CertificateStatus.CERTIFIED

    @property
    def target_dimension(self) -> int:
        return self.k * self.d


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------
BoundSource = Literal["ramos", "mlz", "bk", "theorem-preset"]


class BoundReport(BaseModel):
    """Lower and best known upper bound for Delta(m; l/k) or its orthogonal variant."""
    m: int
    l: int
    k: int
    orthogonal: bool = False
    lower: int
    upper_known: Optional[int] = None
    upper_source: Optional[BoundSource] = None
    expected_lower: int

    @model_validator(mode="after")
    def _bracket(self) -> "BoundReport":
        if self.upper_known is not None and self.lower > self.upper_known:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper_known}")
        return self


# ---------------------------------------------------------------------------
# Search and reproduction table
# ---------------------------------------------------------------------------
SearchPolicy = Literal["paper", "bisection-pad", "ortho-then-pad"]


class SearchCandidate(BaseModel):
    """Diagnostics for one d tried by the search."""
    d: int
    status: str  # a CertificateStatus value, "skipped" or "skipped(resource)"
    reason: Optional[str] = None


class SearchReport(BaseModel):
    m: int
    l: int
    k: int
    policy: SearchPolicy
    d_min: int
    d_max: int
    found: bool
    d: Optional[int] = None
    spec: Optional[SpecFile] = None
    candidates: List[SearchCandidate] = Field(default_factory=list)


class TableRow(BaseModel):
    """One row of the reproduction table."""
    family: str
    params: str
    m: int
    l: int
    k: int
    orthogonal: bool
    lower: Optional[int] = None
    upper: Optional[int] = None
    expected_d: int
    d: int
    status: str  # a CertificateStatus value or "skipped(resource)"
    ok: bool


# ---------------------------------------------------------------------------
# Arrangements and masses
# ---------------------------------------------------------------------------
class HyperplaneModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    a: List[float] = Field(..., min_length=1)
    b: float = 0.0


class ArrangementFile(BaseModel):
    """k hyperplanes in R^d as sphere coordinates (a, b) with |a|^2 + b^2 = 1."""
    model_config = ConfigDict(extra="forbid")

    d: int = Field(..., ge=1)
    hyperplanes: List[HyperplaneModel] = Field(..., min_length=1)


class MassModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    points: List[List[float]] = Field(..., min_length=1)
    weights: Optional[List[float]] = None  # default 1.0 per point


class MassesFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    d: int = Field(..., ge=1)
    masses: List[MassModel] = Field(..., min_length=1)


# ---------------------------------------------------------------------------
# Verification and solving
# ---------------------------------------------------------------------------
class MassFourier(BaseModel):
    """Per-mass part of a Fourier report; both tables are indexed by the integer encoding of g or h."""
    total_weight: float
    region_masses: List[float]
    coefficients: List[float]
    max_relative_residual: float
    passed: bool


class OrthogonalityVerdict(BaseModel):
    r: int
    s: int
    inner_product: float
    passed: bool


class FourierReport(BaseModel):
    l: int
    k: int
    rel_tol: float
    equipartition_set: List[int]
    masses: List[MassFourier]
    orthogonality: Optional[List[OrthogonalityVerdict]] = None

    @computed_field
    @property
    def passed(self) -> bool:
        ortho_ok = all(v.passed for v in self.orthogonality) if self.orthogonality is not None else True
        return ortho_ok and all(m.passed for m in self.masses)


class SolveReport(BaseModel):
    k: int
    l: int
    d: int
    orthogonal: bool
    seed: int
    restarts: int
    best_restart: int
    residual: float
    tol: float
    passed: bool
    arrangement: ArrangementFile


# ---------------------------------------------------------------------------
# Validation models
# ---------------------------------------------------------------------------
class ValidationIssue(BaseModel):
    """A single validation issue (error or warning)."""
    field: str
    message: str
    severity: str  # "error" or "warning"
    line: Optional[int] = None
    column: Optional[int] = None


class ValidationResult(BaseModel):
    """Aggregated validation results for one input file."""
    is_valid: bool
    errors: List[ValidationIssue] = Field(default_factory=list)
    warnings: List[ValidationIssue] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# API request / response models
# ---------------------------------------------------------------------------
class SearchRequest(BaseModel):
    m: int = Field(..., ge=1)
    l: int = Field(..., ge=1)
    k: int = Field(..., ge=1)
    policy: SearchPolicy = "paper"
    d_max: Optional[int] = Field(default=None, ge=1)


class VerifyRequest(BaseModel):
    arrangement: ArrangementFile
    masses: MassesFile
    l: int = Field(..., ge=1)
    orthogonal: bool = False
    tol: float = Field(default=1e-9, gt=0)


class HealthResponse(BaseModel):
    status: str
    version: str
    cell_limit: int


class ErrorResponse(BaseModel):
    """Standard error response."""
    success: bool = False
    error_type: str
    message: str
    details: Optional[Dict] = None
