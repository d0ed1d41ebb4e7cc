"""
Input File Validation

Parses and validates the JSON inputs of the toolkit (spec files, arrangement
files and masses files) and converts them into domain objects.

Key principle: fail loudly with a location.
- JSON syntax errors carry line and column
- Schema violations carry the field path
- Recoverable oddities (non-unit hyperplane coordinates) are fixed and
  reported as warnings
"""

import json
import logging
import math
from pathlib import Path
from typing import List, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from makeev.errors import SpecParseError
from makeev.models.schemas import (
    ArrangementFile,
    HyperplaneModel,
    MassesFile,
    MassModel,
    SpecFile,
    ValidationIssue,
    ValidationResult,
)
from makeev.services.equipart import SPHERE_TOL, Hyperplane, HyperplaneArrangement, WeightedPointCloud

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


class InputValidator:
    """
    Validates toolkit input files.

    Checks:
    1. Syntax: is the text valid JSON?
    2. Schema: does it match the file model (unknown keys rejected)?
    3. Consistency: do vector lengths agree with d, are weights positive?
    4. Normalization: are hyperplanes on the unit sphere?
    """

    # Deviation of |a|^2 + b^2 from 1 that is reported as a warning
    NORMALIZATION_WARN = 1e-6

    # ------------------------------------------------------------------
    # Generic parsing
    # ------------------------------------------------------------------

    def parse_model(self, text: str, model: Type[ModelT], source: str = "<input>") -> ModelT:
        """Parse JSON text into ``model``; SpecParseError with diagnostics on failure."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            issue = ValidationIssue(field="", message=e.msg, severity="error", line=e.lineno, column=e.colno)
            raise SpecParseError(
                f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}",
                {"source": source, "issues": [issue.model_dump()]},
            ) from e

        try:
            return model.model_validate(data)
        except ValidationError as e:
            issues = [
                ValidationIssue(
                    field=".".join(str(part) for part in err["loc"]) or "<root>",
                    message=err["msg"],
                    severity="error",
                )
                for err in e.errors()
            ]
            first = issues[0]
            raise SpecParseError(
                f"{source}: field '{first.field}': {first.message}",
                {"source": source, "issues": [i.model_dump() for i in issues]},
            ) from e

    def read(self, path: Union[str, Path]) -> str:
        try:
            return Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise SpecParseError(f"Cannot read {path}: {e.strerror}", {"source": str(path)}) from e

    # ------------------------------------------------------------------
    # Spec files
    # ------------------------------------------------------------------

    def parse_spec(self, text: str, source: str = "<spec>") -> SpecFile:
        spec = self.parse_model(text, SpecFile, source)
        logger.info(f"Parsed spec from {source}: k={spec.k}, d={spec.d}, {len(spec.blocks)} blocks")
        return spec

    def load_spec(self, path: Union[str, Path]) -> SpecFile:
        return self.parse_spec(self.read(path), str(path))

    # ------------------------------------------------------------------
    # Arrangement files
    # ------------------------------------------------------------------

    def validate_arrangement(self, model: ArrangementFile) -> ValidationResult:
        errors: List[ValidationIssue] = []
        warnings: List[ValidationIssue] = []

        for i, h in enumerate(model.hyperplanes):
            field = f"hyperplanes.{i}"
            if len(h.a) != model.d:
                errors.append(ValidationIssue(
                    field=f"{field}.a",
                    message=f"normal has {len(h.a)} coordinates, expected d = {model.d}",
                    severity="error",
                ))
                continue
            if not all(math.isfinite(x) for x in [*h.a, h.b]):
                errors.append(ValidationIssue(field=field, message="non-finite coordinate", severity="error"))
                continue
            if not any(h.a):
                errors.append(ValidationIssue(
                    field=f"{field}.a",
                    message="normal is zero (hyperplane at infinity)",
                    severity="error",
                ))
                continue
            deviation = abs(sum(x * x for x in h.a) + h.b ** 2 - 1.0)
            if deviation > self.NORMALIZATION_WARN:
                warnings.append(ValidationIssue(
                    field=field,
                    message=f"|a|^2 + b^2 deviates from 1 by {deviation:.3g}; normalized",
                    severity="warning",
                ))

        return ValidationResult(is_valid=not errors, errors=errors, warnings=warnings)

    def parse_arrangement(self, text: str, source: str = "<arrangement>") -> Tuple[HyperplaneArrangement, ValidationResult]:
        model = self.parse_model(text, ArrangementFile, source)
        result = self.validate_arrangement(model)
        self.raise_on_errors(result, source)
        return self.to_arrangement(model), result

    def load_arrangement(self, path: Union[str, Path]) -> Tuple[HyperplaneArrangement, ValidationResult]:
        return self.parse_arrangement(self.read(path), str(path))

    @staticmethod
    def to_arrangement(model: ArrangementFile) -> HyperplaneArrangement:
        planes = []
        for h in model.hyperplanes:
            if abs(sum(x * x for x in h.a) + h.b ** 2 - 1.0) <= SPHERE_TOL:
                planes.append(Hyperplane(h.a, h.b))
            else:
                planes.append(Hyperplane.from_raw(h.a, h.b))
        return HyperplaneArrangement(model.d, tuple(planes))

    @staticmethod
    def from_arrangement(arrangement: HyperplaneArrangement) -> ArrangementFile:
        return ArrangementFile(
            d=arrangement.d,
            hyperplanes=[HyperplaneModel(a=h.a.tolist(), b=h.b) for h in arrangement.hyperplanes],
        )

    # ------------------------------------------------------------------
    # Masses files
    # ------------------------------------------------------------------

    def validate_masses(self, model: MassesFile) -> ValidationResult:
        errors: List[ValidationIssue] = []

        for i, mass in enumerate(model.masses):
            field = f"masses.{i}"
            for j, point in enumerate(mass.points):
                if len(point) != model.d:
                    errors.append(ValidationIssue(
                        field=f"{field}.points.{j}",
                        message=f"point has {len(point)} coordinates, expected d = {model.d}",
                        severity="error",
                    ))
                elif not all(math.isfinite(x) for x in point):
                    errors.append(ValidationIssue(
                        field=f"{field}.points.{j}", message="non-finite coordinate", severity="error",
                    ))
            if mass.weights is None:
                continue
            if len(mass.weights) != len(mass.points):
                errors.append(ValidationIssue(
                    field=f"{field}.weights",
                    message=f"{len(mass.weights)} weights for {len(mass.points)} points",
                    severity="error",
                ))
            elif any(not (w > 0 and math.isfinite(w)) for w in mass.weights):
                errors.append(ValidationIssue(
                    field=f"{field}.weights", message="weights must be positive and finite", severity="error",
                ))

        return ValidationResult(is_valid=not errors, errors=errors)

    def parse_masses(self, text: str, source: str = "<masses>") -> Tuple[List[WeightedPointCloud], ValidationResult]:
        model = self.parse_model(text, MassesFile, source)
        result = self.validate_masses(model)
        self.raise_on_errors(result, source)
        return self.to_masses(model), result

    def load_masses(self, path: Union[str, Path]) -> Tuple[List[WeightedPointCloud], ValidationResult]:
        return self.parse_masses(self.read(path), str(path))

    @staticmethod
    def to_masses(model: MassesFile) -> List[WeightedPointCloud]:
        return [WeightedPointCloud(model.d, m.points, m.weights) for m in model.masses]

    @staticmethod
    def from_masses(masses: List[WeightedPointCloud]) -> MassesFile:
        return MassesFile(
            d=masses[0].d,
            masses=[MassModel(points=m.points.tolist(), weights=m.weights.tolist()) for m in masses],
        )

    # ------------------------------------------------------------------

    @staticmethod
    def raise_on_errors(result: ValidationResult, source: str) -> None:
        for warning in result.warnings:
            logger.warning(f"{source}: {warning.field}: {warning.message}")
        if result.errors:
            first = result.errors[0]
            raise SpecParseError(
                f"{source}: field '{first.field}': {first.message}",
                {"source": source, "issues": [e.model_dump() for e in result.errors]},
            )


# Singleton instance
_validator = None


def get_validator() -> InputValidator:
    """
    Get or create singleton validator instance.
    """
    global _validator
    if _validator is None:
        _validator = InputValidator()
    return _validator
