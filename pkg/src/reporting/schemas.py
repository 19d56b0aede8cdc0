"""Pydantic models for certificates and the machine-readable report."""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field


class Check(BaseModel):
    """A single numerical check: residual compared against a threshold."""

    name: str = Field(description="What was checked.")
    residual: float = Field(description="Measured residual (or margin).")
    threshold: float = Field(description="Bound the residual is compared with.")
    passed: bool = Field(description="Outcome of the comparison.")
    detail: str = Field(default="", description="Optional free-text context.")

    @classmethod
    def below(cls, name: str, residual: float, threshold: float, detail: str = "") -> "Check":
        return cls(name=name, residual=float(residual), threshold=float(threshold),
                   passed=bool(residual < threshold), detail=detail)

    @classmethod
    def above(cls, name: str, margin: float, threshold: float, detail: str = "") -> "Check":
        """Passes when ``margin`` exceeds ``threshold`` (e.g. |det S|)."""
        return cls(name=name, residual=float(margin), threshold=float(threshold),
                   passed=bool(margin > threshold), detail=detail)


class Certificate(BaseModel):
    """A named collection of checks."""

    name: str
    checks: List[Check] = Field(default_factory=list)
    notes: Dict[str, str] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Optional[Check]:
        return next((c for c in self.checks if not c.passed), None)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def summary(self) -> dict:
        data = self.model_dump()
        data["passed"] = self.passed
        return data


class SimpleRow(BaseModel):
    """One simple object of the double."""

    index: int
    dimension: List[float] = Field(description="d(X) as [re, im].")
    twist: List[float] = Field(description="ω as [re, im].")
    multiplicities: Dict[str, int] = Field(description="N_i^X for every label i.")
    residual: float = Field(
        default=0.0, description="Worst of the idempotent, centrality and twist residuals of this simple."
    )


class ModularDataReport(BaseModel):
    S: List[List[List[float]]] = Field(description="Unnormalized S as [re, im] pairs.")
    S_normalized: List[List[List[float]]] = Field(description="S / sqrt(dim Z).")
    T: List[List[float]] = Field(description="Twists as [re, im] pairs.")
    conjugation: List[int]
    delta_plus: List[float]
    delta_minus: List[float]
    dim_double: List[float]


class Report(BaseModel):
    """Top-level JSON report emitted by every command."""

    schema_version: Literal["1"] = "1"
    command: str
    input: Dict[str, str] = Field(default_factory=dict, description="Input descriptor.")
    tolerance: float
    seed: Optional[int] = None
    certificates: List[dict] = Field(default_factory=list)
    simples: List[SimpleRow] = Field(default_factory=list)
    modular_data: Optional[ModularDataReport] = None
    values: Dict[str, List[float]] = Field(default_factory=dict, description="Named scalars as [re, im].")
    passed: bool = True
    failure: Optional[str] = None
    timings: Optional[Dict[str, float]] = None
