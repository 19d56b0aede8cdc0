"""Pydantic models for the JSON input files.

These are the single source of truth for what a category or group file may contain.
"""
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

ComplexPair = Tuple[float, float]


class FEntry(BaseModel):
    """One F-symbol F^{abc}_d[(e,alpha,beta),(f,gamma,delta)]."""

    model_config = ConfigDict(extra="forbid")

    abc: Tuple[str, str, str] = Field(description="The three outer labels a, b, c.")
    d: str = Field(description="Total charge of the tree.")
    e: str = Field(description="Internal edge of the left tree ((ab)c).")
    f: str = Field(description="Internal edge of the right tree (a(bc)).")
    alpha: int = Field(default=0, ge=0, description="Multiplicity index of a b -> e.")
    beta: int = Field(default=0, ge=0, description="Multiplicity index of e c -> d.")
    gamma: int = Field(default=0, ge=0, description="Multiplicity index of b c -> f.")
    delta: int = Field(default=0, ge=0, description="Multiplicity index of a f -> d.")
    v: ComplexPair = Field(description="Value as [re, im].")


class REntry(BaseModel):
    """One R-symbol: entry [alpha, beta] of the matrix of c(X_a, X_b) on channel c."""

    model_config = ConfigDict(extra="forbid")

    ab: Tuple[str, str] = Field(description="Labels a, b braided as c(X_a, X_b).")
    c: str = Field(description="Fusion channel.")
    alpha: int = Field(default=0, ge=0, description="Index of the codomain tree b a -> c.")
    beta: int = Field(default=0, ge=0, description="Index of the domain tree a b -> c.")
    v: ComplexPair = Field(description="Value as [re, im].")


class CategoryFile(BaseModel):
    """A skeletal spherical fusion category."""

    model_config = ConfigDict(extra="forbid")

    name: str = Field(description="Human readable name, e.g. 'Fibonacci'.")
    labels: List[str] = Field(min_length=1, description="Simple objects; the first one is the unit.")
    dual: Dict[str, str] = Field(description="Duality involution label -> label.")
    fusion: List[Tuple[str, str, str, int]] = Field(description="Entries [a, b, c, N_ab^c]; omitted entries are 0.")
    dims: Dict[str, ComplexPair] = Field(description="Quantum dimension of every label.")
    F: List[FEntry] = Field(default_factory=list, description="Non-default F-symbols.")
    R: Optional[List[REntry]] = Field(default=None, description="Optional braiding.")
    unitary: bool = Field(default=False, description="Enables the unitarity checks.")
    pivotal: Optional[Dict[str, ComplexPair]] = Field(default=None, description="Cup coefficients, default 1.")

    @model_validator(mode="after")
    def _labels_are_known(self) -> "CategoryFile":
        known = set(self.labels)
        if len(known) != len(self.labels):
            raise ValueError("duplicate labels")
        used = set(self.dual) | set(self.dual.values()) | set(self.dims)
        for a, b, c, _ in self.fusion:
            used |= {a, b, c}
        for entry in self.F:
            used |= set(entry.abc) | {entry.d, entry.e, entry.f}
        for entry in self.R or []:
            used |= set(entry.ab) | {entry.c}
        used |= set(self.pivotal or {})
        unknown = used - known
        if unknown:
            raise ValueError(f"unknown labels: {sorted(unknown)}")
        if set(self.dims) != known or set(self.dual) != known:
            raise ValueError("'dims' and 'dual' must list every label")
        return self


class GroupFile(BaseModel):
    """A finite group, either by multiplication table or by shorthand."""

    model_config = ConfigDict(extra="forbid")

    order: Optional[int] = Field(default=None, ge=1, description="Group order n.")
    table: Optional[List[List[int]]] = Field(default=None, description="n×n table of 0-based indices.")
    cyclic: Optional[int] = Field(default=None, ge=1, description="Shorthand for Z_n.")
    symmetric: Optional[int] = Field(default=None, ge=1, le=5, description="Shorthand for S_n.")

    @model_validator(mode="after")
    def _one_form(self) -> "GroupFile":
        forms = [self.table is not None, self.cyclic is not None, self.symmetric is not None]
        if sum(forms) != 1:
            raise ValueError("give exactly one of 'table', 'cyclic', 'symmetric'")
        if self.table is not None and self.order is not None and len(self.table) != self.order:
            raise ValueError("'order' does not match the table size")
        return self
