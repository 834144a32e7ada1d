"""Request and response models for the verification service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator


class BuiltinSpec(BaseModel):
    name: str = Field(description="Builtin space name such as P2 or P1xP2")
    weights: Optional[list[list[int]]] = Field(
        default=None,
        description="Coordinate weights (base-torus exponents) for a single projective factor",
    )


class SpaceSource(BaseModel):
    builtin: Optional[BuiltinSpec] = None
    space: Optional[dict] = Field(
        default=None, description="Inline space data in the JSON space-file schema"
    )

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.builtin is None) == (self.space is None):
            raise ValueError("provide exactly one of 'builtin' or 'space'")
        return self


class SlopeSpec(BaseModel):
    kind: Literal["trivial", "bundle"] = "trivial"
    bundle: Optional[str] = None
    denominator: int = 1
    search: bool = Field(
        default=False, description="Search for the smallest denominator passing the strong checks"
    )

    @model_validator(mode="after")
    def _bundle_named(self):
        if self.kind == "bundle" and not self.bundle:
            raise ValueError("bundle slope needs a bundle name")
        return self


class DescribeRequest(BaseModel):
    source: SpaceSource
    sigma: Optional[list[int]] = None


class VerifyRequest(BaseModel):
    source: SpaceSource
    sigma: list[int]
    slope: SlopeSpec = SlopeSpec()
    weak_c: bool = False
    search_cap: Optional[int] = None


class CellReport(BaseModel):
    dim_cell: int
    attracting: list[list[int]]
    repelling: list[list[int]]


class SpaceReport(BaseModel):
    name: str
    rank: int
    dim: int
    points: list[str]
    tangent: dict[str, list[list[int]]]
    bundles: dict[str, dict]
    certifications: dict[str, bool]
    sigma: Optional[list[int]] = None
    cells: Optional[dict[str, CellReport]] = None
    order: Optional[list[list[str]]] = None


class VerifyReport(BaseModel):
    verdict: bool
    slope: str
    minimal_n: Optional[int] = None
    probe: Optional[list[bool]] = None
    report: dict


class ExamplesReport(BaseModel):
    passed: bool
    summary: str
    matched: int
    total: int
    sections: list[dict]


class HealthReport(BaseModel):
    status: str
    version: str
