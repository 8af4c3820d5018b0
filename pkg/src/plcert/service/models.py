"""Request and response models for the HTTP service.

The `map` field of every request is a mapspec object (see plcert.mapspec);
it is kept as a raw JSON object here so the mapspec parser can produce its
own diagnostics (unknown fields, rational-string validation, lambda range)
instead of a generic schema error.  Rationals cross the wire as strings.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field

Rational = str

Variant = Literal["auto", "two-fixed", "halfline", "unique-fixed"]


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str


class EvalRequest(BaseModel):
    map: dict[str, Any]
    x: Rational


class EvalResponse(BaseModel):
    map_id: str
    x: Rational
    value: Rational


class FixedPointsRequest(BaseModel):
    map: dict[str, Any]
    window: tuple[Rational, Rational]
    iterate: int = Field(default=1, ge=1)


class FixedPointsResponse(BaseModel):
    map_id: str
    window: tuple[Rational, Rational]
    iterate: int
    fixed_points: list[tuple[Rational, Rational]]


class PlotRequest(BaseModel):
    map: dict[str, Any]
    window: tuple[Rational, Rational]
    iterate: int = Field(default=1, ge=1)


class PlotResponse(BaseModel):
    map_id: str
    svg: str


class CertificatePayload(BaseModel):
    base: tuple[Rational, Rational]
    pieces: list[list[tuple[Rational, Rational]]]
    iterate: int = Field(default=1, ge=1)


class FindHorseshoeRequest(BaseModel):
    map: dict[str, Any]
    variant: Variant = "auto"


class VerifyHorseshoeRequest(BaseModel):
    map: dict[str, Any]
    certificate: CertificatePayload


class EntropyRequest(BaseModel):
    map: dict[str, Any]
    variant: Variant = "auto"
    tol: float = Field(default=1e-9, gt=0)


class SpecRefuteRequest(BaseModel):
    map: dict[str, Any]
    eps: Rational = "1/2"


class AcceptanceRequest(BaseModel):
    criteria: Optional[list[int]] = None


class ErrorResponse(BaseModel):
    error: str
    message: str
