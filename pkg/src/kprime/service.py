"""HTTP wrapper around the verification library.

Run with ``uvicorn kprime.service:app``.  Every endpoint is a thin
translation layer: request models carry the same arguments the library
functions take, response models carry decimal strings (never floats) so
no precision is lost in transit.
"""

from __future__ import annotations

from typing import List, Optional

import mpmath
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import lattice, lseries, qseries, quadrature, registry, relations
from .errors import AccuracyShortfall, ConvergenceFailure, DomainError, UnknownIdError
from .precision import BigReal, PrecisionContext

app = FastAPI(
    title="kprime",
    description="elliptic-moment, L-value, and lattice-sum verification",
)


class RecordInfo(BaseModel):
    id: str
    description: str
    method: str
    target: int
    anchor: Optional[str] = None


class VerifyRequest(BaseModel):
    id: Optional[str] = None
    pattern: str = "*"
    digits: Optional[int] = Field(default=None, ge=1, le=200)
    parallelism: int = Field(default=1, ge=1, le=16)


class ReportModel(BaseModel):
    id: str
    status: str
    lhs_value: Optional[str] = None
    rhs_value: Optional[str] = None
    digits_achieved: Optional[int] = None
    first_mismatch: Optional[str] = None
    diagnostic: Optional[str] = None
    wall_time: float


class VerifySummary(BaseModel):
    passed: int
    failed: int
    shortfall: int
    reports: List[ReportModel]


class ValueRequest(BaseModel):
    digits: int = Field(default=40, ge=1, le=200)


class MomentRequest(ValueRequest):
    id: str


class LValueRequest(ValueRequest):
    form: str
    s: int


class LatticeRequest(BaseModel):
    spec: str
    digits: int = Field(default=12, ge=1, le=60)


class ValueResponse(BaseModel):
    value: str
    digits: int


class ExpandRequest(BaseModel):
    eta: str
    order: int = Field(ge=1, le=20000)


class ExpandResponse(BaseModel):
    lead: str
    coefficients: List[List[str]]


class DiscoverRequest(BaseModel):
    recipe: str
    basis: str
    digits: int = Field(default=60, ge=20, le=200)


class DiscoverResponse(BaseModel):
    closed_form: str
    relation: List[int]
    verified_digits: int


def _value_response(value: BigReal, digits: int) -> ValueResponse:
    shown = min(digits + 10, value.precision)
    return ValueResponse(
        value=mpmath.nstr(value.value, shown, strip_zeros=False), digits=digits
    )


def _translated(exc: Exception) -> HTTPException:
    if isinstance(exc, UnknownIdError):
        return HTTPException(status_code=404, detail=str(exc))
    if isinstance(exc, (DomainError, ValueError)):
        return HTTPException(status_code=400, detail=str(exc))
    if isinstance(exc, (AccuracyShortfall, ConvergenceFailure)):
        return HTTPException(status_code=422, detail=str(exc))
    raise exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "records": len(registry.load_registry())}


@app.get("/records", response_model=List[RecordInfo])
def records(pattern: str = "*") -> List[RecordInfo]:
    try:
        ids = registry.registry_ids(pattern)
    except UnknownIdError as exc:
        raise HTTPException(status_code=404, detail=str(exc))
    reg = registry.load_registry()
    return [
        RecordInfo(
            id=r.id,
            description=r.description,
            method=r.method,
            target=r.target,
            anchor=r.anchor,
        )
        for r in (reg[i] for i in ids)
    ]


@app.post("/verify", response_model=VerifySummary)
def verify(req: VerifyRequest) -> VerifySummary:
    try:
        if req.id is not None:
            reports = [registry.verify(req.id, target=req.digits)]
        else:
            ctx = PrecisionContext(req.digits) if req.digits else None
            reports = registry.run_all(
                req.pattern, parallelism=req.parallelism, ctx=ctx
            )
    except UnknownIdError as exc:
        raise HTTPException(status_code=404, detail=str(exc))
    models = [ReportModel(**r.to_dict()) for r in reports]
    return VerifySummary(
        passed=sum(r.status == "pass" for r in models),
        failed=sum(r.status == "fail" for r in models),
        shortfall=sum(r.status == "shortfall" for r in models),
        reports=models,
    )


@app.post("/moment", response_model=ValueResponse)
def moment(req: MomentRequest) -> ValueResponse:
    try:
        value = quadrature.moment(req.id, PrecisionContext(req.digits))
    except Exception as exc:  # noqa: BLE001 - translated to HTTP statuses
        raise _translated(exc)
    return _value_response(value, req.digits)


@app.post("/lvalue", response_model=ValueResponse)
def lvalue(req: LValueRequest) -> ValueResponse:
    try:
        value = lseries.lvalue(req.form, req.s, PrecisionContext(req.digits))
    except Exception as exc:  # noqa: BLE001
        raise _translated(exc)
    return _value_response(value, req.digits)


@app.post("/lsum", response_model=ValueResponse)
def lsum(req: LatticeRequest) -> ValueResponse:
    ctx = PrecisionContext(max(req.digits + 10, 25))
    try:
        spec = lattice.lattice_spec(req.spec)
        value = lattice.accelerated_sum(spec, ctx, target_digits=req.digits)
    except Exception as exc:  # noqa: BLE001
        raise _translated(exc)
    return _value_response(value, req.digits)


@app.post("/expand", response_model=ExpandResponse)
def expand(req: ExpandRequest) -> ExpandResponse:
    try:
        series = qseries.eta_quotient_expand(req.eta, req.order + 1)
    except Exception as exc:  # noqa: BLE001
        raise _translated(exc)
    pairs = []
    e = series.lead
    while e <= series.valid_through() and len(pairs) < req.order:
        pairs.append([str(e), str(series.coefficient(e))])
        e += 1
    return ExpandResponse(lead=str(series.lead), coefficients=pairs)


@app.post("/discover", response_model=DiscoverResponse)
def discover(req: DiscoverRequest) -> DiscoverResponse:
    from .cli import _recipe_value

    ctx = PrecisionContext(req.digits)
    try:
        basis = relations.basis_by_name(req.basis)
        value = _recipe_value(req.recipe, ctx)
        report = relations.discovery_report(
            value, basis, ctx, recompute=lambda wide: _recipe_value(req.recipe, wide)
        )
    except Exception as exc:  # noqa: BLE001
        raise _translated(exc)
    if report is None:
        raise HTTPException(
            status_code=404, detail="no integer relation found in this basis"
        )
    return DiscoverResponse(
        closed_form=report["closed_form_text"],
        relation=report["relation"],
        verified_digits=report["verified_digits"],
    )
