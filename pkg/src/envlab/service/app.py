"""HTTP surface of the verification engine.

Every endpoint is a stateless request/response wrapper over the core
package; space data arrives inline (builtin name or JSON schema), reports
leave as JSON.  Domain errors map to 400 with a structured detail.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..envelope import (
    SearchCapExceededError,
    Slope,
    SlopeError,
    candidate_from_mc,
    minimal_n,
    verify_candidate,
)
from ..golden import run_reference_checks
from ..laurent import ExpVec
from ..spaces import (
    GKMSpace,
    SpaceError,
    UncertifiedSpaceError,
    builtin_space,
    space_from_dict,
)
from .models import (
    CellReport,
    DescribeRequest,
    ExamplesReport,
    HealthReport,
    SpaceReport,
    SpaceSource,
    VerifyReport,
    VerifyRequest,
)

app = FastAPI(
    title="envlab",
    version=__version__,
    description="Exact fixed-point verification of stable-envelope axioms for motivic cell classes",
)


def _resolve_space(source: SpaceSource) -> GKMSpace:
    if source.builtin is not None:
        weights = None
        if source.builtin.weights is not None:
            weights = [ExpVec(tuple(w)) for w in source.builtin.weights]
        return builtin_space(source.builtin.name, weights)
    return space_from_dict(source.space or {})


def _bad_request(exc: Exception, code: str) -> HTTPException:
    return HTTPException(status_code=400, detail={"code": code, "message": str(exc)})


def _weight_json(w: ExpVec) -> list[int]:
    return list(w.a_part) + [w.y_part]


@app.get("/health", response_model=HealthReport)
def health() -> HealthReport:
    return HealthReport(status="ok", version=__version__)


@app.post("/space", response_model=SpaceReport)
def describe_space(request: DescribeRequest) -> SpaceReport:
    try:
        space = _resolve_space(request.source)
    except SpaceError as exc:
        raise _bad_request(exc, "invalid_space") from exc
    cells = None
    order = None
    sigma = request.sigma
    if sigma is not None:
        try:
            sigma_t = tuple(sigma)
            less = space.closure_less(sigma_t)
            cells = {
                p: CellReport(
                    dim_cell=space.cell_data(sigma_t, p).dim_cell,
                    attracting=[_weight_json(w) for w in space.cell_data(sigma_t, p).attracting],
                    repelling=[_weight_json(w) for w in space.cell_data(sigma_t, p).repelling],
                )
                for p in space.points
            }
            order = sorted([a, b] for b in space.points for a in less[b])
        except SpaceError as exc:
            raise _bad_request(exc, "invalid_chamber") from exc
    return SpaceReport(
        name=space.name,
        rank=space.rank,
        dim=space.dim,
        points=list(space.points),
        tangent={p: [_weight_json(w) for w in space.tangent[p]] for p in space.points},
        bundles={
            name: {
                "ampleness": b.ampleness,
                "restrictions": {p: list(b.restrictions[p].a_part) for p in space.points},
            }
            for name, b in space.bundles.items()
        },
        certifications={
            "smooth_closures": space.smooth_closure_certified,
            "local_product": space.local_product_certified,
        },
        sigma=list(sigma) if sigma is not None else None,
        cells=cells,
        order=order,
    )


@app.post("/verify", response_model=VerifyReport)
def verify(request: VerifyRequest) -> VerifyReport:
    try:
        space = _resolve_space(request.source)
    except SpaceError as exc:
        raise _bad_request(exc, "invalid_space") from exc
    if not space.smooth_closure_certified:
        raise HTTPException(
            status_code=400,
            detail={
                "code": "uncertified_space",
                "message": (
                    f"space {space.name} does not certify smooth cell closures; "
                    "class computation would be unsound, refusing to verify"
                ),
            },
        )
    sigma = tuple(request.sigma)
    if request.slope.kind == "trivial":
        slope = Slope.trivial_slope()
    else:
        slope = Slope.of_bundle(request.slope.bundle, request.slope.denominator)
    found_n = None
    probe = None
    try:
        space.assert_generic(sigma)
        if request.slope.search:
            result = minimal_n(space, sigma, slope, cap=request.search_cap)
            found_n = result.n
            probe = list(result.probe)
            slope = slope.with_denominator(result.n)
        candidate = candidate_from_mc(space, sigma)
        report = verify_candidate(candidate, slope, strong=not request.weak_c)
    except (UncertifiedSpaceError, SlopeError, SpaceError) as exc:
        raise _bad_request(exc, "invalid_request") from exc
    except SearchCapExceededError as exc:
        raise HTTPException(
            status_code=409, detail={"code": "search_cap_exceeded", "message": str(exc)}
        ) from exc
    return VerifyReport(
        verdict=report.verdict,
        slope=slope.describe(),
        minimal_n=found_n,
        probe=probe,
        report=report.to_json_dict(),
    )


@app.get("/examples", response_model=ExamplesReport)
def examples() -> ExamplesReport:
    result = run_reference_checks()
    return ExamplesReport(
        passed=result["passed"],
        summary=result["summary"],
        matched=result["matched"],
        total=result["total"],
        sections=result["sections"],
    )
