"""FastAPI application wiring requests to the shared handlers.

Responses are rendered with the canonical report serializer so service
output is byte-identical to the CLI's for the same operation.  Domain
errors map to HTTP 400 with the error taxonomy code.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .. import __version__
from ..errors import PLCertError
from ..report import dumps_report
from . import handlers, models


def _canonical(payload: dict) -> Response:
    return Response(content=dumps_report(payload), media_type="application/json")


def create_app() -> FastAPI:
    app = FastAPI(title="plcert", version=__version__)

    @app.exception_handler(PLCertError)
    async def _domain_error(request: Request, exc: PLCertError) -> JSONResponse:
        body = models.ErrorResponse(error=exc.code, message=str(exc))
        return JSONResponse(status_code=400, content=body.model_dump())

    @app.get("/v1/health")
    def health() -> Response:
        body = models.HealthResponse(status="ok", version=__version__)
        return _canonical(body.model_dump())

    @app.post("/v1/eval")
    def eval_map(req: models.EvalRequest) -> Response:
        return _canonical(handlers.eval_map(req.map, req.x))

    @app.post("/v1/fixed-points")
    def fixed_points(req: models.FixedPointsRequest) -> Response:
        return _canonical(handlers.fixed_points(req.map, req.window, req.iterate))

    @app.post("/v1/plot")
    def plot(req: models.PlotRequest) -> Response:
        return _canonical(handlers.plot(req.map, req.window, req.iterate))

    @app.post("/v1/horseshoe/find")
    def horseshoe_find(req: models.FindHorseshoeRequest) -> Response:
        return _canonical(handlers.find_horseshoe(req.map, req.variant))

    @app.post("/v1/horseshoe/verify")
    def horseshoe_verify(req: models.VerifyHorseshoeRequest) -> Response:
        return _canonical(handlers.verify_horseshoe(
            req.map, req.certificate.model_dump()
        ))

    @app.post("/v1/entropy")
    def entropy(req: models.EntropyRequest) -> Response:
        return _canonical(handlers.entropy(req.map, req.variant, req.tol))

    @app.post("/v1/spec-refute")
    def spec_refute(req: models.SpecRefuteRequest) -> Response:
        return _canonical(handlers.spec_refute(req.map, req.eps))

    @app.post("/v1/acceptance")
    def acceptance(req: models.AcceptanceRequest) -> Response:
        return _canonical(handlers.acceptance(req.criteria))

    return app
