"""FastAPI application wrapping the handlers."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from .handlers import (ServiceError, handle_bench, handle_catalog,
                       handle_invariant, handle_poly, handle_verify,
                       handle_volume_scan)
from .models import (BenchRequest, BenchResponse, CatalogResponse,
                     InvariantRequest, InvariantResponse, PolyRequest,
                     PolyResponse, VerifyRequest, VerifyResponse,
                     VolumeScanRequest, VolumeScanResponse)


def create_app() -> FastAPI:
    app = FastAPI(title="qtopo",
                  description="Colored link polynomials and quantum "
                              "3-manifold invariants",
                  version=__version__)

    @app.exception_handler(ServiceError)
    async def service_error(_req: Request, exc: ServiceError):
        return JSONResponse(status_code=400,
                            content={"error": str(exc), "code": exc.code})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/poly", response_model=PolyResponse)
    def poly(req: PolyRequest) -> PolyResponse:
        return handle_poly(req)

    @app.post("/invariant", response_model=InvariantResponse)
    def invariant(req: InvariantRequest) -> InvariantResponse:
        return handle_invariant(req)

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        return handle_verify(req)

    @app.post("/volume-scan", response_model=VolumeScanResponse)
    def volume_scan(req: VolumeScanRequest) -> VolumeScanResponse:
        return handle_volume_scan(req)

    @app.post("/bench", response_model=BenchResponse)
    def bench(req: BenchRequest) -> BenchResponse:
        return handle_bench(req)

    @app.get("/catalog", response_model=CatalogResponse)
    def catalog() -> CatalogResponse:
        return handle_catalog()

    return app


app = create_app()
