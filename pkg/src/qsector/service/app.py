"""FastAPI service exposing the core operations over HTTP.

Run with ``uvicorn qsector.service.app:app``.  Scientific negatives (a
non-colorable instance, a failed frame-function check) are 200 responses;
HTTP 400 is reserved for malformed input.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import InputError
from . import handlers
from . import schemas as s

app = FastAPI(title="qsector", version=__version__)


@app.exception_handler(InputError)
async def input_error_handler(request: Request, exc: InputError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/v1/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/v1/ks-check", response_model=s.KsCheckResponse)
def ks_check(req: s.KsCheckRequest) -> s.KsCheckResponse:
    return handlers.ks_check(req)


@app.post("/v1/gleason-test", response_model=s.GleasonTestResponse)
def gleason_test(req: s.GleasonTestRequest) -> s.GleasonTestResponse:
    return handlers.gleason_test(req)


@app.post("/v1/sector", response_model=s.SectorResponse)
def sector(req: s.SectorRequest) -> s.SectorResponse:
    return handlers.sector(req)


@app.post("/v1/overlap", response_model=s.OverlapResponse)
def overlap(req: s.OverlapRequest) -> s.OverlapResponse:
    return handlers.overlap(req)


@app.post("/v1/operator-block", response_model=s.OperatorBlockResponse)
def operator_block(req: s.OperatorBlockRequest) -> s.OperatorBlockResponse:
    return handlers.operator_block(req)


@app.post("/v1/cascade", response_model=s.CascadeResponse)
def cascade(req: s.CascadeRequest) -> s.CascadeResponse:
    return handlers.cascade(req)
