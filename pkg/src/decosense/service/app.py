"""FastAPI wrapper around the scenario runners.

One POST endpoint per scenario; domain and validation failures map to 400
with the single-line message the CLI relays verbatim.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..config import ConfigError, coerce
from ..scenarios import (
    ScenarioResult,
    run_detect,
    run_first_order,
    run_scale_hbar,
    run_simulate,
    run_sql,
)
from .schemas import FilePayload, HealthResponse, ScenarioRequest, ScenarioResponse

_COMMANDS = {
    "sql": run_sql,
    "simulate": run_simulate,
    "detect": run_detect,
    "first-order": run_first_order,
    "scale-hbar": run_scale_hbar,
}


def _response(result: ScenarioResult) -> ScenarioResponse:
    return ScenarioResponse(
        table=list(result.table),
        files=[FilePayload(relpath=rel, content=content) for rel, content in result.files],
    )


def _run(command: str, request: ScenarioRequest) -> ScenarioResponse:
    try:
        params = coerce(command, request.params)
        result = _COMMANDS[command](params)
    except ConfigError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except (ValueError, TypeError, RuntimeError) as exc:
        detail = str(exc).replace("\n", "; ") or type(exc).__name__
        raise HTTPException(status_code=400, detail=detail) from exc
    return _response(result)


def create_app() -> FastAPI:
    app = FastAPI(title="decosense", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/sql", response_model=ScenarioResponse)
    def sql(request: ScenarioRequest) -> ScenarioResponse:
        return _run("sql", request)

    @app.post("/simulate", response_model=ScenarioResponse)
    def simulate(request: ScenarioRequest) -> ScenarioResponse:
        return _run("simulate", request)

    @app.post("/detect", response_model=ScenarioResponse)
    def detect(request: ScenarioRequest) -> ScenarioResponse:
        return _run("detect", request)

    @app.post("/first-order", response_model=ScenarioResponse)
    def first_order(request: ScenarioRequest) -> ScenarioResponse:
        return _run("first-order", request)

    @app.post("/scale-hbar", response_model=ScenarioResponse)
    def scale_hbar(request: ScenarioRequest) -> ScenarioResponse:
        return _run("scale-hbar", request)

    return app
