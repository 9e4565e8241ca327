"""HTTP/JSON API over a loaded scenario.

Stateless request handling on top of the immutable scenario plus the
content-addressed landscape cache; every response carries the provenance
digest of the landscape it was computed against so clients can spot stale
artifacts. Errors use a structured body {code, message, detail}: HTTP 400 for
validation problems, 422 for infeasible missions, 500 for compute faults.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .ceo import Mission, clearance
from .dsl import UnknownParameter, ValueNotInDomain
from .geodata import LocalPoint
from .landscape import save_pml
from .planner import path_from_dict, path_to_dict
from .scenario import ScenarioEngine
from .uncertainty import OutOfGrid


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail
        super().__init__(message)


def _assignment_from(body: dict) -> dict[str, str]:
    assignment = body.get("assignment") or {}
    if not isinstance(assignment, dict):
        raise ApiError(400, "ValidationError", "assignment must be an object")
    return {str(k): str(v) for k, v in assignment.items()}


def _point_from(body: dict, key: str) -> LocalPoint | None:
    value = body.get(key)
    if value is None:
        return None
    try:
        east, north = (float(v) for v in value)
    except (TypeError, ValueError) as err:
        raise ApiError(400, "ValidationError", f"{key} must be [east, north]: {err}") from err
    return LocalPoint(east, north)


def create_app(engine: ScenarioEngine) -> FastAPI:
    app = FastAPI(title="Probabilistic mission design service", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def handle_api_error(_: Request, err: ApiError):
        return JSONResponse(
            status_code=err.status,
            content={"code": err.code, "message": err.message, "detail": err.detail},
        )

    @app.exception_handler(Exception)
    async def handle_unexpected(_: Request, err: Exception):
        return JSONResponse(
            status_code=500,
            content={"code": "ComputeError", "message": str(err), "detail": None},
        )

    def full_assignment(body: dict) -> dict[str, str]:
        try:
            return engine.full_assignment(_assignment_from(body))
        except UnknownParameter as err:
            raise ApiError(400, "UnknownParameter", f"unknown parameter {err}") from err
        except ValueNotInDomain as err:
            raise ApiError(400, "ValueNotInDomain", str(err)) from err

    async def read_body(request: Request) -> dict:
        raw = await request.body()
        if not raw:
            return {}
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as err:
            raise ApiError(400, "ValidationError", f"request body is not JSON: {err}") from err
        if not isinstance(body, dict):
            raise ApiError(400, "ValidationError", "request body must be a JSON object")
        return body

    @app.get("/api/scenario")
    async def scenario_summary():
        return engine.summary()

    @app.post("/api/pml")
    async def compute_landscape(request: Request):
        body = await read_body(request)
        assignment = full_assignment(body)
        pml = engine.landscape(assignment)
        return {
            "pml": json.loads(save_pml(pml)),
            "digest": pml.digest(),
        }

    @app.post("/api/plan")
    async def plan(request: Request):
        body = await read_body(request)
        assignment = full_assignment(body)
        try:
            path, pml = engine.plan(
                assignment, _point_from(body, "start"), _point_from(body, "goal")
            )
        except OutOfGrid as err:
            raise ApiError(400, "OutOfGrid", str(err)) from err
        if path is None:
            raise ApiError(
                422, "Infeasible", "no path survives pruning", {"digest": pml.digest()}
            )
        doc = path_to_dict(path, pml)
        return {"path": doc, "j": doc["j"], "digest": pml.digest()}

    @app.post("/api/clearance")
    async def check_clearance(request: Request):
        body = await read_body(request)
        assignment = full_assignment(body)
        pml = engine.landscape(assignment)
        path_doc = body.get("path")
        if not isinstance(path_doc, dict) or "points" not in path_doc:
            raise ApiError(400, "ValidationError", "path must be an object with points")
        try:
            path = path_from_dict(path_doc, pml)
        except (ValueError, OutOfGrid) as err:
            raise ApiError(400, "ValidationError", f"bad path: {err}") from err
        verdict = clearance(Mission.from_path(path, pml.assignment), pml, engine.t_j)
        return {"verdict": verdict.to_dict(), "digest": pml.digest()}

    @app.post("/api/explain")
    async def explain(request: Request):
        body = await read_body(request)
        assignment = full_assignment(body)
        mode = body.get("mode", "oat")
        if mode not in ("oat", "factorial"):
            raise ApiError(400, "ValidationError", f"unknown mode {mode!r}")
        report = engine.explain(
            assignment, mode, _point_from(body, "start"), _point_from(body, "goal")
        )
        return {"report": report.to_dict()}

    @app.post("/api/optimize")
    async def optimize(request: Request):
        body = await read_body(request)
        result = engine.optimize(_point_from(body, "start"), _point_from(body, "goal"))
        if not result.feasible:
            raise ApiError(422, "Infeasible", "every assignment is infeasible")
        doc = result.to_dict()
        best = engine.landscape(result.best_assignment)
        doc["digest"] = best.digest()
        doc["best_path_document"] = path_to_dict(result.best_path, best)
        return doc

    return app
