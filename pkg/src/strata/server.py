"""HTTP service: layouts on demand, queries, reports, and the viewer.

The service is stateless beyond the immutable dataset loaded at startup.
Every layout request re-runs the deterministic simulation to convergence,
so identical request bodies always produce identical responses. Errors
use {code, message} JSON bodies: 400 bad request, 404 unknown id, 500
numerical failure.
"""

from __future__ import annotations

import socket
import sys
from pathlib import Path
from typing import Any, Mapping

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .analysis import common_neighbors, compare_report, most_connected, snapshot_at_year
from .engine import LayoutConfig, LayoutMode, config_from_dict, run
from .errors import ConfigError, NumericalError, SpecError, UnknownNodeError
from .layering import CyclePolicy, HierarchySpec, assign_layers
from .model import GraphDataset, dataset_to_document

_LAYOUT_REQUEST_KEYS = {"mode", "seed", "pins", "hierarchy", "config", "trace"}
_HIERARCHY_KEYS = {"generational_kinds", "co_level_kinds"}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _bad_request(message: str) -> ApiError:
    return ApiError(400, "bad_request", message)


def _parse_layout_request(dataset: GraphDataset, body: Any) -> dict:
    if not isinstance(body, dict):
        raise _bad_request("request body must be a JSON object")
    unknown = set(body) - _LAYOUT_REQUEST_KEYS
    if unknown:
        raise _bad_request(f"unknown field {sorted(unknown)[0]!r}")

    mode_raw = body.get("mode", LayoutMode.FORCE_DIRECTED.value)
    try:
        mode = LayoutMode(mode_raw)
    except ValueError:
        raise _bad_request(f"unknown mode {mode_raw!r}") from None

    seed = body.get("seed", 11)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise _bad_request("seed must be an integer")

    pins: dict[str, tuple[float, float]] = {}
    for i, pin_obj in enumerate(body.get("pins", [])):
        if not isinstance(pin_obj, dict) or set(pin_obj) != {"id", "x", "y"}:
            raise _bad_request(f"pins[{i}] must be an object with id, x, y")
        pid = pin_obj["id"]
        if not isinstance(pid, str):
            raise _bad_request(f"pins[{i}].id must be a string")
        if pid not in dataset.index_of:
            raise ApiError(404, "unknown_id", f"no person with id {pid!r}")
        try:
            pins[pid] = (float(pin_obj["x"]), float(pin_obj["y"]))
        except (TypeError, ValueError):
            raise _bad_request(f"pins[{i}] coordinates must be numbers") from None

    hierarchy_kwargs: dict = {}
    hierarchy_obj = body.get("hierarchy", {})
    if not isinstance(hierarchy_obj, dict):
        raise _bad_request("hierarchy must be an object")
    if set(hierarchy_obj) - _HIERARCHY_KEYS:
        raise _bad_request("hierarchy accepts generational_kinds and co_level_kinds")
    for key in _HIERARCHY_KEYS:
        if key in hierarchy_obj:
            kinds = hierarchy_obj[key]
            if not isinstance(kinds, list) or not all(isinstance(k, str) for k in kinds):
                raise _bad_request(f"hierarchy.{key} must be a list of kind names")
            hierarchy_kwargs[key] = frozenset(kinds)

    config_obj = body.get("config", {})
    if not isinstance(config_obj, dict):
        raise _bad_request("config must be an object")
    if "mode" in config_obj or "seed" in config_obj:
        raise _bad_request("mode and seed belong at the top level of the request")

    trace = body.get("trace", False)
    if not isinstance(trace, bool):
        raise _bad_request("trace must be a boolean")

    return {
        "mode": mode,
        "seed": seed,
        "pins": pins,
        "hierarchy_kwargs": hierarchy_kwargs,
        "config_obj": config_obj,
        "trace": trace,
    }


def create_app(dataset: GraphDataset, frontend_dir: Path | None = None) -> FastAPI:
    from .render import export_trace, layout_document  # local: avoids cycle at import time

    app = FastAPI(title="strata", docs_url=None, redoc_url=None, openapi_url=None)
    dataset_doc = dataset_to_document(dataset)

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse({"code": exc.code, "message": exc.message}, status_code=exc.status)

    @app.exception_handler(NumericalError)
    async def handle_numerical(_request: Request, exc: NumericalError) -> JSONResponse:
        return JSONResponse({"code": "numerical_failure", "message": str(exc)}, status_code=500)

    @app.get("/api/health")
    async def health() -> dict:
        return {"status": "ok"}

    @app.get("/api/dataset")
    async def get_dataset() -> JSONResponse:
        return JSONResponse(dataset_doc)

    @app.post("/api/layout")
    async def post_layout(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except Exception:
            raise _bad_request("request body must be valid JSON") from None
        parsed = _parse_layout_request(dataset, body)
        try:
            spec = HierarchySpec(**parsed["hierarchy_kwargs"])
            config = config_from_dict(
                {**parsed["config_obj"], "mode": parsed["mode"].value, "seed": parsed["seed"]}
            )
            layers = None
            if parsed["mode"] is LayoutMode.FORCE_LAYERED:
                layers = assign_layers(dataset, spec, CyclePolicy.BREAK_BACK_EDGES)
            layout = run(
                dataset, config, layers=layers, pins=parsed["pins"], record_trace=parsed["trace"]
            )
        except (ConfigError, SpecError) as exc:
            raise _bad_request(str(exc)) from None
        doc = layout_document(layout, dataset)
        if parsed["trace"]:
            import json as _json

            doc["trace"] = _json.loads(export_trace(layout))
        return JSONResponse(doc)

    @app.get("/api/query/most-connected")
    async def query_most_connected() -> dict:
        if not dataset.persons:
            return {"most_connected": []}
        return {"most_connected": list(most_connected(dataset))}

    @app.get("/api/query/common")
    async def query_common(a: str = "", b: str = "") -> dict:
        if not a or not b:
            raise _bad_request("query needs both a and b")
        try:
            shared = common_neighbors(dataset, a, b)
        except UnknownNodeError as exc:
            raise ApiError(404, "unknown_id", str(exc)) from None
        except ValueError as exc:
            raise _bad_request(str(exc)) from None
        return {"common": [pid for pid in dataset.ids if pid in shared]}

    @app.get("/api/query/snapshot")
    async def query_snapshot(year: str = "") -> JSONResponse:
        try:
            year_int = int(year)
        except ValueError:
            raise _bad_request("year must be an integer") from None
        return JSONResponse(dataset_to_document(snapshot_at_year(dataset, year_int)))

    @app.get("/api/report")
    async def report(seed: str = "11") -> dict:
        try:
            seed_int = int(seed)
        except ValueError:
            raise _bad_request("seed must be an integer") from None
        result = compare_report(
            dataset,
            LayoutConfig(mode=LayoutMode.FORCE_DIRECTED, seed=seed_int),
            LayoutConfig(mode=LayoutMode.FORCE_LAYERED, seed=seed_int),
        )
        return {
            "force_directed": result.fd_report.to_dict(),
            "force_layered": result.fl_report.to_dict(),
            "table": result.table(),
        }

    if frontend_dir is not None and frontend_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="viewer")

    return app


def default_frontend_dir() -> Path | None:
    """Built viewer assets, looked up relative to the working directory
    first (repo checkout), then next to the installed package."""
    for candidate in (
        Path.cwd() / "frontend" / "dist",
        Path(__file__).resolve().parents[2] / "frontend" / "dist",
    ):
        if candidate.is_dir():
            return candidate
    return None


def serve(dataset: GraphDataset, port: int) -> int:
    """Run the service until interrupted. Returns 4 when the port cannot
    be bound, per the CLI contract."""
    import uvicorn

    try:
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind(("127.0.0.1", port))
        probe.close()
    except OSError as exc:
        print(f"cannot bind port {port}: {exc}", file=sys.stderr)
        return 4
    app = create_app(dataset, frontend_dir=default_frontend_dir())
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
    return 0
