"""HTTP render service.

Stateless JSON API over the same pipelines as the CLI:

    POST /api/render    scene document -> image bytes (png or ppm)
    GET  /api/presets   preset catalog
    POST /api/validate  {"equation": "..."} -> diagnostics (always 200)
    POST /api/curve     curve spec -> SVG
    POST /api/lift      lift spec -> OBJ text or mesh JSON

Error codes: 400 schema violations, 422 equation semantics, 413 images over
the size cap, 429 when the render queue is full.  Bad input never yields a
500.  Size cap and port come from MOTIFLAB_MAX_SIZE / MOTIFLAB_PORT.
"""
from __future__ import annotations

import json
import os
import threading

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from . import expr as ex
from . import motif, scenefile
from .curve import CurveSpec, export_svg, sample_curve
from .diagnostics import Diagnostics, validate_equation
from .render import png_bytes, ppm_bytes
from .spherical import export_obj, mesh_json, mesh_lift

DEFAULT_MAX_SIZE = 2048
DEFAULT_QUEUE_CAP = 32


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def create_app(max_size: int | None = None, queue_cap: int = DEFAULT_QUEUE_CAP) -> FastAPI:
    if max_size is None:
        max_size = int(os.environ.get("MOTIFLAB_MAX_SIZE", DEFAULT_MAX_SIZE))
    app = FastAPI(title="motiflab", docs_url=None, redoc_url=None)
    # degree-23 renders are CPU-bound; cap concurrent renders and shed load
    render_slots = threading.BoundedSemaphore(queue_cap)

    @app.exception_handler(RequestValidationError)
    async def _on_validation(_req: Request, exc: RequestValidationError):
        return _error(400, f"schema violation: {exc.errors()[:3]}")

    @app.exception_handler(json.JSONDecodeError)
    async def _on_badjson(_req: Request, _exc: json.JSONDecodeError):
        return _error(400, "request body is not valid JSON")

    async def _json_body(request: Request) -> dict:
        try:
            doc = json.loads(await request.body())
        except json.JSONDecodeError:
            raise _BadRequest("request body is not valid JSON")
        if not isinstance(doc, dict):
            raise _BadRequest("request body must be a JSON object")
        return doc

    class _BadRequest(Exception):
        def __init__(self, message: str):
            self.message = message

    @app.exception_handler(_BadRequest)
    async def _on_bad_request(_req: Request, exc: _BadRequest):
        return _error(400, exc.message)

    @app.get("/api/presets")
    def presets() -> list[dict]:
        return motif.catalog_json()

    @app.post("/api/validate")
    async def validate(request: Request):
        doc = await _json_body(request)
        equation = doc.get("equation", "")
        if not isinstance(equation, str):
            return _error(400, "'equation' must be a string")
        return validate_equation(equation).to_dict()

    @app.post("/api/render")
    async def render(request: Request):
        doc = await _json_body(request)
        fmt = doc.pop("format", "png")
        if fmt not in ("png", "ppm"):
            return _error(400, f"unknown format {fmt!r}")
        if not render_slots.acquire(blocking=False):
            return _error(429, "render queue is full, retry later")
        try:
            img, stats, placements = scenefile.render_document(doc, max_size=max_size)
        except scenefile.ImageTooLargeError as err:
            return _error(413, str(err))
        except scenefile.SceneDocumentError as err:
            return _error(400, str(err))
        except (scenefile.EquationError, ex.ExprError) as err:
            return _error(422, str(err))
        finally:
            render_slots.release()
        diag = Diagnostics(render_stats=stats.to_dict())
        diag.free_params = sorted(ex.free_params(ex.parse(doc["equation"])))
        diag.degree = ex.degree(ex.parse(doc["equation"]))
        headers = {"X-Render-Stats": json.dumps(diag.to_dict())}
        if placements is not None:
            headers["X-Layout-Placements"] = json.dumps(placements)
        if fmt == "ppm":
            return Response(ppm_bytes(img), media_type="image/x-portable-pixmap",
                            headers=headers)
        return Response(png_bytes(img), media_type="image/png", headers=headers)

    @app.post("/api/curve")
    async def curve(request: Request):
        doc = await _json_body(request)
        try:
            kwargs = {"a": float(doc["a"]), "b": float(doc["b"])}
            if "samples" in doc:
                kwargs["samples"] = int(doc["samples"])
            if "theta_max" in doc:
                kwargs["theta_max"] = float(doc["theta_max"])
            spec = CurveSpec(**kwargs)
        except (KeyError, TypeError, ValueError) as err:
            return _error(400, f"bad curve spec: {err}")
        svg = export_svg([sample_curve(spec)])
        return Response(svg, media_type="image/svg+xml")

    @app.post("/api/lift")
    async def lift(request: Request):
        doc = await _json_body(request)
        fmt = doc.get("format", "obj")
        if fmt not in ("obj", "json"):
            return _error(400, f"unknown format {fmt!r}")
        try:
            spec = CurveSpec(a=float(doc["a"]), b=float(doc["b"]))
            mesh = mesh_lift(spec, int(doc["n_theta"]), int(doc["n_phi"]))
        except (KeyError, TypeError, ValueError) as err:
            return _error(400, f"bad lift spec: {err}")
        if fmt == "json":
            return mesh_json(mesh)
        return Response(export_obj(mesh), media_type="text/plain")

    return app
