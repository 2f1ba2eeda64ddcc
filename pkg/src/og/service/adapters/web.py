"""Web adapter: HTTP/1.1 + JSON routing onto the core services."""

from __future__ import annotations

import json
import time

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..core import ApiError, CoreServices, parse_aoi, parse_sources, parse_types

STATUS_BY_KIND = {
    "invalid_input": 400,
    "unauthorized": 401,
    "not_found": 404,
    "too_short": 422,
    "model_unavailable": 503,
}


def _error_body(kind: str, message: str, violations: list | None = None) -> dict:
    error = {"kind": kind, "message": message}
    if violations:
        error["violations"] = violations
    return {"error": error}


def _bearer_token(request: Request) -> str | None:
    header = request.headers.get("authorization", "")
    if header.lower().startswith("bearer "):
        return header[7:]
    return None


def _cache_key(request: Request) -> str:
    query = "&".join(sorted(request.url.query.split("&"))) if request.url.query else ""
    return f"{request.url.path}?{query}"


def create_app(core: CoreServices) -> FastAPI:
    app = FastAPI(title="marine anomaly api", docs_url=None, redoc_url=None, openapi_url=None)
    cache = core.ports.cache
    telemetry = core.ports.telemetry

    @app.middleware("http")
    async def record_telemetry(request: Request, call_next):
        started = time.perf_counter()
        response = await call_next(request)
        telemetry.record({
            "ts": int(time.time()),
            "endpoint": request.url.path,
            "latency_ms": (time.perf_counter() - started) * 1000.0,
            "status": response.status_code,
        })
        return response

    def guarded(handler):
        async def run(request: Request) -> JSONResponse:
            try:
                core.authorize(_bearer_token(request))
                return handler(request)
            except ApiError as exc:
                return JSONResponse(
                    status_code=STATUS_BY_KIND.get(exc.kind, 400),
                    content=_error_body(exc.kind, exc.message, exc.violations),
                )
        return run

    def cached(handler):
        def run(request: Request):
            key = _cache_key(request)
            hit = cache.get(key)
            if hit is not None:
                status, body = hit
                return JSONResponse(status_code=status, content=body)
            response = handler(request)
            if response.status_code == 200:
                cache.put(key, (response.status_code, json.loads(response.body)))
            return response
        return run

    def get_geolocations(request: Request) -> JSONResponse:
        query = dict(request.query_params)
        aoi = parse_aoi(query)
        limit = None
        if query.get("limit") is not None:
            try:
                limit = int(query["limit"])
            except ValueError as exc:
                raise ApiError("invalid_input", f"limit must be an integer: {exc}") from exc
        fixes, next_cursor = core.get_geolocations(
            aoi,
            sources=parse_sources(query.get("sources")),
            types=parse_types(query.get("types")),
            cursor=query.get("cursor"),
            limit=limit,
        )
        body = {"fixes": fixes, "count": len(fixes)}
        if next_cursor is not None:
            body["next_cursor"] = next_cursor
        return JSONResponse(content=body)

    def get_object(request: Request) -> JSONResponse:
        return JSONResponse(content=core.get_object(request.path_params["id"]))

    def get_trajectory(request: Request) -> JSONResponse:
        query = dict(request.query_params)
        from_ts = to_ts = None
        try:
            if query.get("from") is not None:
                from_ts = int(query["from"])
            if query.get("to") is not None:
                to_ts = int(query["to"])
        except ValueError as exc:
            raise ApiError("invalid_input", f"from/to must be epoch seconds: {exc}") from exc
        return JSONResponse(
            content=core.get_trajectory(request.path_params["id"], from_ts, to_ts)
        )

    def get_anomalies(request: Request) -> JSONResponse:
        aoi = parse_aoi(dict(request.query_params))
        anomalies = core.list_anomalies(aoi)
        return JSONResponse(content={"anomalies": anomalies, "count": len(anomalies)})

    def get_explanation(request: Request) -> JSONResponse:
        return JSONResponse(content=core.get_explanation(request.path_params["id"]))

    async def post_detect(request: Request) -> JSONResponse:
        try:
            core.authorize(_bearer_token(request))
            try:
                body = json.loads(await request.body() or b"null")
            except json.JSONDecodeError as exc:
                raise ApiError("invalid_input", f"request body is not JSON: {exc}") from exc
            if not isinstance(body, dict):
                raise ApiError("invalid_input", "request body must be a JSON object")
            for field in ("object_id", "from_ts", "to_ts"):
                if field not in body:
                    raise ApiError("invalid_input", f"missing required field {field!r}")
            anomalies = core.detect_on_demand(
                str(body["object_id"]), int(body["from_ts"]), int(body["to_ts"]),
                body.get("model"),
            )
            return JSONResponse(content={"anomalies": anomalies, "count": len(anomalies)})
        except ApiError as exc:
            return JSONResponse(
                status_code=STATUS_BY_KIND.get(exc.kind, 400),
                content=_error_body(exc.kind, exc.message, exc.violations),
            )

    async def post_label(request: Request) -> JSONResponse:
        try:
            core.authorize(_bearer_token(request))
            try:
                body = json.loads(await request.body() or b"null")
            except json.JSONDecodeError as exc:
                raise ApiError("invalid_input", f"request body is not JSON: {exc}") from exc
            if not isinstance(body, dict):
                raise ApiError("invalid_input", "request body must be a JSON object")
            label_id = core.post_label(body)
            return JSONResponse(status_code=201, content={"label_id": label_id})
        except ApiError as exc:
            return JSONResponse(
                status_code=STATUS_BY_KIND.get(exc.kind, 400),
                content=_error_body(exc.kind, exc.message, exc.violations),
            )

    async def get_health(request: Request) -> JSONResponse:
        return JSONResponse(content=core.health())

    app.add_api_route("/api/v1/geolocations", guarded(cached(get_geolocations)), methods=["GET"])
    app.add_api_route("/api/v1/objects/{id}", guarded(get_object), methods=["GET"])
    app.add_api_route("/api/v1/objects/{id}/trajectory", guarded(cached(get_trajectory)),
                      methods=["GET"])
    app.add_api_route("/api/v1/anomalies", guarded(cached(get_anomalies)), methods=["GET"])
    app.add_api_route("/api/v1/anomalies/{id}/explanation", guarded(get_explanation),
                      methods=["GET"])
    app.add_api_route("/api/v1/detect", post_detect, methods=["POST"])
    app.add_api_route("/api/v1/labels", post_label, methods=["POST"])
    app.add_api_route("/api/v1/health", get_health, methods=["GET"])
    return app
