"""HTTP/JSON surface over a workbench.

All endpoints live under ``/api/v1``. Errors come back as
``{"code", "message", "detail"?}`` where each code maps to exactly one
status: oov 404, bad_request 400, version_conflict 409, nothing_to_undo
409, internal 500. Mutating requests must carry the caller's
``base_version``; a stale one is rejected with 409 so clients refresh
instead of refitting a space they have not seen.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from starlette.applications import Starlette
from starlette.requests import Request
from starlette.responses import Response
from starlette.routing import Mount, Route
from starlette.staticfiles import StaticFiles

from .errors import (
    ChainMismatchError,
    DimensionMismatchError,
    EmbeddingFormatError,
    NothingToUndoError,
    OutOfVocabularyError,
    SingularSystemError,
    VersionConflictError,
    WorkbenchError,
    ZeroNormError,
)
from .workbench import Workbench, params_from_payload, to_json_bytes

STATUS_BY_CODE = {
    "oov": 404,
    "bad_request": 400,
    "version_conflict": 409,
    "nothing_to_undo": 409,
    "internal": 500,
}


@dataclass(frozen=True)
class ApiError(Exception):
    code: str
    message: str
    detail: dict | None = None

    @property
    def status(self) -> int:
        return STATUS_BY_CODE[self.code]

    def to_payload(self) -> dict:
        payload = {"code": self.code, "message": self.message}
        if self.detail is not None:
            payload["detail"] = self.detail
        return payload


def _api_error(exc: Exception) -> ApiError:
    if isinstance(exc, OutOfVocabularyError):
        return ApiError("oov", str(exc), {"word": exc.word})
    if isinstance(exc, VersionConflictError):
        return ApiError(
            "version_conflict", str(exc),
            {"current_version": exc.expected, "base_version": exc.actual},
        )
    if isinstance(exc, NothingToUndoError):
        return ApiError("nothing_to_undo", str(exc))
    if isinstance(
        exc,
        (
            ValueError,
            ZeroNormError,
            DimensionMismatchError,
            EmbeddingFormatError,
            SingularSystemError,
            ChainMismatchError,
        ),
    ):
        return ApiError("bad_request", str(exc))
    return ApiError("internal", f"{type(exc).__name__}: {exc}")


def _json_response(payload, status: int = 200) -> Response:
    return Response(
        content=to_json_bytes(payload), status_code=status,
        media_type="application/json",
    )


def _int_param(raw: str | None, name: str, default: int | None = None) -> int | None:
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ApiError("bad_request", f"{name} must be an integer") from None


async def _body(request: Request) -> dict:
    try:
        payload = await request.json()
    except Exception:
        raise ApiError("bad_request", "request body must be JSON") from None
    if not isinstance(payload, dict):
        raise ApiError("bad_request", "request body must be a JSON object")
    return payload


def create_app(workbench: Workbench, ui_dir: str | os.PathLike | None = None) -> Starlette:
    """Build the ASGI app; ``ui_dir`` optionally serves a static client at /."""

    async def search(request: Request) -> Response:
        query = request.query_params.get("q")
        if not query:
            raise ApiError("bad_request", "missing query parameter q")
        k = _int_param(request.query_params.get("k"), "k", default=10)
        if k < 0:
            raise ApiError("bad_request", "k must be non-negative")
        return _json_response(workbench.search(query, k))

    async def refit(request: Request) -> Response:
        payload = await _body(request)
        allowed = {"mode", "words", "target", "params", "base_version"}
        unknown = set(payload) - allowed
        if unknown:
            raise ApiError("bad_request", f"unknown fields: {sorted(unknown)}")
        for field in ("mode", "words", "base_version"):
            if field not in payload:
                raise ApiError("bad_request", f"missing field {field!r}")
        words = payload["words"]
        if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
            raise ApiError("bad_request", "words must be a list of strings")
        if not isinstance(payload["base_version"], int):
            raise ApiError("bad_request", "base_version must be an integer")
        params = params_from_payload(payload.get("params"))
        result = workbench.refit(
            mode=payload["mode"],
            words=words,
            base_version=payload["base_version"],
            target=payload.get("target"),
            params=params,
        )
        return _json_response(result)

    async def undo(request: Request) -> Response:
        return _json_response(workbench.undo())

    async def journal(request: Request) -> Response:
        return _json_response(workbench.journal_payload())

    async def project(request: Request) -> Response:
        payload = await _body(request)
        words = payload.get("words")
        if not isinstance(words, list) or not words:
            raise ApiError("bad_request", "words must be a non-empty list")
        version = payload.get("version")
        baseline = payload.get("baseline_version")
        if version is not None and not isinstance(version, int):
            raise ApiError("bad_request", "version must be an integer")
        if baseline is not None and not isinstance(baseline, int):
            raise ApiError("bad_request", "baseline_version must be an integer")
        return _json_response(
            workbench.project(words, version=version, baseline_version=baseline)
        )

    async def distances(request: Request) -> Response:
        raw = request.query_params.get("words")
        if not raw:
            raise ApiError("bad_request", "missing query parameter words")
        words = [w for w in raw.split(",") if w]
        if not words:
            raise ApiError("bad_request", "words must name at least one token")
        version = _int_param(request.query_params.get("version"), "version")
        return _json_response(workbench.distances(words, version=version))

    async def meta(request: Request) -> Response:
        return _json_response(workbench.meta())

    routes = [
        Route("/api/v1/search", search, methods=["GET"]),
        Route("/api/v1/refit", refit, methods=["POST"]),
        Route("/api/v1/undo", undo, methods=["POST"]),
        Route("/api/v1/journal", journal, methods=["GET"]),
        Route("/api/v1/project", project, methods=["POST"]),
        Route("/api/v1/distances", distances, methods=["GET"]),
        Route("/api/v1/meta", meta, methods=["GET"]),
    ]
    if ui_dir is not None and os.path.isdir(ui_dir):
        routes.append(Mount("/", StaticFiles(directory=os.fspath(ui_dir), html=True), name="ui"))

    async def handle_api_error(request: Request, exc: ApiError) -> Response:
        return _json_response(exc.to_payload(), status=exc.status)

    async def handle_any(request: Request, exc: Exception) -> Response:
        err = _api_error(exc)
        return _json_response(err.to_payload(), status=err.status)

    return Starlette(
        routes=routes,
        exception_handlers={
            ApiError: handle_api_error,
            WorkbenchError: handle_any,
            ValueError: handle_any,
            Exception: handle_any,
        },
    )
