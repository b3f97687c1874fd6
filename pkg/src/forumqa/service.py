"""HTTP face of the engine, consumed by the browser client.

Request bodies are parsed by hand instead of through a framework model:
the status contract distinguishes unreadable JSON (400) from readable
JSON that fails validation (422), and framework-level parsing would fold
both into one. Handlers are read-only over the engine snapshot, so
concurrent requests need no locking; replacing the data means building a
new engine and swapping the reference.
"""

from __future__ import annotations

import json
import logging
import time
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .config import ServiceConfig
from .errors import ConfigError, UnknownIdError
from .retrieval import RANKING_MODES, Query, RankedMatch, RetrievalEngine
from .similarity import Weights

log = logging.getLogger(__name__)


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": message})


def _parse_weights(payload: Any) -> Weights:
    if not isinstance(payload, dict):
        raise ConfigError("weights must be an object with p, q, r")
    unknown = set(payload) - {"p", "q", "r"}
    if unknown:
        raise ConfigError(f"weights has unknown keys {sorted(unknown)}")
    try:
        p = float(payload["p"])
        q = float(payload["q"])
        r = float(payload["r"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"weights must supply numeric p, q, r: {exc}") from None
    return Weights(p, q, r)


def _parse_query(payload: Any, defaults: ServiceConfig) -> tuple[Query, Weights]:
    if not isinstance(payload, dict):
        raise ConfigError("request body must be a JSON object")
    title = payload.get("title", "")
    content = payload.get("content", "")
    if not isinstance(title, str) or not isinstance(content, str):
        raise ConfigError("title and content must be strings")

    tags = payload.get("tags", [])
    if isinstance(tags, str):
        tags = [tags]
    if not isinstance(tags, list) or any(not isinstance(t, str) for t in tags):
        raise ConfigError("tags must be a list of strings")

    k = payload.get("k", defaults.k)
    if not isinstance(k, int) or isinstance(k, bool):
        raise ConfigError(f"k must be an integer, got {k!r}")

    threshold = payload.get("threshold", defaults.threshold)
    if isinstance(threshold, bool) or not isinstance(threshold, (int, float)):
        raise ConfigError(f"threshold must be a number, got {threshold!r}")

    mode = payload.get("mode", "weighted")
    if mode not in RANKING_MODES:
        raise ConfigError(f"mode must be one of {RANKING_MODES}, got {mode!r}")

    prefilter_size: int | None = defaults.prefilter_size if defaults.cascade else None
    if "cascade" in payload:
        cascade = payload["cascade"]
        if cascade is None or cascade is False:
            prefilter_size = None
        elif isinstance(cascade, dict):
            m = cascade.get("m", defaults.prefilter_size)
            if not isinstance(m, int) or isinstance(m, bool) or m < 1:
                raise ConfigError(f"cascade.m must be a positive integer, got {m!r}")
            prefilter_size = m
        else:
            raise ConfigError("cascade must be an object like {\"m\": 50} or null")

    weights = defaults.weights()
    if "weights" in payload and payload["weights"] is not None:
        weights = _parse_weights(payload["weights"])

    query = Query(
        title=title,
        content=content,
        tags=frozenset(t.strip().lower() for t in tags if t.strip()),
        k=k,
        threshold=float(threshold),
        mode=mode,
        prefilter_size=prefilter_size,
    )
    return query, weights


def _match_payload(match: RankedMatch) -> dict[str, Any]:
    scores: dict[str, float] = {
        "t_sim": match.breakdown.t_sim,
        "h_sim": match.breakdown.h_sim,
        "c_sim": match.breakdown.c_sim,
        "n_sim": match.breakdown.n_sim,
    }
    if match.breakdown.jaccard is not None:
        scores["jaccard"] = match.breakdown.jaccard
    return {
        "query_id": match.query_id,
        "rank": match.rank,
        "title": match.title,
        "scores": scores,
        "thread_available": match.thread_available,
    }


def create_app(engine: RetrievalEngine | None = None, config: ServiceConfig | None = None) -> FastAPI:
    """Build the API app around one engine snapshot.

    Passing engine=None yields a service that answers 503 everywhere
    data-dependent until attach_engine is called; the CLI never does this,
    but it keeps startup ordering honest for embedders.
    """
    app = FastAPI(title="forumqa", docs_url=None, redoc_url=None)
    app.state.engine = engine
    app.state.config = config or ServiceConfig()
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.post("/api/query")
    async def handle_query(request: Request) -> Response:
        active: RetrievalEngine | None = app.state.engine
        if active is None:
            return _error(503, "service has no knowledge base loaded yet")
        body = await request.body()
        try:
            payload = json.loads(body)
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            return _error(400, f"body is not valid JSON: {exc}")
        try:
            query, weights = _parse_query(payload, app.state.config)
        except ConfigError as exc:
            return _error(422, str(exc))

        started = time.perf_counter()
        matches = active.retrieve(query, weights)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        return JSONResponse(
            {
                "matches": [_match_payload(m) for m in matches],
                "elapsed_ms": elapsed_ms,
            }
        )

    @app.get("/api/thread/{query_id}")
    async def handle_thread(query_id: str) -> Response:
        active: RetrievalEngine | None = app.state.engine
        if active is None:
            return _error(503, "service has no knowledge base loaded yet")
        try:
            thread = active.get_thread(query_id)
        except UnknownIdError:
            return _error(404, f"no question with id {query_id!r}")
        if thread is None:
            return Response(status_code=204)
        return JSONResponse(
            {
                "query_id": thread.query_id,
                "posts": [{"author_role": p.author_role, "body": p.body} for p in thread.posts],
            }
        )

    @app.get("/api/defaults")
    async def handle_defaults() -> Response:
        cfg: ServiceConfig = app.state.config
        return JSONResponse(
            {
                "k": cfg.k,
                "threshold": cfg.threshold,
                "weights": {"p": cfg.weight_p, "q": cfg.weight_q, "r": cfg.weight_r},
                "mode": "weighted",
                "cascade": {"enabled": cfg.cascade, "m": cfg.prefilter_size},
            }
        )

    return app


def attach_engine(app: FastAPI, engine: RetrievalEngine) -> None:
    """Atomic snapshot swap; requests already past the None check finish on the old engine."""
    app.state.engine = engine
