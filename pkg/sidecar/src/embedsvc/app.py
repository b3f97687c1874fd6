"""HTTP surface for the embedding service.

One data route. The body is parsed by hand so malformed JSON and invalid
shapes get distinct status codes (400 vs 422) instead of whatever the
framework defaults to.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

DEFAULT_MAX_BATCH = 256


def _error(status: int, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def create_app(model, max_batch: int = DEFAULT_MAX_BATCH) -> FastAPI:
    app = FastAPI(title="embedsvc", docs_url=None, redoc_url=None)
    app.state.model = model
    app.state.max_batch = max_batch

    @app.get("/health")
    async def health():
        return {"status": "ok", "dim": model.dim}

    @app.post("/embed")
    async def embed(request: Request):
        raw = await request.body()
        try:
            payload = json.loads(raw)
        except (UnicodeDecodeError, json.JSONDecodeError):
            return _error(400, "request body is not valid JSON")
        if not isinstance(payload, dict):
            return _error(422, "request body must be a JSON object")
        if "texts" not in payload:
            return _error(422, "missing required field 'texts'")
        unknown = sorted(set(payload) - {"texts"})
        if unknown:
            return _error(422, f"unknown fields: {', '.join(unknown)}")
        texts = payload["texts"]
        if not isinstance(texts, list) or any(not isinstance(t, str) for t in texts):
            return _error(422, "'texts' must be an array of strings")
        if len(texts) > max_batch:
            return _error(413, f"batch of {len(texts)} exceeds the limit of {max_batch}")
        vectors = model.embed_batch(texts)
        return {
            "provider_id": model.provider_id,
            "dim": model.dim,
            "vectors": vectors,
        }

    return app
