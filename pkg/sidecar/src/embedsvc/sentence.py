"""Sentence-level model backed by sentence-transformers.

The import is deferred so the word-vector mode works without the heavy
dependency installed. A model that cannot be loaded is a startup error,
not a degraded mode: serving wrong-dimension vectors would poison any
index built against this provider.
"""

from __future__ import annotations

from .errors import ModelLoadError

DEFAULT_MODEL = "sentence-transformers/all-mpnet-base-v2"


class SentenceModel:
    granularity = "sentence"

    def __init__(self, model_name: str = DEFAULT_MODEL):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise ModelLoadError(
                "sentence-transformers is not installed; "
                "install the 'sentence' extra or use --mode word"
            ) from exc
        try:
            self._model = SentenceTransformer(model_name)
            probe = self._model.encode(["probe"], convert_to_numpy=True)
        except Exception as exc:
            raise ModelLoadError(f"cannot load model {model_name!r}: {exc}") from exc
        self.dim = int(probe.shape[1])
        self.provider_id = f"st:{model_name}"
        self.source = model_name

    def embed_batch(self, texts: list[str]) -> list[list[float]]:
        if not texts:
            return []
        encoded = self._model.encode(list(texts), convert_to_numpy=True)
        return [row.astype(float).tolist() for row in encoded]
