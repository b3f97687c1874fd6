"""Word-vector model: a plain-text vector file, OOV exclusion, mean pooling.

The file format is one token per line followed by its components,
space-separated (the common text export of word2vec-style tooling, no
count header). Every vector must share one dimension.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import ModelLoadError

_WORD = re.compile(r"[a-z0-9]+(?:'[a-z]+)?")


def tokenize(text: str) -> list[str]:
    return _WORD.findall(text.lower())


class WordVectorModel:
    """Pools per-token vectors into one text vector.

    Out-of-vocabulary tokens are excluded before pooling rather than
    mapped to a shared unknown vector; a text with no known tokens embeds
    to the zero vector, matching the engine's zero-vector policy.
    """

    granularity = "word"

    def __init__(self, vectors: dict[str, np.ndarray], dim: int, source: str = "memory"):
        self.dim = dim
        self.provider_id = f"wordvec-d{dim}"
        self.source = source
        self._vectors = vectors

    @classmethod
    def from_file(cls, path: str | Path) -> "WordVectorModel":
        vectors: dict[str, np.ndarray] = {}
        dim: int | None = None
        try:
            lines = Path(path).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise ModelLoadError(f"cannot read vector file {path}: {exc}") from exc

        for number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            token, *rest = line.split(" ")
            if not token or not rest:
                raise ModelLoadError(f"{path}:{number}: expected 'token v1 v2 ...'")
            if token in vectors:
                raise ModelLoadError(f"{path}:{number}: duplicate token {token!r}")
            try:
                values = np.array([float(x) for x in rest], dtype=np.float64)
            except ValueError as exc:
                raise ModelLoadError(f"{path}:{number}: {exc}") from None
            if not np.all(np.isfinite(values)):
                raise ModelLoadError(f"{path}:{number}: non-finite component")
            if dim is None:
                dim = values.size
            elif values.size != dim:
                raise ModelLoadError(
                    f"{path}:{number}: vector has {values.size} components, expected {dim}"
                )
            vectors[token] = values

        if dim is None:
            raise ModelLoadError(f"{path}: no vectors found")
        return cls(vectors, dim, source=str(path))

    def __contains__(self, token: str) -> bool:
        return token in self._vectors

    def token_vector(self, token: str) -> np.ndarray | None:
        found = self._vectors.get(token)
        return None if found is None else found.copy()

    def embed_batch(self, texts: list[str]) -> list[list[float]]:
        out = []
        for text in texts:
            known = [self._vectors[t] for t in tokenize(text) if t in self._vectors]
            if not known:
                out.append([0.0] * self.dim)
            else:
                out.append((np.mean(np.vstack(known), axis=0)).tolist())
        return out
