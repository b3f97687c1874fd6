"""Embedding vectors and the providers that produce them.

Two provider families cover the engine's needs:

* HashEmbedder: a deterministic feature-hashing embedder. Each token is
  hashed to one slot and a sign, contributions accumulate, and the result
  is L2-normalized. No model artifacts, stable across processes, good
  enough to exercise the whole pipeline at desk scale.
* RemoteEmbedder: HTTP client for an out-of-process encoder speaking the
  wire protocol below. The response dimension is pinned on first contact
  and any later drift is fatal.

Wire protocol (UTF-8 JSON):
    POST {base}/embed   {"texts": ["...", ...]}
                     -> {"provider_id": "...", "dim": N, "vectors": [[...], ...]}
    GET  {base}/health -> {"status": "ok", "dim": N}

Empty or token-free text embeds to the zero vector everywhere; similarity
against a zero vector is defined downstream as 0.0.
"""

from __future__ import annotations

import hashlib
import re
import threading
from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

import numpy as np
import requests

from . import textnorm
from .errors import ConfigError, ConsistencyError, ProtocolError, SchemaError, TransportError

FIELDS = ("title", "content")

DEFAULT_HASH_DIM = 256
MIN_HASH_DIM = 8
DEFAULT_TIMEOUT = 10.0
DEFAULT_MAX_INFLIGHT = 4


@dataclass(frozen=True)
class EmbeddingVector:
    """Fixed-dimension vector for one text field, tagged with its provider."""

    values: np.ndarray
    dim: int
    provider_id: str
    field: str = "content"

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.shape[0] != self.dim:
            raise SchemaError(
                f"vector length {values.shape} does not match dim {self.dim}"
            )
        if not np.all(np.isfinite(values)):
            raise SchemaError("vector components must all be finite")
        if self.field not in FIELDS:
            raise SchemaError(f"field must be one of {FIELDS}, got {self.field!r}")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


@runtime_checkable
class EmbeddingProvider(Protocol):
    """Any source of fixed-dimension text vectors.

    Implementations must be deterministic within one process lifetime
    (same text, same vector) and safely shareable by concurrent readers.
    """

    provider_id: str
    dim: int
    granularity: str  # "word" | "sentence"

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]: ...


def embed_text(provider: EmbeddingProvider, text: str, field: str = "content") -> EmbeddingVector:
    """Embed one text through a provider, validating the shape contract."""
    (values,) = provider.embed_batch([text])
    return EmbeddingVector(values=values, dim=provider.dim, provider_id=provider.provider_id, field=field)


class HashEmbedder:
    """Deterministic feature-hashing embedder over word tokens.

    A keyed blake2b digest of each token picks an index in [0, dim) and a
    sign; occurrences accumulate, so the result is independent of token
    order. Non-zero accumulations are L2-normalized.
    """

    granularity = "word"

    def __init__(self, dim: int = DEFAULT_HASH_DIM, seed: int = 0):
        if dim < MIN_HASH_DIM:
            raise ConfigError(f"hash embedder dim must be >= {MIN_HASH_DIM}, got {dim}")
        self.dim = int(dim)
        self.seed = int(seed)
        self.provider_id = f"hash-d{self.dim}-s{self.seed}"
        self._key = self.seed.to_bytes(8, "little", signed=True)
        self._slots: dict[str, tuple[int, float]] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_provider_id(cls, provider_id: str) -> "HashEmbedder":
        """Rebuild an embedder from its id string (e.g. "hash-d256-s0")."""
        match = re.fullmatch(r"hash-d(\d+)-s(-?\d+)", provider_id)
        if match is None:
            raise ConfigError(f"not a hash provider id: {provider_id!r}")
        return cls(dim=int(match.group(1)), seed=int(match.group(2)))

    def _slot(self, token: str) -> tuple[int, float]:
        cached = self._slots.get(token)
        if cached is not None:
            return cached
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=9, key=self._key).digest()
        index = int.from_bytes(digest[:8], "little") % self.dim
        sign = 1.0 if digest[8] & 1 else -1.0
        slot = (index, sign)
        with self._lock:
            self._slots[token] = slot
        return slot

    def embed(self, text: str) -> np.ndarray:
        values = np.zeros(self.dim, dtype=np.float64)
        for token in textnorm.tokenize(text):
            index, sign = self._slot(token)
            values[index] += sign
        norm = float(np.linalg.norm(values))
        if norm > 0.0:
            values /= norm
        return values

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [self.embed(text) for text in texts]


def hash_embed(
    text: str,
    dim: int = DEFAULT_HASH_DIM,
    *,
    seed: int = 0,
    field: str = "content",
) -> EmbeddingVector:
    """One-shot feature-hash embedding of a text."""
    embedder = HashEmbedder(dim=dim, seed=seed)
    return embed_text(embedder, text, field=field)


def pool_word_vectors(
    word_vectors: Sequence[np.ndarray],
    *,
    dim: int | None = None,
) -> np.ndarray:
    """Component-wise arithmetic mean of word vectors.

    Out-of-vocabulary words must already be excluded by the caller. The
    empty list pools to the zero vector, which requires an explicit dim.
    """
    if not word_vectors:
        if dim is None:
            raise SchemaError("pooling an empty list requires an explicit dim")
        return np.zeros(dim, dtype=np.float64)
    arrays = [np.asarray(v, dtype=np.float64) for v in word_vectors]
    first_dim = arrays[0].shape
    for a in arrays[1:]:
        if a.shape != first_dim:
            raise SchemaError(f"mixed dimensions in pooling: {first_dim} vs {a.shape}")
    if dim is not None and first_dim != (dim,):
        raise SchemaError(f"vectors have dim {first_dim}, expected ({dim},)")
    return np.mean(np.stack(arrays), axis=0)


# ---------------------------------------------------------------------------
# Remote provider
# ---------------------------------------------------------------------------


def _post_embed(
    endpoint: str,
    texts: Sequence[str],
    *,
    timeout: float,
    session: requests.Session | None = None,
) -> tuple[str, int, list[np.ndarray]]:
    """Raw protocol call; returns (provider_id, dim, vectors)."""
    url = endpoint.rstrip("/") + "/embed"
    http = session or requests
    try:
        response = http.post(url, json={"texts": list(texts)}, timeout=timeout)
    except requests.RequestException as exc:
        raise TransportError(f"embedding endpoint unreachable: {url}: {exc}") from exc
    if response.status_code != 200:
        raise TransportError(f"embedding endpoint returned HTTP {response.status_code}: {url}")
    try:
        payload = response.json()
    except ValueError as exc:
        raise ProtocolError(f"embedding response is not JSON: {exc}") from exc
    try:
        provider_id = payload["provider_id"]
        dim = payload["dim"]
        raw_vectors = payload["vectors"]
    except (TypeError, KeyError) as exc:
        raise ProtocolError(f"embedding response missing field: {exc}") from exc
    if not isinstance(provider_id, str) or not isinstance(dim, int) or isinstance(dim, bool):
        raise ProtocolError("embedding response provider_id/dim have wrong types")
    if not isinstance(raw_vectors, list) or len(raw_vectors) != len(texts):
        raise ProtocolError(
            f"expected {len(texts)} vectors, got {len(raw_vectors) if isinstance(raw_vectors, list) else type(raw_vectors)}"
        )
    vectors: list[np.ndarray] = []
    for row in raw_vectors:
        try:
            values = np.asarray(row, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise ProtocolError(f"non-numeric vector payload: {exc}") from exc
        if values.ndim != 1 or values.shape[0] != dim or not np.all(np.isfinite(values)):
            raise ProtocolError(f"vector shape {values.shape} inconsistent with dim {dim}")
        vectors.append(values)
    return provider_id, dim, vectors


def remote_embed(
    endpoint: str,
    texts: Sequence[str],
    *,
    timeout: float = DEFAULT_TIMEOUT,
    field: str = "content",
    expected_dim: int | None = None,
    session: requests.Session | None = None,
) -> list[EmbeddingVector]:
    """Embed a batch of texts through a remote endpoint, order preserved.

    An empty batch returns an empty list without touching the network.
    Passing expected_dim turns a dimension change into a fatal
    ConsistencyError instead of silently accepting drifted vectors.
    """
    if not texts:
        return []
    provider_id, dim, vectors = _post_embed(endpoint, texts, timeout=timeout, session=session)
    if expected_dim is not None and dim != expected_dim:
        raise ConsistencyError(f"endpoint dim drifted from {expected_dim} to {dim}")
    return [
        EmbeddingVector(values=v, dim=dim, provider_id=provider_id, field=field)
        for v in vectors
    ]


class RemoteEmbedder:
    """Provider backed by a remote embedding endpoint.

    Identity (provider_id, dim) is learned from the first protocol response
    and pinned for the lifetime of this object; any drift afterwards raises
    ConsistencyError. Concurrent callers share a bounded pool of in-flight
    requests.
    """

    granularity = "sentence"

    def __init__(
        self,
        endpoint: str,
        *,
        timeout: float = DEFAULT_TIMEOUT,
        max_inflight: int = DEFAULT_MAX_INFLIGHT,
        batch_size: int = 64,
    ):
        if max_inflight < 1:
            raise ConfigError(f"max_inflight must be >= 1, got {max_inflight}")
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.batch_size = batch_size
        self._gate = threading.BoundedSemaphore(max_inflight)
        self._session = requests.Session()
        self._identity_lock = threading.Lock()
        self._provider_id: str | None = None
        self._dim: int | None = None

    def _pin_identity(self, provider_id: str, dim: int) -> None:
        with self._identity_lock:
            if self._provider_id is None:
                self._provider_id, self._dim = provider_id, dim
                return
        if provider_id != self._provider_id:
            raise ConsistencyError(
                f"endpoint provider changed from {self._provider_id!r} to {provider_id!r}"
            )
        if dim != self._dim:
            raise ConsistencyError(f"endpoint dim drifted from {self._dim} to {dim}")

    def _ensure_identity(self) -> None:
        if self._provider_id is not None:
            return
        # Probe with an empty batch: cheap, and the response carries identity.
        with self._gate:
            provider_id, dim, _ = _post_embed(
                self.endpoint, [], timeout=self.timeout, session=self._session
            )
        self._pin_identity(provider_id, dim)

    @property
    def provider_id(self) -> str:
        self._ensure_identity()
        assert self._provider_id is not None
        return self._provider_id

    @property
    def dim(self) -> int:
        self._ensure_identity()
        assert self._dim is not None
        return self._dim

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        out: list[np.ndarray] = []
        for start in range(0, len(texts), self.batch_size):
            chunk = list(texts[start : start + self.batch_size])
            with self._gate:
                provider_id, dim, vectors = _post_embed(
                    self.endpoint, chunk, timeout=self.timeout, session=self._session
                )
            self._pin_identity(provider_id, dim)
            out.extend(vectors)
        return out

    def health(self) -> dict:
        """GET /health; raises TransportError when unreachable."""
        url = self.endpoint + "/health"
        try:
            response = self._session.get(url, timeout=self.timeout)
        except requests.RequestException as exc:
            raise TransportError(f"health check failed: {url}: {exc}") from exc
        if response.status_code != 200:
            raise TransportError(f"health check returned HTTP {response.status_code}")
        try:
            return response.json()
        except ValueError as exc:
            raise ProtocolError(f"health response is not JSON: {exc}") from exc


def load_precomputed(path) -> dict[str, tuple[EmbeddingVector, EmbeddingVector]]:
    """Load per-entry (title, content) vector pairs from an index cache file.

    Thin view over the index store format; all vectors share one provider
    and dimension by construction of that format.
    """
    from .index_store import load_index

    index = load_index(path)
    return {
        query_id: (
            EmbeddingVector(values=title, dim=index.dim, provider_id=index.provider_id, field="title"),
            EmbeddingVector(values=content, dim=index.dim, provider_id=index.provider_id, field="content"),
        )
        for query_id, (title, content) in index.records.items()
    }
