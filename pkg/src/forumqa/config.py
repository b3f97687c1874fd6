"""Service configuration: one flat key=value file, env-discoverable.

The file pointed to by QA_CONFIG (or --config) holds `key=value` lines;
blank lines and #-comments are skipped. Every key has a CLI flag twin and
flags win, so a config file is a convenience, never a requirement.

Provider selection is a single string: "hash" for the built-in
deterministic embedder, an http(s) URL for a remote embedding service, or
"precomputed" to serve from a saved index alone. Precomputed mode still
needs a live embedder for the incoming query; that works when the index
was built by a hash provider (the id encodes everything needed to rebuild
it) and fails with a clear message otherwise.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .embeddings import HashEmbedder, RemoteEmbedder
from .errors import ConfigError
from .retrieval import DEFAULT_K, DEFAULT_PREFILTER, DEFAULT_THRESHOLD
from .similarity import DEFAULT_WEIGHTS, Weights

ENV_CONFIG = "QA_CONFIG"


@dataclass(frozen=True)
class ServiceConfig:
    questions: str | None = None
    threads: str | None = None
    kb: str | None = None
    index: str | None = None
    provider: str = "hash"
    dim: int | None = None  # unset means the embedder default, or whatever a loaded index says
    seed: int | None = None
    weight_p: float = DEFAULT_WEIGHTS.p
    weight_q: float = DEFAULT_WEIGHTS.q
    weight_r: float = DEFAULT_WEIGHTS.r
    k: int = DEFAULT_K
    threshold: float = DEFAULT_THRESHOLD
    cascade: bool = False
    prefilter_size: int = DEFAULT_PREFILTER
    host: str = "127.0.0.1"
    port: int = 8080

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold must lie in [0, 1], got {self.threshold!r}")
        if self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k!r}")
        if self.prefilter_size < 1:
            raise ConfigError(f"prefilter_size must be a positive integer, got {self.prefilter_size!r}")
        if self.dim is not None and self.dim < 1:
            raise ConfigError(f"dim must be a positive integer, got {self.dim!r}")
        if not 0 < self.port < 65536:
            raise ConfigError(f"port must lie in 1..65535, got {self.port!r}")
        if not self.provider:
            raise ConfigError("provider must not be empty")
        # Raising here (rather than at first use) keeps a bad weight
        # triple from ever reaching the engine.
        self.weights()

    def weights(self) -> Weights:
        return Weights(self.weight_p, self.weight_q, self.weight_r)

    def make_provider(self, index_provider_id: str | None = None):
        """Instantiate the embedder this config selects.

        A loaded index's provider id wins over unset hash parameters, so
        `index` followed by `query` against the same files just works.
        For "precomputed", the saved index's provider id decides alone:
        hash ids carry their own parameters, anything else cannot be
        revived from the id and the operator must point at the live
        service instead.
        """
        if self.provider == "hash":
            untouched = self.dim is None and self.seed is None
            if untouched and index_provider_id is not None and index_provider_id.startswith("hash-"):
                return HashEmbedder.from_provider_id(index_provider_id)
            return HashEmbedder(
                dim=self.dim if self.dim is not None else 256,
                seed=self.seed if self.seed is not None else 0,
            )
        if self.provider.startswith(("http://", "https://")):
            return RemoteEmbedder(self.provider)
        if self.provider == "precomputed":
            if index_provider_id is None:
                raise ConfigError("provider=precomputed requires a saved index (set index=...)")
            if index_provider_id.startswith("hash-"):
                return HashEmbedder.from_provider_id(index_provider_id)
            raise ConfigError(
                f"index was built by {index_provider_id!r}; queries need that service live, "
                "so set provider to its URL instead of 'precomputed'"
            )
        raise ConfigError(
            f"provider must be 'hash', 'precomputed', or an http(s) URL, got {self.provider!r}"
        )


_FIELD_TYPES = {f.name: f.type for f in fields(ServiceConfig)}


def _coerce(key: str, raw: str) -> object:
    kind = _FIELD_TYPES[key]
    if kind in ("str", "str | None"):
        return raw
    if kind in ("int", "int | None"):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key} expects an integer, got {raw!r}") from None
    if kind == "float":
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{key} expects a number, got {raw!r}") from None
    if kind == "bool":
        lowered = raw.strip().lower()
        if lowered in ("true", "yes", "on", "1"):
            return True
        if lowered in ("false", "no", "off", "0"):
            return False
        raise ConfigError(f"{key} expects true/false, got {raw!r}")
    raise ConfigError(f"unsupported config key {key!r}")


def parse_config(text: str, base: ServiceConfig | None = None) -> ServiceConfig:
    updates: dict[str, object] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"config line {line_no}: expected key=value, got {line!r}")
        if key not in _FIELD_TYPES:
            raise ConfigError(f"config line {line_no}: unknown key {key!r}")
        updates[key] = _coerce(key, value.strip())
    if base is None:
        return ServiceConfig(**updates)  # type: ignore[arg-type]
    return replace(base, **updates)  # type: ignore[arg-type]


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Read the config file at path, or at $QA_CONFIG, or fall back to defaults."""
    if path is None:
        env = os.environ.get(ENV_CONFIG)
        if not env:
            return ServiceConfig()
        path = env
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text)
