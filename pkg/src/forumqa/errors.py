"""Exception taxonomy shared across the engine.

Callers are expected to branch on these types: transport failures are
retryable, everything else indicates bad input or bad wiring.
"""


class ForumQAError(Exception):
    """Base class for all engine errors."""


class SchemaError(ForumQAError):
    """Structurally invalid data: missing columns, wrong vector dimension, bad shapes."""


class ConfigError(ForumQAError):
    """Invalid configuration value (weights, thresholds, provider selection)."""


class ConsistencyError(ForumQAError):
    """Two components that must agree do not (provider ids, pinned dimensions)."""


class DuplicateIdError(ForumQAError):
    """An id that must be unique is already present."""


class UnknownIdError(ForumQAError):
    """Lookup of an id the knowledge base has never seen."""


class TransportError(ForumQAError):
    """Remote embedding endpoint unreachable or timed out; safe to retry."""


class ProtocolError(ForumQAError):
    """Remote embedding endpoint answered with a payload violating the wire protocol."""


class IndexFormatError(ForumQAError):
    """Embedding index file is malformed; the message names the offending line."""
