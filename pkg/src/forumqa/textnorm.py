"""Deterministic tokenization and token-set construction.

Feeds both the lexical overlap metric and the word-level embedding path.
Tokens are lowercase alphanumeric runs; everything else (punctuation,
underscores, whitespace) separates them. Stopword removal and stemming
exist as opt-in flags but default off so the overlap metric sees raw
word sets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

SOURCE_FIELDS = ("title", "content", "title+content")

# Unicode-aware: \w minus underscore leaves letter/digit/mark runs.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Small built-in list used only when drop_stopwords=True.
_STOPWORDS = frozenset(
    """a an and are as at be but by for from has have if in into is it its of on
    or our so that the their them then there these this to was we were what when
    which will with you your""".split()
)

_SUFFIXES = ("ing", "ed", "es", "s")
_MIN_STEM = 3


def _stem(token: str) -> str:
    """Very small suffix stripper; approximate by design, not a full stemmer."""
    if token.endswith("ss"):
        return token
    for suffix in _SUFFIXES:
        if token.endswith(suffix) and len(token) - len(suffix) >= _MIN_STEM:
            return token[: -len(suffix)]
    return token


def tokenize(text: str, *, drop_stopwords: bool = False, stem: bool = False) -> list[str]:
    """Split text into lowercase tokens, order preserved.

    Case folding (not plain lowercasing) keeps the result stable under
    upper/lower round trips of ligatures and sharp s.
    """
    tokens = _TOKEN_RE.findall(text.casefold())
    if drop_stopwords:
        tokens = [t for t in tokens if t not in _STOPWORDS]
    if stem:
        tokens = [_stem(t) for t in tokens]
    return tokens


@dataclass(frozen=True)
class TokenSet:
    """Deduplicated tokens of one text field."""

    tokens: frozenset[str]
    source_field: str = "title+content"

    def __post_init__(self) -> None:
        if self.source_field not in SOURCE_FIELDS:
            raise ValueError(f"source_field must be one of {SOURCE_FIELDS}, got {self.source_field!r}")
        if not isinstance(self.tokens, frozenset):
            object.__setattr__(self, "tokens", frozenset(self.tokens))
        if "" in self.tokens:
            raise ValueError("token sets must not contain empty tokens")

    def __len__(self) -> int:
        return len(self.tokens)


def token_set(
    text: str,
    source_field: str = "title+content",
    *,
    drop_stopwords: bool = False,
    stem: bool = False,
) -> TokenSet:
    """Token set of a text field; cardinality never exceeds the token list length."""
    return TokenSet(
        tokens=frozenset(tokenize(text, drop_stopwords=drop_stopwords, stem=stem)),
        source_field=source_field,
    )
