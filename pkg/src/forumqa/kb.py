"""Knowledge-base data model and TSV ingestion.

Input is tab-separated exports of archived forum questions and their
answer threads. Fields may not contain literal tabs or newlines; exports
escape them as \\t and \\n (and backslash as \\\\), which keeps one
physical line per record and makes parsing bit-exact.

Questions file header:  query_id\ttitle\tcontent\ttags\tasked_at
Threads file header:    query_id\tpost_index\tauthor_role\tbody

Cleaning is deliberately minimal: markup tags stripped, non-whitespace
control characters removed, whitespace collapsed. An entry is rejected
only when its id is empty or both title and content clean down to nothing.
"""

from __future__ import annotations

import json
import logging
import re
import unicodedata
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import DuplicateIdError, SchemaError

log = logging.getLogger(__name__)

AUTHOR_ROLES = ("student", "staff")
REQUIRED_QUESTION_COLUMNS = ("query_id", "title", "content", "tags")
OPTIONAL_QUESTION_COLUMNS = ("asked_at",)
THREAD_COLUMNS = ("query_id", "post_index", "author_role", "body")

_MARKUP_RE = re.compile(r"<[^>]*>")
_TAG_SPLIT_RE = re.compile(r"[,;]")


@dataclass(frozen=True)
class KbEntry:
    """One archived question."""

    query_id: str
    title: str
    content: str
    tags: frozenset[str] = frozenset()
    asked_at: int | None = None


@dataclass(frozen=True)
class ThreadPost:
    author_role: str  # "student" | "staff"
    body: str


@dataclass(frozen=True)
class AnswerThread:
    """Ordered discussion attached to one archived question."""

    query_id: str
    posts: tuple[ThreadPost, ...]


@dataclass(frozen=True)
class KbStats:
    raw_count: int
    cleaned_count: int
    dropped_count: int


@dataclass(frozen=True)
class KnowledgeBase:
    """Immutable snapshot of the question archive.

    Treat as read-only: mutation always goes through append_entry, which
    returns a fresh snapshot readers can be swapped onto atomically.
    """

    entries: dict[str, KbEntry]
    threads: dict[str, AnswerThread]
    stats: KbStats


# ---------------------------------------------------------------------------
# Field escaping
# ---------------------------------------------------------------------------


def escape_field(text: str) -> str:
    """Escape a field for TSV export: backslash, tab, newline, carriage return."""
    return (
        text.replace("\\", "\\\\")
        .replace("\t", "\\t")
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def unescape_field(text: str) -> str:
    """Inverse of escape_field; unknown escapes are preserved verbatim."""
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "t":
                out.append("\t")
                i += 2
                continue
            if nxt == "n":
                out.append("\n")
                i += 2
                continue
            if nxt == "r":
                out.append("\r")
                i += 2
                continue
            if nxt == "\\":
                out.append("\\")
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out)


# ---------------------------------------------------------------------------
# Cleaning
# ---------------------------------------------------------------------------


def strip_markup(text: str) -> str:
    """Drop <...> tag spans, replacing each with a space so words stay apart."""
    return _MARKUP_RE.sub(" ", text)


def _drop_control_chars(text: str) -> str:
    # Whitespace control chars (\t, \n, ...) survive here; the whitespace
    # collapse below turns them into single spaces.
    return "".join(
        ch for ch in text if not (unicodedata.category(ch) == "Cc" and not ch.isspace())
    )


def clean_text(text: str) -> str:
    """Markup stripped, control characters removed, whitespace collapsed."""
    return " ".join(_drop_control_chars(strip_markup(text)).split())


def clean_entry(raw: KbEntry) -> KbEntry | None:
    """Clean one entry; None means rejected (not an error).

    Rejection happens only for an empty query_id or when title and content
    are both empty after cleaning. Cleaning is idempotent.
    """
    query_id = raw.query_id.strip()
    if not query_id:
        return None
    title = clean_text(raw.title)
    content = clean_text(raw.content)
    if not title and not content:
        return None
    tags = frozenset(t for t in (clean_text(tag).lower() for tag in raw.tags) if t)
    return KbEntry(query_id=query_id, title=title, content=content, tags=tags, asked_at=raw.asked_at)


# ---------------------------------------------------------------------------
# TSV parsing
# ---------------------------------------------------------------------------


@dataclass
class ParsedQuestions:
    """Raw entries plus bookkeeping for rows the parser had to skip."""

    entries: list[KbEntry]
    skipped: int
    diagnostics: list[str]

    @property
    def raw_count(self) -> int:
        return len(self.entries) + self.skipped


def _read_rows(path: str | Path) -> list[list[str]]:
    """Physical lines -> unescaped field lists; the first row is the header."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [[unescape_field(f) for f in line.rstrip("\r").split("\t")] for line in lines]


def _header_positions(header: list[str], required: tuple[str, ...]) -> dict[str, int]:
    positions = {name.strip(): i for i, name in enumerate(header)}
    for column in required:
        if column not in positions:
            raise SchemaError(f"missing mandatory column {column!r} in header {header!r}")
    return positions


def parse_tags(raw: str) -> frozenset[str]:
    """Split a tags cell on commas/semicolons; trimmed, lowercased, empties dropped."""
    return frozenset(t for t in (part.strip().lower() for part in _TAG_SPLIT_RE.split(raw)) if t)


def parse_questions_tsv(path: str | Path) -> ParsedQuestions:
    """Parse a questions export into raw (uncleaned) entries.

    Rows with the wrong field count are skipped, counted, and reported in
    diagnostics rather than failing the whole file.
    """
    rows = _read_rows(path)
    if not rows:
        raise SchemaError(f"{path}: empty file, expected a header row")
    positions = _header_positions(rows[0], REQUIRED_QUESTION_COLUMNS)
    width = len(rows[0])
    asked_at_pos = positions.get("asked_at")

    entries: list[KbEntry] = []
    skipped = 0
    diagnostics: list[str] = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            skipped += 1
            diagnostics.append(f"line {line_no}: expected {width} fields, got {len(row)}")
            continue
        asked_at: int | None = None
        if asked_at_pos is not None:
            cell = row[asked_at_pos].strip()
            if cell:
                try:
                    asked_at = int(cell)
                except ValueError:
                    diagnostics.append(f"line {line_no}: unparseable asked_at {cell!r}, ignored")
        entries.append(
            KbEntry(
                query_id=row[positions["query_id"]],
                title=row[positions["title"]],
                content=row[positions["content"]],
                tags=parse_tags(row[positions["tags"]]),
                asked_at=asked_at,
            )
        )
    for message in diagnostics:
        log.warning("%s: %s", path, message)
    return ParsedQuestions(entries=entries, skipped=skipped, diagnostics=diagnostics)


@dataclass
class ParsedThreads:
    rows: list[tuple[str, int, str, str]]  # (query_id, post_index, author_role, body)
    diagnostics: list[str]


def parse_threads_tsv(path: str | Path) -> ParsedThreads:
    """Parse a threads export; malformed rows are skipped with a diagnostic."""
    rows = _read_rows(path)
    if not rows:
        raise SchemaError(f"{path}: empty file, expected a header row")
    positions = _header_positions(rows[0], THREAD_COLUMNS)
    width = len(rows[0])

    parsed: list[tuple[str, int, str, str]] = []
    diagnostics: list[str] = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            diagnostics.append(f"line {line_no}: expected {width} fields, got {len(row)}")
            continue
        try:
            post_index = int(row[positions["post_index"]].strip())
        except ValueError:
            diagnostics.append(f"line {line_no}: unparseable post_index")
            continue
        role = row[positions["author_role"]].strip().lower()
        if role not in AUTHOR_ROLES:
            diagnostics.append(f"line {line_no}: unknown author_role {role!r}")
            continue
        body = clean_text(row[positions["body"]])
        if not body:
            diagnostics.append(f"line {line_no}: empty post body")
            continue
        parsed.append((row[positions["query_id"]].strip(), post_index, role, body))
    for message in diagnostics:
        log.warning("%s: %s", path, message)
    return ParsedThreads(rows=parsed, diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# Building and updating
# ---------------------------------------------------------------------------


def build_knowledge_base(
    questions_path: str | Path,
    threads_path: str | Path | None = None,
) -> KnowledgeBase:
    """Build a cleaned knowledge base from TSV exports.

    Deterministic: the same input files always produce a byte-identical
    serialized snapshot. Duplicate ids keep the first occurrence; every
    dropped row (malformed, rejected by cleaning, duplicate) is counted so
    cleaned_count + dropped_count = raw_count holds exactly.
    """
    parsed = parse_questions_tsv(questions_path)
    entries: dict[str, KbEntry] = {}
    dropped = parsed.skipped
    for raw in parsed.entries:
        cleaned = clean_entry(raw)
        if cleaned is None:
            dropped += 1
            log.warning("%s: entry %r rejected by cleaning", questions_path, raw.query_id)
        elif cleaned.query_id in entries:
            dropped += 1
            log.warning("%s: duplicate query_id %r, keeping first", questions_path, cleaned.query_id)
        else:
            entries[cleaned.query_id] = cleaned

    threads: dict[str, AnswerThread] = {}
    if threads_path is not None:
        grouped: dict[str, list[ThreadPost]] = {}
        for query_id, _post_index, role, body in parse_threads_tsv(threads_path).rows:
            if query_id not in entries:
                log.warning("%s: thread row for unknown query_id %r dropped", threads_path, query_id)
                continue
            grouped.setdefault(query_id, []).append(ThreadPost(author_role=role, body=body))
        threads = {qid: AnswerThread(query_id=qid, posts=tuple(posts)) for qid, posts in grouped.items()}

    stats = KbStats(
        raw_count=parsed.raw_count,
        cleaned_count=len(entries),
        dropped_count=dropped,
    )
    return KnowledgeBase(entries=entries, threads=threads, stats=stats)


def append_entry(kb: KnowledgeBase, entry: KbEntry) -> KnowledgeBase:
    """Add one entry, returning a new snapshot; the input snapshot is untouched."""
    cleaned = clean_entry(entry)
    if cleaned is None:
        raise SchemaError(f"entry {entry.query_id!r} rejected by cleaning")
    if cleaned.query_id in kb.entries:
        raise DuplicateIdError(f"query_id {cleaned.query_id!r} already present")
    entries = dict(kb.entries)
    entries[cleaned.query_id] = cleaned
    stats = KbStats(
        raw_count=kb.stats.raw_count + 1,
        cleaned_count=kb.stats.cleaned_count + 1,
        dropped_count=kb.stats.dropped_count,
    )
    return KnowledgeBase(entries=entries, threads=kb.threads, stats=stats)


# ---------------------------------------------------------------------------
# Canonical serialization
# ---------------------------------------------------------------------------


def kb_to_json_bytes(kb: KnowledgeBase) -> bytes:
    """Canonical byte serialization; equal snapshots serialize identically."""
    doc = {
        "entries": [
            {
                "query_id": e.query_id,
                "title": e.title,
                "content": e.content,
                "tags": sorted(e.tags),
                "asked_at": e.asked_at,
            }
            for e in (kb.entries[k] for k in sorted(kb.entries))
        ],
        "threads": {
            qid: [{"author_role": p.author_role, "body": p.body} for p in kb.threads[qid].posts]
            for qid in sorted(kb.threads)
        },
        "stats": {
            "raw_count": kb.stats.raw_count,
            "cleaned_count": kb.stats.cleaned_count,
            "dropped_count": kb.stats.dropped_count,
        },
    }
    return json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":")).encode("utf-8")


def save_kb_json(kb: KnowledgeBase, path: str | Path) -> None:
    Path(path).write_bytes(kb_to_json_bytes(kb))


def load_kb_json(path: str | Path) -> KnowledgeBase:
    """Load a snapshot produced by save_kb_json, revalidating invariants."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not a knowledge base snapshot: {exc}") from exc
    try:
        entries = {
            e["query_id"]: KbEntry(
                query_id=e["query_id"],
                title=e["title"],
                content=e["content"],
                tags=frozenset(e["tags"]),
                asked_at=e["asked_at"],
            )
            for e in doc["entries"]
        }
        threads = {
            qid: AnswerThread(
                query_id=qid,
                posts=tuple(ThreadPost(author_role=p["author_role"], body=p["body"]) for p in posts),
            )
            for qid, posts in doc["threads"].items()
        }
        stats = KbStats(**doc["stats"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"{path}: malformed knowledge base snapshot: {exc}") from exc
    for qid in threads:
        if qid not in entries:
            raise SchemaError(f"{path}: thread {qid!r} has no matching entry")
    if stats.cleaned_count + stats.dropped_count != stats.raw_count:
        raise SchemaError(f"{path}: inconsistent stats {stats}")
    return KnowledgeBase(entries=entries, threads=threads, stats=stats)
