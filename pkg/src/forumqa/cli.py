"""Command-line entry points: ingest, index, query, serve, bench.

Exit codes are part of the contract: 0 on success, 1 for usage and
configuration mistakes, 2 when the data itself is bad (unreadable TSV,
corrupt index, unknown ids). Argparse wants to exit 2 on usage errors, so
the parser is overridden to keep that lane clean for data problems.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .bench import bench_tart, format_report
from .config import ServiceConfig, load_config
from .errors import ConfigError, ForumQAError
from .index_store import build_index, load_index, save_index
from .kb import KnowledgeBase, build_knowledge_base, load_kb_json, save_kb_json
from .retrieval import RANKING_MODES, Query, RetrievalEngine
from .service import create_app
from .synth import synth_kb, synth_queries

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    # Usage problems must exit 1; argparse's default of 2 collides with
    # the data-error code.
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise SystemExit(_fail(EXIT_USAGE, message))


def _fail(code: int, message: str) -> int:
    print(f"forumqa: error: {message}", file=sys.stderr)
    return code


def _build_parser() -> _Parser:
    parser = _Parser(prog="forumqa", description="duplicate-question retrieval over forum archives")
    parser.add_argument("--config", help="key=value config file (default: $QA_CONFIG if set)")
    sub = parser.add_subparsers(dest="command", required=True)

    def data_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--questions", help="questions TSV export")
        p.add_argument("--threads", help="answer-threads TSV export")
        p.add_argument("--kb", help="previously ingested knowledge-base JSON")
        p.add_argument("--index", help="embedding index file")
        p.add_argument("--provider", help="hash | precomputed | http(s) URL")
        p.add_argument("--dim", type=int, help="hash embedder dimension")
        p.add_argument("--seed", type=int, help="hash embedder seed")

    p_ingest = sub.add_parser("ingest", help="clean a TSV export into a knowledge-base file")
    p_ingest.add_argument("--questions", required=True)
    p_ingest.add_argument("--threads")
    p_ingest.add_argument("--out", required=True, help="where to write the knowledge-base JSON")
    p_ingest.set_defaults(func=_cmd_ingest)

    p_index = sub.add_parser("index", help="embed the corpus and save the index")
    data_flags(p_index)
    p_index.add_argument("--out", required=True, help="where to write the index")
    p_index.set_defaults(func=_cmd_index)

    p_query = sub.add_parser("query", help="rank one question against the knowledge base")
    data_flags(p_query)
    p_query.add_argument("--title", required=True)
    p_query.add_argument("--content", default="")
    p_query.add_argument("--tags", default="", help="comma-separated tags")
    p_query.add_argument("--k", type=int)
    p_query.add_argument("--threshold", type=float)
    p_query.add_argument("--mode", choices=RANKING_MODES)
    p_query.add_argument("--cascade-m", type=int, dest="cascade_m", help="enable the prefilter with this size")
    p_query.add_argument("--weights", help="p,q,r blend weights, e.g. 2,1,1")
    p_query.add_argument("--restrict-tags", action="store_true", help="only consider entries sharing a tag")
    p_query.set_defaults(func=_cmd_query)

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    data_flags(p_serve)
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)
    p_serve.set_defaults(func=_cmd_serve)

    p_bench = sub.add_parser("bench", help="measure query turn-around time")
    data_flags(p_bench)
    p_bench.add_argument("--synthetic", type=int, metavar="N", help="use an N-entry generated corpus")
    p_bench.add_argument("--queries", type=int, default=100)
    p_bench.add_argument("--repetitions", type=int, default=1)
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def _merged_config(args: argparse.Namespace) -> ServiceConfig:
    cfg = load_config(args.config)
    overrides = {}
    for name in ("questions", "threads", "kb", "index", "provider", "dim", "seed",
                 "k", "threshold", "host", "port"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "weights", None):
        parts = args.weights.split(",")
        if len(parts) != 3:
            raise ConfigError(f"--weights expects p,q,r, got {args.weights!r}")
        try:
            overrides["weight_p"], overrides["weight_q"], overrides["weight_r"] = (
                float(x) for x in parts
            )
        except ValueError:
            raise ConfigError(f"--weights expects three numbers, got {args.weights!r}") from None
    if getattr(args, "cascade_m", None) is not None:
        overrides["cascade"] = True
        overrides["prefilter_size"] = args.cascade_m
    return replace(cfg, **overrides)


def _load_kb(cfg: ServiceConfig) -> KnowledgeBase:
    if cfg.kb:
        return load_kb_json(cfg.kb)
    if cfg.questions:
        return build_knowledge_base(cfg.questions, cfg.threads)
    raise ConfigError("no data source: pass --kb FILE or --questions FILE")


def _make_engine(cfg: ServiceConfig, kb: KnowledgeBase) -> RetrievalEngine:
    index = None
    index_provider_id = None
    if cfg.index and Path(cfg.index).exists():
        index = load_index(cfg.index, kb)
        index_provider_id = index.provider_id
    provider = cfg.make_provider(index_provider_id)
    return RetrievalEngine(kb, provider, index, cfg.weights())


def _cmd_ingest(args: argparse.Namespace) -> int:
    kb = build_knowledge_base(args.questions, args.threads)
    save_kb_json(kb, args.out)
    stats = kb.stats
    print(
        f"ingested {stats.raw_count} rows: kept {stats.cleaned_count}, "
        f"dropped {stats.dropped_count}; {len(kb.threads)} answer threads -> {args.out}"
    )
    return EXIT_OK


def _cmd_index(args: argparse.Namespace) -> int:
    cfg = _merged_config(args)
    kb = _load_kb(cfg)
    provider = cfg.make_provider()
    index = build_index(kb, provider)
    save_index(index, args.out)
    print(f"indexed {len(index.records)} entries (dim {index.dim}, {index.provider_id}) -> {args.out}")
    return EXIT_OK


def _cmd_query(args: argparse.Namespace) -> int:
    cfg = _merged_config(args)
    kb = _load_kb(cfg)
    engine = _make_engine(cfg, kb)
    tags = frozenset(t.strip().lower() for t in args.tags.split(",") if t.strip())
    query = Query(
        title=args.title,
        content=args.content,
        tags=tags,
        k=cfg.k,
        threshold=cfg.threshold,
        mode=args.mode or "weighted",
        prefilter_size=cfg.prefilter_size if cfg.cascade else None,
        restrict_tags=args.restrict_tags,
    )
    matches = engine.retrieve(query)
    if not matches:
        print("no match at or above the threshold; this looks like a new question")
        return EXIT_OK
    print(f"{'rank':>4}  {'query_id':<12} {'n_sim':>7} {'t_sim':>7} {'h_sim':>7} {'c_sim':>7}  title")
    for match in matches:
        b = match.breakdown
        thread_mark = " [thread]" if match.thread_available else ""
        print(
            f"{match.rank:>4}  {match.query_id:<12} {b.n_sim:7.4f} {b.t_sim:7.4f} "
            f"{b.h_sim:7.4f} {b.c_sim:7.4f}  {match.title}{thread_mark}"
        )
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    cfg = _merged_config(args)
    kb = _load_kb(cfg)
    engine = _make_engine(cfg, kb)
    app = create_app(engine, cfg)
    print(f"serving {len(kb.entries)} questions on http://{cfg.host}:{cfg.port}")
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    cfg = _merged_config(args)
    corpus_seed = cfg.seed if cfg.seed is not None else 0
    if args.synthetic is not None:
        if args.synthetic < 1:
            raise ConfigError(f"--synthetic needs a positive corpus size, got {args.synthetic}")
        kb = synth_kb(args.synthetic, seed=corpus_seed)
    else:
        kb = _load_kb(cfg)
    engine = _make_engine(cfg, kb)
    queries = synth_queries(kb, args.queries, seed=corpus_seed, k=cfg.k, threshold=cfg.threshold)
    report = bench_tart(engine, queries, repetitions=args.repetitions)
    print(format_report(report))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        return _fail(EXIT_USAGE, str(exc))
    except ForumQAError as exc:
        return _fail(EXIT_DATA, str(exc))
    except OSError as exc:
        return _fail(EXIT_DATA, str(exc))


if __name__ == "__main__":
    sys.exit(main())
