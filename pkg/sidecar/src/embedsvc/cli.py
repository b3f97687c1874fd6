"""Command line entry point: pick a model, start serving."""

from __future__ import annotations

import argparse
import sys

from .app import DEFAULT_MAX_BATCH, create_app
from .errors import ModelLoadError
from .sentence import DEFAULT_MODEL, SentenceModel
from .wordvec import WordVectorModel


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embedsvc",
        description="embedding server speaking the forumqa remote-provider protocol",
    )
    parser.add_argument(
        "--mode", choices=("word", "sentence"), default="sentence",
        help="word: pooled vectors from a text file; sentence: a transformer model",
    )
    parser.add_argument("--vectors", help="vector file for --mode word")
    parser.add_argument("--model", default=DEFAULT_MODEL, help="model name for --mode sentence")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8090)
    parser.add_argument("--max-batch", type=int, default=DEFAULT_MAX_BATCH)
    return parser


def load_model(args):
    if args.mode == "word":
        if not args.vectors:
            raise ModelLoadError("--mode word requires --vectors FILE")
        return WordVectorModel.from_file(args.vectors)
    return SentenceModel(args.model)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        model = load_model(args)
    except ModelLoadError as exc:
        print(f"embedsvc: error: {exc}", file=sys.stderr)
        return 1

    import uvicorn

    print(f"embedsvc: {model.provider_id} (dim {model.dim}) on {args.host}:{args.port}")
    uvicorn.run(create_app(model, args.max_batch), host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
