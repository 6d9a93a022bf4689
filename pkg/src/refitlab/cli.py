"""Command-line front door.

Subcommands: ``serve`` (run the HTTP service), ``search``, ``refit``,
``distances`` (headless one-shots), and ``replay`` (re-execute a journal).
Reports print as human tables by default and as service-identical JSON with
``--json``. Exit codes: 0 success, 2 usage error, 3 data error (missing
word, malformed file, stale version), 4 journal chain mismatch.
"""

from __future__ import annotations

import argparse
import sys

from . import similarity
from .errors import ChainMismatchError, WorkbenchError
from .journal import Journal, replay
from .refit import RefitParams
from .store import EmbeddingStore, load_path, save_path
from .workbench import (
    Workbench,
    distances_payload,
    search_payload,
    to_json_bytes,
)

USAGE_EXIT = 2
DATA_EXIT = 3
CHAIN_EXIT = 4


def _add_embeddings_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--embeddings", required=True, help="path to the embedding text file")
    parser.add_argument(
        "--format",
        choices=("word2vec-text", "headerless"),
        default="word2vec-text",
        help="embedding file format (default: word2vec-text)",
    )


def _split_words(raw: str, parser: argparse.ArgumentParser) -> list[str]:
    # Tokens never contain whitespace, and commas are reserved as the
    # list separator, so a plain split is unambiguous.
    words = [w for w in raw.split(",") if w]
    if not words:
        parser.error("--words must name at least one token")
    return words


def _print_json(payload) -> None:
    sys.stdout.write(to_json_bytes(payload).decode("utf-8") + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refitlab",
        description="Interactive word-embedding re-fitting workbench.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    _add_embeddings_args(p_serve)
    p_serve.add_argument("--listen", default="127.0.0.1:8000", help="listen address as host:port")
    p_serve.add_argument("--journal", default=None, help="journal file (NDJSON), created if missing")
    p_serve.add_argument("--ui", default=None, help="directory of static UI files to serve at /")
    p_serve.set_defaults(func=cmd_serve)

    p_search = sub.add_parser("search", help="cosine search for a word")
    _add_embeddings_args(p_search)
    p_search.add_argument("--query", required=True)
    p_search.add_argument("--k", type=int, default=10)
    p_search.add_argument("--json", action="store_true")
    p_search.set_defaults(func=cmd_search)

    p_refit = sub.add_parser("refit", help="run one attract-set refit")
    _add_embeddings_args(p_refit)
    p_refit.add_argument("--mode", choices=("target", "set"), required=True)
    p_refit.add_argument("--words", required=True, help="comma-separated word list")
    p_refit.add_argument("--target", default=None, help="target word (target mode only)")
    p_refit.add_argument("--sweeps", type=int, default=None, help="maximum sweeps")
    p_refit.add_argument("--tolerance", type=float, default=None, help="convergence tolerance")
    p_refit.add_argument("--out", default=None, help="write the adjusted embeddings here")
    p_refit.add_argument("--json", action="store_true")
    p_refit.set_defaults(func=cmd_refit)

    p_dist = sub.add_parser("distances", help="pairwise distance report")
    _add_embeddings_args(p_dist)
    p_dist.add_argument("--words", required=True, help="comma-separated word list")
    p_dist.add_argument("--json", action="store_true")
    p_dist.set_defaults(func=cmd_distances)

    p_replay = sub.add_parser("replay", help="re-execute a journal against a base space")
    _add_embeddings_args(p_replay)
    p_replay.add_argument("--journal", required=True, help="journal file to replay")
    p_replay.add_argument("--out", default=None, help="write the final embeddings here")
    p_replay.add_argument("--json", action="store_true")
    p_replay.set_defaults(func=cmd_replay)

    return parser


def cmd_serve(args, parser) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.listen.rpartition(":")
    if not host or not port.isdigit():
        parser.error("--listen must look like host:port")
    space = load_path(args.embeddings, format=args.format)
    workbench = Workbench(EmbeddingStore(space), Journal(args.journal))
    app = create_app(workbench, ui_dir=args.ui)
    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return 0


def cmd_search(args, parser) -> int:
    if args.k < 0:
        parser.error("--k must be non-negative")
    space = load_path(args.embeddings, format=args.format)
    result = similarity.top_k(space, args.query, args.k)
    payload = search_payload(space, result)
    if args.json:
        _print_json(payload)
    else:
        for hit in payload["hits"]:
            print(f"{hit['word']:<24} {hit['score']:+.6f}")
    return 0


def cmd_refit(args, parser) -> int:
    words = _split_words(args.words, parser)
    if args.mode == "target" and not args.target:
        parser.error("--target is required with --mode target")
    if args.mode == "set" and args.target:
        parser.error("--target only applies to --mode target")
    kwargs = {}
    if args.sweeps is not None:
        kwargs["max_sweeps"] = args.sweeps
    if args.tolerance is not None:
        kwargs["tolerance"] = args.tolerance
    params = RefitParams(**kwargs)

    space = load_path(args.embeddings, format=args.format)
    workbench = Workbench(EmbeddingStore(space), Journal())
    payload = workbench.refit(
        mode=args.mode,
        words=words,
        base_version=space.version_id,
        target=args.target,
        params=params,
    )
    if args.out:
        save_path(workbench.store.current, args.out, format=args.format)
    if args.json:
        _print_json(payload)
    else:
        trace = payload["objective_trace"]
        print(
            f"refit {payload['mode']}: version {payload['base_version']} -> "
            f"{payload['version']}, {payload['sweeps_executed']} sweep(s), "
            f"objective {trace[0]:.6g} -> {trace[-1]:.6g}"
        )
        for word in payload["members"]:
            print(f"{word:<24} moved {payload['displacement'][word]:.6f}")
    return 0


def cmd_distances(args, parser) -> int:
    words = _split_words(args.words, parser)
    space = load_path(args.embeddings, format=args.format)
    payload = distances_payload(similarity.distance_report(space, words))
    if args.json:
        _print_json(payload)
    else:
        _print_matrix("euclidean distance", payload["words"], payload["euclidean"])
        _print_matrix("cosine similarity", payload["words"], payload["cosine"])
    return 0


def _print_matrix(title: str, words: list[str], matrix: list[list[float]]) -> None:
    width = max(8, max(len(w) for w in words) + 1)
    print(title)
    print(" " * width + "".join(f"{w:>{width}}" for w in words))
    for word, row in zip(words, matrix):
        print(f"{word:<{width}}" + "".join(f"{value:>{width}.4f}" for value in row))


def cmd_replay(args, parser) -> int:
    import os

    if not os.path.exists(args.journal):
        raise WorkbenchError(f"journal file not found: {args.journal}")
    space = load_path(args.embeddings, format=args.format)
    journal = Journal(args.journal)
    final = replay(journal, space)
    if args.out:
        save_path(final, args.out, format=args.format)
    summary = {
        "records": len(journal),
        "version": final.version_id,
        "vocab_size": len(final),
        "dim": final.dim,
    }
    if args.json:
        _print_json(summary)
    else:
        print(
            f"replayed {summary['records']} record(s) -> version "
            f"{summary['version']} ({summary['vocab_size']} words, dim {summary['dim']})"
        )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except ChainMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CHAIN_EXIT
    except WorkbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
