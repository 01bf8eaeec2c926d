"""Command line entry points: run one turn, run a benchmark, serve HTTP."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..agents.types import FINAL_OK, UserQuery
from ..benchharness.datasets import dataset_formats, load_dataset
from ..benchharness.runner import run_benchmark
from ..errors import (
    ConfigInvalid,
    MotionAgentsError,
    UnknownFormat,
    ValidationError,
)
from .config import (
    EngineConfig,
    build_bundle,
    load_config,
    resolve_storage_root,
)
from .storage import SessionStore, media_ref_for_file


def _load_or_default(config_path: str | None, seed: int | None) -> EngineConfig:
    if config_path:
        config = load_config(config_path)
    else:
        config = EngineConfig.template_default()
    if seed is not None:
        config = config.with_seed(seed)
    return config


def _cmd_run(args: argparse.Namespace) -> int:
    config = _load_or_default(args.config, args.seed)
    bundle = build_bundle(config)
    attachments = []
    for media_path in args.media or []:
        if not Path(media_path).is_file():
            print(f"media file not found: {media_path}", file=sys.stderr)
            return 2
        attachments.append(media_ref_for_file(media_path))
    query = UserQuery(text=args.query, attachments=tuple(attachments))
    turn_id = f"{args.session_id}:0"
    trace = bundle.engine.run_turn(query, turn_id=turn_id)
    if args.trace:
        Path(args.trace).write_text(trace.to_json(), encoding="utf-8")
    if trace.final_status == FINAL_OK:
        print(trace.answer)
        return 0
    failure = trace.failure or {}
    print(f"turn failed: {failure.get('error', 'unknown')}: "
          f"{failure.get('message', '')}", file=sys.stderr)
    return 1


def _cmd_bench(args: argparse.Namespace) -> int:
    config = _load_or_default(args.config, args.seed)
    cases = load_dataset(args.dataset, args.format)
    bundle = build_bundle(config)
    report = run_benchmark(cases, bundle.engine, judge=bundle.judge,
                           seed=config.seed, config_digest=config.fingerprint(),
                           backends=config.backend_kinds())
    if args.report:
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
    print(report.render_text())
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .app import create_app

    config = _load_or_default(args.config, args.seed)
    overrides = config.to_dict()
    if args.storage:
        overrides["storage_root"] = args.storage
    if args.admin_token:
        overrides["admin_token"] = args.admin_token
    config = EngineConfig.from_dict(overrides)
    bundle = build_bundle(config)
    store = SessionStore(resolve_storage_root(config))
    app = create_app(bundle, store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motionagents",
        description="Agent-orchestrated motion understanding engine.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="answer one query and exit")
    run.add_argument("--query", required=True, help="user query text")
    run.add_argument("--media", action="append", default=[],
                     help="path to a motion or video file (repeatable)")
    run.add_argument("--config", help="engine config JSON path")
    run.add_argument("--trace", help="write the execution trace JSON here")
    run.add_argument("--seed", type=int, default=None, help="override config seed")
    run.add_argument("--session-id", default="local",
                     help="session id used in the turn id")
    run.set_defaults(func=_cmd_run)

    bench = sub.add_parser("bench", help="score a benchmark dataset")
    bench.add_argument("--dataset", required=True, help="JSONL dataset path")
    bench.add_argument("--format", default="cases", choices=dataset_formats(),
                       help="dataset layout")
    bench.add_argument("--config", help="engine config JSON path")
    bench.add_argument("--report", help="write the report JSON here")
    bench.add_argument("--seed", type=int, default=None, help="override config seed")
    bench.set_defaults(func=_cmd_bench)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--config", help="engine config JSON path")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--storage", help="storage root directory")
    serve.add_argument("--admin-token", help="token guarding the admin endpoints")
    serve.add_argument("--seed", type=int, default=None, help="override config seed")
    serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigInvalid, ValidationError, UnknownFormat) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except MotionAgentsError as exc:
        print(f"{exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
