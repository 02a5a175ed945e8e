"""Command line entry point: run, sweep, classify, serve.

Exit codes: 0 success, 2 configuration or input error, 3 stage failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .pipeline import (
    ConfigError,
    PipelineStageError,
    classify_new,
    describe_plan,
    load_config,
    run_pipeline,
    run_sweep,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="temario",
        description="topic-count sweep, document embedding, clustering and report service for short-text corpora",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute the full pipeline and write a report bundle")
    run_p.add_argument("--config", required=True, help="JSON config file")
    run_p.add_argument("--dry-run", action="store_true", help="validate and print the plan, execute nothing")

    sweep_p = sub.add_parser("sweep", help="run only the corpus and coherence-sweep stages")
    sweep_p.add_argument("--config", required=True, help="JSON config file")

    cls_p = sub.add_parser("classify", help="classify new texts against an existing bundle")
    cls_p.add_argument("--bundle", required=True, help="report bundle directory")
    cls_p.add_argument("--input", required=True, help="text file, one document per line")

    serve_p = sub.add_parser("serve", help="serve a report bundle over HTTP")
    serve_p.add_argument("--bundle", required=True, help="report bundle directory")
    serve_p.add_argument("--port", type=int, default=None, help="default: the port recorded in the bundle config")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--static", default=None, help="static web client directory (default: <bundle>/static if present)")
    return parser


def _require_bundle(path: str) -> Path:
    bundle = Path(path)
    if not (bundle / "manifest.json").is_file():
        raise ConfigError(f"not a report bundle (no manifest.json): {bundle}")
    return bundle


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = load_config(args.config)
            if args.dry_run:
                print(describe_plan(config))
                return 0
            bundle = run_pipeline(config)
            print(f"bundle written to {bundle.output_dir} (k={bundle.selected_k})")
            return 0

        if args.command == "sweep":
            config = load_config(args.config)
            payload = run_sweep(config)
            print(f"sweep written to {config.output_dir} (elbow k={payload['elbow']['k']})")
            return 0

        if args.command == "classify":
            bundle = _require_bundle(args.bundle)
            input_path = Path(args.input)
            if not input_path.is_file():
                raise ConfigError(f"input file not found: {input_path}")
            texts = input_path.read_text(encoding="utf-8").splitlines()
            results = classify_new(bundle, texts)
            json.dump({"results": results}, sys.stdout, ensure_ascii=False, indent=1)
            print()
            return 0

        if args.command == "serve":
            bundle = _require_bundle(args.bundle)
            port = args.port
            if port is None:
                manifest = json.loads((bundle / "manifest.json").read_text(encoding="utf-8"))
                port = manifest.get("config", {}).get("port", 8000)
            from .service import serve_report

            serve_report(bundle, port=port, static_dir=args.static, host=args.host)
            return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PipelineStageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # unloadable bundles, service startup failures
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
