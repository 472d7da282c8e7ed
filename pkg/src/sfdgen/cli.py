"""Command line front end.

``generate`` runs the pipeline on a model file and writes the SVG and
layout artifacts; by default it calls the package in-process, or routes
the identical request through a running service with ``--server``.
``serve`` starts the HTTP service.

Exit codes: 0 success, 2 validation failure, 3 pipeline error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .pipeline import PipelineError, RunConfig, ValidationFailure, run_pipeline

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PIPELINE = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfdgen",
        description="Generate laid-out stock-flow / causal-loop diagrams "
                    "from equation-only models.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="run the pipeline on a model file")
    gen.add_argument("--input", required=True, help="model file path")
    gen.add_argument("--format", choices=["model-json", "edge-list"],
                     default="model-json")
    gen.add_argument("--cluster", choices=["cnm", "gn", "none"], default="cnm")
    gen.add_argument("--threshold", type=int, default=75,
                     help="node count that triggers clustering (default 75)")
    gen.add_argument("--overlap", choices=["vpsc", "voronoi", "none"],
                     default="vpsc")
    gen.add_argument("--seed", type=int, default=42)
    gen.add_argument("--hints", default=None,
                     help="optional module hint file (label: id, id, ...)")
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--server", default=None,
                     help="base URL of a running sfdgen service to use "
                          "instead of running in-process")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _generate_local(args: argparse.Namespace) -> int:
    cfg = RunConfig(
        input_path=args.input, out_dir=args.out, format=args.format,
        cluster=args.cluster, threshold=args.threshold, overlap=args.overlap,
        seed=args.seed, hints_path=args.hints)
    try:
        report = run_pipeline(cfg)
    except ValidationFailure as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except PipelineError as exc:
        print(f"pipeline error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    sys.stdout.write(report.to_text())
    return EXIT_OK


def _generate_remote(args: argparse.Namespace) -> int:
    import httpx

    try:
        source = Path(args.input).read_text()
    except OSError as exc:
        print(f"pipeline error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    hints = None
    if args.hints:
        try:
            hints = Path(args.hints).read_text()
        except OSError as exc:
            print(f"pipeline error: cannot read hints: {exc}", file=sys.stderr)
            return EXIT_PIPELINE
    payload = {
        "source": source, "format": args.format, "cluster": args.cluster,
        "threshold": args.threshold, "overlap": args.overlap,
        "seed": args.seed, "hints": hints,
    }
    try:
        resp = httpx.post(f"{args.server.rstrip('/')}/generate",
                          json=payload, timeout=120.0)
    except httpx.HTTPError as exc:
        print(f"pipeline error: service unreachable: {exc}", file=sys.stderr)
        return EXIT_PIPELINE
    if resp.status_code == 400:
        print(f"validation failure: {resp.json().get('detail')}", file=sys.stderr)
        return EXIT_VALIDATION
    if resp.status_code != 200:
        print(f"pipeline error: service returned {resp.status_code}: "
              f"{resp.text[:500]}", file=sys.stderr)
        return EXIT_PIPELINE
    body = resp.json()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for d in body["diagrams"]:
        (out / d["filename"]).write_text(d["svg"])
    (out / body["layout_filename"]).write_text(body["layout"])
    sys.stdout.write(body["report_text"])
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "generate":
        if args.server:
            return _generate_remote(args)
        return _generate_local(args)
    if args.command == "serve":
        import uvicorn

        from .service import app
        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK
    return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
