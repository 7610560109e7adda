"""Batch CLI: a thin client over the runner layer (or a remote service).

Exit codes: 0 success, 2 config/validation error, 3 I/O failure, 4 internal
invariant violation.  Outputs are written atomically and are byte-identical
across runs with the same config and seed.
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from .config import FringeConfig, NoiseConfig, OptimizeConfig, PrepareConfig
from .errors import GravchanError, InternalInvariantError
from .runners import run_fringe, run_noise, run_optimize, run_prepare
from .util import atomic_write_text

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INTERNAL = 4

_COMMANDS = {
    "fringe": (FringeConfig, run_fringe, "fringe.csv", "fringe_summary.json"),
    "noise": (NoiseConfig, run_noise, "noise.csv", "noise_summary.json"),
    "optimize": (OptimizeConfig, run_optimize, None, "optimize_summary.json"),
    "prepare": (PrepareConfig, run_prepare, None, "prepare_summary.json"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gravchan",
        description="Quantum-channel gravimetry simulator (batch runs from a JSON config).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("fringe", "scan the interference fringe: direct vs through-channel readout"),
        ("noise", "closed-form and Monte Carlo shot/phase noise comparison"),
        ("optimize", "channel-amplitude optima (entropy and noise ratio)"),
        ("prepare", "build a channel state and verify it against its target"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="path to the JSON run config")
        if name in ("fringe", "noise"):
            cmd.add_argument("--out", help="CSV output path (overrides config)")
        cmd.add_argument("--summary-out", help="JSON summary path (overrides config)")
        if name == "noise":
            cmd.add_argument("--seed", type=int, help="RNG seed (overrides config)")
        cmd.add_argument(
            "--server",
            help="base URL of a running gravchan service; compute there instead of in-process",
        )

    serve = sub.add_parser("serve", help="run the REST service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            return _serve(args)
        return _run_command(args)
    except ValidationError as exc:
        print(f"gravchan: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GravchanError, ValueError) as exc:
        if isinstance(exc, InternalInvariantError):
            print(f"gravchan: internal error: {exc}", file=sys.stderr)
            return EXIT_INTERNAL
        print(f"gravchan: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"gravchan: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # bug sentinel
        print(f"gravchan: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def _run_command(args: argparse.Namespace) -> int:
    model, runner, default_csv, default_summary = _COMMANDS[args.command]

    with open(args.config, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, dict):
        raise ValueError("config must be a JSON object")
    if getattr(args, "seed", None) is not None:
        raw["seed"] = args.seed
    config = model.model_validate(raw)

    if args.server:
        csv_text, summary = _remote_run(args.server, args.command, config)
    else:
        result = runner(config)
        csv_text, summary = result if isinstance(result, tuple) else (None, result)

    if default_csv is not None and csv_text is not None:
        csv_path = getattr(args, "out", None) or config.out or default_csv
        atomic_write_text(csv_path, csv_text)
        print(f"wrote {csv_path}")
    summary_path = args.summary_out or config.summary_out or default_summary
    atomic_write_text(summary_path, json.dumps(summary, indent=2) + "\n")
    print(f"wrote {summary_path}")
    return EXIT_OK


def _remote_run(server: str, command: str, config) -> tuple[str | None, dict]:
    import httpx

    url = server.rstrip("/") + "/" + command
    try:
        response = httpx.post(url, json=config.model_dump(mode="json"), timeout=600.0)
    except httpx.HTTPError as exc:
        raise OSError(f"service request failed: {exc}") from exc
    if response.status_code == 422:
        raise ValueError(f"service rejected config: {response.text}")
    if response.status_code != 200:
        raise InternalInvariantError(
            f"service returned {response.status_code}: {response.text}"
        )
    body = response.json()
    return body.get("csv"), body["summary"]


def _serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("gravchan.service:app", host=args.host, port=args.port)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
