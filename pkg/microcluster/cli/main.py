"""Command-line entry point."""
from __future__ import annotations

import argparse
import sys
import time
from contextlib import redirect_stderr, redirect_stdout
from typing import IO, Sequence

from microcluster import __version__
from microcluster.cli.commands import COMMANDS, CommandResult
from microcluster.cli.context import RunIdFilter, get_run_id, run_context
from microcluster.cli.error_handler import EXIT_OK, EXIT_USAGE, handle_errors
from microcluster.cli.output import emit_csv, emit_json, open_output
from microcluster.config import settings
from microcluster.exceptions import UsageError
from microcluster.logging_config import get_logger, setup_logging
from microcluster.optics.noise import ErrorPlacement
from microcluster.protocols.closed_forms import SELECTORS
from microcluster.schemas import RunConfig

logger = get_logger("microcluster.cli")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="write output to PATH instead of stdout")
    parser.add_argument("--format", choices=("text", "csv", "json"), default=None)
    parser.add_argument("--log-level", default=None, help="log level for stderr JSON logs")


def _noise(parser: argparse.ArgumentParser, backend: bool = True) -> None:
    if backend:
        parser.add_argument("--backend", choices=("exact", "float"), default="exact")
    parser.add_argument("--alpha", type=float, default=None)
    parser.add_argument("--p", type=float, default=None, help="p_x = p_y = p_z = P")
    parser.add_argument("--px", type=float, default=None)
    parser.add_argument("--py", type=float, default=None)
    parser.add_argument("--pz", type=float, default=None)


def _policy(parser: argparse.ArgumentParser) -> None:
    names = ", ".join(p.value for p in ErrorPlacement)
    parser.add_argument("--policy", default="survivor_only", help=f"one of {names}")
    parser.add_argument("--noisy-failures", action="store_true")
    parser.add_argument("--strategy", choices=("split", "joint"), default="split")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="microcluster",
        description="Fidelity of photonic microclusters built and bonded by Type-1 fusion.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="microcluster fidelity per number of leaves")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--leaves", type=int)
    group.add_argument("--max-leaves", type=int)
    _noise(p)
    _policy(p)
    p.add_argument("--compare", action="store_true")
    _common(p)

    p = sub.add_parser("table2", help="square array of binomial transforms")
    p.add_argument("--rows", type=int, default=5)
    p.add_argument("--cols", type=int, default=5)
    p.add_argument("--compare", action="store_true")
    _common(p)

    p = sub.add_parser("table3", help="attempt-conditioned pair-fusion coefficients")
    p.add_argument("--leaves", type=int)
    p.add_argument("--attempt", type=int)
    _policy(p)
    p.add_argument("--compare", action="store_true")
    _common(p)

    p = sub.add_parser("formulas", help="closed-form reference formulas")
    p.add_argument("--selector", required=True, choices=SELECTORS)
    p.add_argument("--leaves", type=int)
    p.add_argument("--backend", choices=("exact", "float"), default="float")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--p", type=float, default=None)
    _common(p)

    p = sub.add_parser("pairfuse", help="bond two microclusters at a given attempt")
    p.add_argument("--leaves", type=int, required=True)
    p.add_argument("--attempt", type=int, required=True)
    _noise(p)
    _policy(p)
    _common(p)

    p = sub.add_parser("sweep", help="float fidelity sweep over p")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--p-grid", default=None, help="start:stop:steps, inclusive")
    p.add_argument("--leaves", dest="leaves_set", type=_int_list, default=(2, 3, 4, 5))
    p.add_argument("--attempts", type=_int_list, default=(1, 2, 3, 4))
    _policy(p)
    _common(p)

    p = sub.add_parser("policy-search", help="score error placements against the attempt table")
    p.add_argument("--leaves-max", dest="max_leaves", type=int, default=4)
    _common(p)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--quick", action="store_true")
    _common(p)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if v is not None and k != "log_level"}
    if values.get("format") is None:
        values["format"] = "csv" if args.command == "sweep" else "text"
    return RunConfig(**values)


def _write(result: CommandResult, cfg: RunConfig, stdout: IO[str]) -> None:
    with open_output(cfg.out, stdout) as out:
        if cfg.format == "json":
            emit_json(result.payload, out)
        elif cfg.format == "csv" and result.records is not None:
            emit_csv(result.records, out)
        elif cfg.format == "csv":
            if result.csv_header is None:
                raise UsageError(f"csv output is not available for {cfg.command}")
            out.write(",".join(result.csv_header) + "\n")
            for row in result.csv_rows:
                out.write(",".join(row) + "\n")
        else:
            out.write(result.text + "\n")


def dispatch(argv: Sequence[str] | None = None, stdout: IO[str] | None = None, stderr: IO[str] | None = None) -> int:
    """Parse ``argv``, run the command and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        # usage, --help and --version text go to the caller's streams
        with redirect_stdout(stdout), redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    setup_logging(args.log_level or settings.log_level, stream=stderr, filters=[RunIdFilter()])
    with run_context():

        def action() -> int:
            cfg = _config(args)
            started = time.perf_counter()
            logger.info("Command started", extra={"command": cfg.command, "run_id": get_run_id()})
            result = COMMANDS[cfg.command](cfg)
            _write(result, cfg, stdout)
            logger.info(
                "Command finished",
                extra={
                    "command": cfg.command,
                    "run_id": get_run_id(),
                    "exit_code": result.exit_code,
                    "duration_ms": round((time.perf_counter() - started) * 1000, 2),
                },
            )
            return result.exit_code

        return handle_errors(action, stderr)


def run() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    run()
