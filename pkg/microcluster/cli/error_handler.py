"""Map exceptions raised by a command onto stderr messages and exit codes."""
import sys
import traceback
from typing import IO, Callable

from pydantic import ValidationError

from microcluster.cli.context import get_run_id
from microcluster.exceptions import ParameterError, SimulationError
from microcluster.logging_config import get_logger

logger = get_logger("microcluster.errors")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_SELFTEST = 3


def describe_validation(exc: ValidationError) -> ParameterError:
    """A pydantic validation failure as a parameter error naming each field."""
    problems = []
    for err in exc.errors():
        where = ".".join(str(part) for part in err.get("loc", ())) or "config"
        problems.append(f"{where}: {err.get('msg', 'invalid value')}")
    return ParameterError("invalid parameters: " + "; ".join(problems), details={"errors": problems})


def handle_errors(action: Callable[[], int], stderr: IO[str] | None = None) -> int:
    """Run ``action`` and return its exit code, converting failures.

    Tracebacks go to the log only, never to stdout.
    """
    stderr = stderr or sys.stderr
    try:
        return action()
    except ValidationError as exc:
        return _report(describe_validation(exc), stderr)
    except SimulationError as exc:
        return _report(exc, stderr)
    except OSError as exc:
        logger.warning(
            "Output error",
            extra={"run_id": get_run_id(), "error_code": "OUTPUT_ERROR", "detail": str(exc)},
        )
        print(f"error: {exc}", file=stderr)
        return EXIT_DOMAIN
    except Exception as exc:
        logger.error(
            "Unhandled exception",
            extra={
                "run_id": get_run_id(),
                "exc_type": type(exc).__name__,
                "traceback": traceback.format_exc(),
            },
        )
        print("error: an unexpected error occurred", file=stderr)
        return EXIT_DOMAIN


def _report(exc: SimulationError, stderr: IO[str]) -> int:
    logger.warning(
        "Simulation error",
        extra={
            "run_id": get_run_id(),
            "error_code": exc.error_code,
            "exit_code": exc.exit_code,
            "detail": exc.message,
        },
    )
    print(f"error: {exc.message}", file=stderr)
    return exc.exit_code
