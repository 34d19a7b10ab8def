"""Run-id correlation: every log record of one CLI invocation carries the same id."""
import logging
import uuid
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator

_run_id_ctx: ContextVar[str] = ContextVar("run_id", default="")


def get_run_id() -> str:
    return _run_id_ctx.get()


@contextmanager
def run_context(run_id: str | None = None) -> Iterator[str]:
    """Bind a run id (given or fresh) for the duration of the block."""
    run_id = run_id or uuid.uuid4().hex
    token = _run_id_ctx.set(run_id)
    try:
        yield run_id
    finally:
        _run_id_ctx.reset(token)


class RunIdFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        if not getattr(record, "run_id", None):
            record.run_id = get_run_id()
        return True
