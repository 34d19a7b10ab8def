"""Tests for JSON logging, run-id correlation, error mapping and settings."""
import io
import json
import logging
import sys
from fractions import Fraction

import pytest
from pydantic import ValidationError

from microcluster.cli.context import RunIdFilter, get_run_id, run_context
from microcluster.cli.error_handler import EXIT_DOMAIN, EXIT_USAGE, describe_validation, handle_errors
from microcluster.config import Settings
from microcluster.exceptions import AttemptExceedsLeaves, ParameterError, UsageError
from microcluster.logging_config import JsonFormatter, setup_logging
from microcluster.schemas import RunConfig


def _record(msg="hello world", level=logging.INFO, exc_info=None):
    return logging.LogRecord(
        name="test",
        level=level,
        pathname="",
        lineno=0,
        msg=msg,
        args=(),
        exc_info=exc_info,
    )


# ---------------------------------------------------------------------------
# JSON formatter
# ---------------------------------------------------------------------------

class TestJsonFormatter:
    def test_formatter_produces_valid_json(self):
        parsed = json.loads(JsonFormatter().format(_record()))
        assert parsed["level"] == "INFO"
        assert parsed["message"] == "hello world"
        assert "timestamp" in parsed

    def test_formatter_includes_extra_fields(self):
        record = _record("with extra")
        record.leaves = 4
        parsed = json.loads(JsonFormatter().format(record))
        assert parsed.get("leaves") == 4

    def test_non_json_values_render_as_text(self):
        record = _record()
        record.alpha = Fraction(1, 100)
        parsed = json.loads(JsonFormatter().format(record))
        assert parsed["alpha"] == "1/100"

    def test_formatter_exc_info(self):
        try:
            raise ValueError("boom")
        except ValueError:
            exc_info = sys.exc_info()
        parsed = json.loads(JsonFormatter().format(_record("error occurred", logging.ERROR, exc_info)))
        assert "ValueError" in parsed["exc_info"]

    def test_setup_logging_writes_to_the_given_stream(self):
        stream = io.StringIO()
        setup_logging("INFO", stream=stream)
        logging.getLogger("microcluster.test").info("Check finished", extra={"check": "demo"})
        line = json.loads(stream.getvalue().splitlines()[-1])
        assert line["check"] == "demo"
        setup_logging("WARNING")


# ---------------------------------------------------------------------------
# Run-id correlation
# ---------------------------------------------------------------------------

class TestRunContext:
    def test_run_id_outside_a_run_is_empty(self):
        assert get_run_id() == ""

    def test_run_id_is_bound_and_reset(self):
        with run_context("abc") as run_id:
            assert run_id == "abc"
            assert get_run_id() == "abc"
        assert get_run_id() == ""

    def test_fresh_ids_are_unique(self):
        ids = set()
        for _ in range(5):
            with run_context() as run_id:
                ids.add(run_id)
        assert len(ids) == 5

    def test_filter_stamps_records(self):
        record = _record()
        with run_context("xyz"):
            RunIdFilter().filter(record)
        assert record.run_id == "xyz"


# ---------------------------------------------------------------------------
# Error mapping
# ---------------------------------------------------------------------------

class TestHandleErrors:
    def test_success_passes_the_exit_code_through(self):
        assert handle_errors(lambda: 3, io.StringIO()) == 3

    def test_usage_error(self):
        def action():
            raise UsageError("bad flag")

        err = io.StringIO()
        assert handle_errors(action, err) == EXIT_USAGE
        assert err.getvalue().strip() == "error: bad flag"

    def test_domain_error(self):
        def action():
            raise AttemptExceedsLeaves("attempt exceeds leaves")

        assert handle_errors(action, io.StringIO()) == EXIT_DOMAIN

    def test_unexpected_error_hides_the_traceback(self):
        def action():
            raise RuntimeError("internal detail")

        err = io.StringIO()
        assert handle_errors(action, err) == EXIT_DOMAIN
        assert "Traceback" not in err.getvalue()
        assert "internal detail" not in err.getvalue()

    def test_validation_error_names_the_field(self):
        with pytest.raises(ValidationError) as info:
            RunConfig(command="pairfuse", alpha=0.9)
        converted = describe_validation(info.value)
        assert isinstance(converted, ParameterError)
        assert "alpha" in converted.message


# ---------------------------------------------------------------------------
# Settings
# ---------------------------------------------------------------------------

class TestSettings:
    def test_defaults(self):
        settings = Settings()
        assert settings.workers >= 1
        assert settings.default_p_grid == "0:0.05:11"

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("MICROCLUSTER_WORKERS", "3")
        assert Settings().workers == 3

    def test_invalid_environment_value(self, monkeypatch):
        monkeypatch.setenv("MICROCLUSTER_DEFAULT_ALPHA", "0.9")
        with pytest.raises(ValidationError):
            Settings()
