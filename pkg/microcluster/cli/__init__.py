"""Command-line front end."""
from microcluster.cli.main import build_parser, dispatch, run

__all__ = ["build_parser", "dispatch", "run"]
