"""Command-line interface: ``python3 -m emaweyl <command> ...``."""

from .main import build_parser, main, run

__all__ = ["build_parser", "main", "run"]
