"""Command-line surface."""

from cgnn.cli.main import build_parser, main

__all__ = ["build_parser", "main"]
