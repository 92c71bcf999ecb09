"""Command-line interface, file formats and the golden corpus runner."""

from .main import ENV_PREFIX, build_parser, emit_graph, main, run

__all__ = ["ENV_PREFIX", "build_parser", "emit_graph", "main", "run"]
