"""Command line interface, state files and report rendering."""

from .main import cli, main
from .statefile import load_state, parse_state, write_state

__all__ = ["cli", "main", "load_state", "parse_state", "write_state"]
