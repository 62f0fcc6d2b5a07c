"""
coarsedeg CLI

Command-line interface for coarse degrees, homotopy checks and fixed point witnesses.
"""

from coarsedeg.cli.main import cli

__all__ = ["cli"]
