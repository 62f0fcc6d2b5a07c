"""
Output formatters for CLI

Available formatters:
- JSONFormatter: Canonical JSON report envelope
- CSVFormatter: One row per test point / radius / check
- TableFormatter: Rich tables for terminal reading
"""

from coarsedeg.cli.formatters.base import BaseFormatter
from coarsedeg.cli.formatters.csv import CSVFormatter
from coarsedeg.cli.formatters.json import JSONFormatter
from coarsedeg.cli.formatters.table import TableFormatter

__all__ = ["BaseFormatter", "TableFormatter", "JSONFormatter", "CSVFormatter", "get_formatter"]


def get_formatter(format_name: str) -> BaseFormatter:
    """
    Get formatter by name

    Args:
        format_name: Name of formatter (json, csv, table)

    Returns:
        Formatter instance

    Raises:
        ValueError: If formatter not found
    """
    formatters = {
        "json": JSONFormatter,
        "csv": CSVFormatter,
        "table": TableFormatter,
    }

    if format_name not in formatters:
        available = ", ".join(formatters.keys())
        raise ValueError(f"Unknown format: {format_name}. Available formats: {available}")

    return formatters[format_name]()
