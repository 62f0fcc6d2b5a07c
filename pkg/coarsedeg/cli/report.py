"""
Report envelopes

Every command produces a Report: the JSON envelope
{"meta": {...}, "result": {...}} plus a flat list of rows for the CSV and
table formatters.
"""

import time
from dataclasses import dataclass, field
from typing import Any

from coarsedeg import __version__
from coarsedeg.cli.config import RunConfig


@dataclass
class Report:
    """
    Output of one command

    Attributes:
        config: Resolved configuration
        result: Command-specific JSON-ready result
        rows: Flattened rows (one per test point, radius, check...)
        title: Table title
        duration_s: Wall-clock seconds, None for reproducible output
    """

    config: RunConfig
    result: dict[str, Any]
    rows: list[dict[str, Any]] = field(default_factory=list)
    title: str = ""
    duration_s: float | None = None

    def envelope(self) -> dict[str, Any]:
        return {
            "meta": {
                "version": __version__,
                "command": self.config.command,
                "config": self.config.to_dict(),
                "seed": self.config.seed,
                "duration_s": self.duration_s,
            },
            "result": self.result,
        }


class Stopwatch:
    """Wall-clock timer that reports nothing in reproducible mode"""

    def __init__(self, reproducible: bool = False):
        self.reproducible = reproducible
        self.start = time.perf_counter()

    def elapsed(self) -> float | None:
        if self.reproducible:
            return None
        return round(time.perf_counter() - self.start, 6)


def format_point(p) -> str:
    """Compact text form of a point for CSV/table cells"""
    return " ".join(repr(float(c)) for c in p)
