"""
JSON formatter, the canonical report format

Keys are sorted and NaN/infinity become null, so identical reports are
byte-identical.
"""

import json
import math
from typing import Any

from coarsedeg.cli.formatters.base import BaseFormatter
from coarsedeg.cli.report import Report


def clean_value(val: Any) -> Any:
    """Recursively replace non-finite floats by None and tuples by lists"""
    if isinstance(val, float):
        if math.isnan(val) or math.isinf(val):
            return None
        return val
    if isinstance(val, dict):
        return {str(k): clean_value(v) for k, v in val.items()}
    if isinstance(val, (list, tuple)):
        return [clean_value(v) for v in val]
    return val


class JSONFormatter(BaseFormatter):
    """Format the report envelope as JSON"""

    def format(self, report: Report, **kwargs) -> str:
        """
        Format report as JSON

        Args:
            report: Report to render
            **kwargs: Options like 'compact', 'indent'

        Returns:
            JSON string
        """
        cleaned = clean_value(report.envelope())

        if kwargs.get("compact", False):
            return json.dumps(cleaned, separators=(",", ":"), sort_keys=True, allow_nan=False)
        indent = kwargs.get("indent", 2)
        return json.dumps(cleaned, indent=indent, sort_keys=True, allow_nan=False)
