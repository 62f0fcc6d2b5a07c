"""
CSV formatter for spreadsheet inspection
"""

import csv
import io

from coarsedeg.cli.formatters.base import BaseFormatter
from coarsedeg.cli.report import Report


class CSVFormatter(BaseFormatter):
    """Format the flat report rows as CSV"""

    def format(self, report: Report, **kwargs) -> str:
        """
        Format rows as CSV

        Args:
            report: Report whose rows are written
            **kwargs: Options like 'delimiter', 'quote_all'

        Returns:
            CSV string
        """
        rows = report.rows
        if not rows:
            return ""

        # union of keys, in first-seen order
        columns: list[str] = []
        for row in rows:
            columns.extend(k for k in row if k not in columns)

        output = io.StringIO()
        writer = csv.DictWriter(
            output,
            fieldnames=columns,
            delimiter=kwargs.get("delimiter", ","),
            quoting=csv.QUOTE_MINIMAL if not kwargs.get("quote_all") else csv.QUOTE_ALL,
            lineterminator="\n",
        )

        writer.writeheader()
        writer.writerows(rows)

        return output.getvalue()
