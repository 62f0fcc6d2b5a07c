"""
Rich table formatter for terminal reading
"""

try:
    from rich import box
    from rich.console import Console
    from rich.table import Table

    RICH_AVAILABLE = True
except ImportError:
    RICH_AVAILABLE = False
    Console = None
    Table = None
    box = None

from coarsedeg.cli.formatters.base import BaseFormatter
from coarsedeg.cli.report import Report

STATUS_STYLES = {"PASS": "[green]PASS[/green]", "FAIL": "[bold red]FAIL[/bold red]"}


class TableFormatter(BaseFormatter):
    """Format report rows as a Rich table"""

    def format(self, report: Report, **kwargs) -> str:
        """
        Format rows as a Rich table

        Args:
            report: Report whose rows are shown
            **kwargs: Options like 'no_color', 'show_footer'

        Returns:
            Formatted table string
        """
        if not RICH_AVAILABLE:
            raise ImportError("Table formatter requires rich library. Install `coarsedeg[cli]`")

        rows = report.rows
        if not rows:
            return "No rows."

        no_color = kwargs.get("no_color", False)
        console = Console(force_terminal=not no_color, no_color=no_color, width=kwargs.get("width"))
        columns: list[str] = []
        for row in rows:
            columns.extend(k for k in row if k not in columns)

        table = Table(
            title=report.title or None,
            show_header=True,
            header_style="bold magenta",
            box=box.SIMPLE if len(columns) > 8 else box.HEAVY_HEAD,
        )
        for col in columns:
            table.add_column(col, style="cyan", overflow="fold")

        for row in rows:
            values = []
            for col in columns:
                val = row.get(col)
                if val is None:
                    values.append("[dim]-[/dim]")
                elif isinstance(val, str) and val in STATUS_STYLES:
                    values.append(STATUS_STYLES[val])
                else:
                    values.append(str(val))
            table.add_row(*values)

        with console.capture() as capture:
            console.print(table)
        output = capture.get()

        if kwargs.get("show_footer", True):
            count = len(rows)
            footer = f"[dim]{count} row{'s' if count != 1 else ''}[/dim]"
            if report.duration_s is not None:
                footer += f"[dim] in {report.duration_s:.3f}s[/dim]"
            with console.capture() as capture:
                console.print(footer)
            output += capture.get()

        return output
