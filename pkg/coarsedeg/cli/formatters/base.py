"""
Base formatter interface for CLI output

All formatters must implement the format() method.
"""

from coarsedeg.cli.report import Report


class BaseFormatter:
    """Base class for all output formatters"""

    def format(self, report: Report, **kwargs) -> str:
        """
        Format a report for output

        Args:
            report: Report with its envelope and flat rows
            **kwargs: Additional formatter-specific options

        Returns:
            Formatted string ready for output
        """
        raise NotImplementedError("Formatters must implement format() method")

    def get_name(self) -> str:
        """Get formatter name"""
        return self.__class__.__name__.replace("Formatter", "").lower()
