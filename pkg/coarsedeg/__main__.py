"""
coarsedeg - Main entry point for CLI

When running as: python -m coarsedeg
"""

if __name__ == "__main__":
    from coarsedeg.cli.main import cli

    cli()
