"""CLI commands for the wdro-tradeoffs tool."""

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3

__all__ = ['main', 'run', 'verify', 'history']
