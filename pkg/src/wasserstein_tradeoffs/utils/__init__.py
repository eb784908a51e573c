"""Logging, provenance and output helpers."""

from .output import format_value, read_csv, sidecar_path, write_csv, write_sidecar

__all__ = [
    "format_value",
    "read_csv",
    "sidecar_path",
    "write_csv",
    "write_sidecar",
]
