"""CSV curve files and their JSON metadata sidecars."""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Union

from wasserstein_tradeoffs.config import Config

log = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_value(value: Any) -> str:
    """CSV field text: floats with 17 significant digits, None/NaN empty."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return format(value, f".{Config.FLOAT_DIGITS}g")
    if hasattr(value, "value"):  # Enum members
        return str(value.value)
    try:
        return format(float(value), f".{Config.FLOAT_DIGITS}g")
    except (TypeError, ValueError):
        return str(value)


def _sort_key(row: Mapping[str, Any]):
    def num(key: str) -> float:
        value = row.get(key)
        return -math.inf if value is None else float(value)

    return (num("eps"), num("lambda"), num("realization"), num("width"))


def sort_rows(rows: Iterable[Mapping[str, Any]]) -> List[Mapping[str, Any]]:
    """Rows ordered by (eps, lambda, realization, width); missing keys sort first."""
    return sorted(rows, key=_sort_key)


def write_csv(path: PathLike, rows: Iterable[Mapping[str, Any]],
              columns: Sequence[str] = Config.CSV_COLUMNS) -> Path:
    """Write curve rows with the fixed header.

    Unknown keys in a row are an error; missing ones are written empty.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ordered = sort_rows(rows)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        for row in ordered:
            extra = set(row) - set(columns)
            if extra:
                raise ValueError(f"row has unknown columns {sorted(extra)}")
            writer.writerow([format_value(row.get(col)) for col in columns])
    log.info(f"Wrote {len(ordered)} rows to {path}")
    return path


def read_csv(path: PathLike) -> List[Dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def sidecar_path(csv_path: PathLike) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.name + ".meta.json")


def write_sidecar(csv_path: PathLike, config: Dict[str, Any],
                  metadata: Optional[Dict[str, Any]] = None) -> Path:
    """Write ``<csv>.meta.json`` holding the resolved config and run metadata."""
    path = sidecar_path(csv_path)
    payload = {"config": config, "metadata": metadata or {}}
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True, allow_nan=False, default=str)
        f.write("\n")
    log.info(f"Wrote metadata sidecar {path}")
    return path
