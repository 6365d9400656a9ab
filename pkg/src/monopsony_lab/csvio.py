"""CSV reading and writing with exact float round-trips."""

from __future__ import annotations

import csv
import enum
import math
import os
from typing import Iterable, List, Sequence

from .exceptions import ModelDomainError
from .metareg import StudyEstimate


def format_value(value) -> str:
    """Shortest text that parses back to the same value.

    Floats use ``repr`` (shortest round-trip) with a trailing ``.0`` dropped,
    so ``1.0`` is written ``1``.
    """
    if value is None:
        return ""
    if isinstance(value, enum.Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float) or hasattr(value, "dtype"):
        x = float(value)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        text = repr(x)
        return text[:-2] if text.endswith(".0") else text
    return str(value)


def write_csv(header: Sequence[str], rows: Iterable[Sequence], path) -> None:
    """UTF-8, LF line endings, header first."""
    header = list(header)
    lines = [",".join(header)]
    for row in rows:
        row = list(row)
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} fields, header has {len(header)}")
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path) -> tuple:
    """Return ``(header, rows)`` with every field left as text."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            return [], []
        return header, [row for row in reader if row]


def read_studies(path) -> List[StudyEstimate]:
    header, rows = read_csv(path)
    if [h.strip() for h in header] != ["effect", "se"]:
        raise ModelDomainError(f"{os.fspath(path)}: expected header 'effect,se', got {','.join(header)!r}")
    studies = []
    for lineno, row in enumerate(rows, start=2):
        if len(row) != 2:
            raise ModelDomainError(f"{os.fspath(path)}:{lineno}: expected 2 fields, got {len(row)}")
        try:
            studies.append(StudyEstimate(float(row[0]), float(row[1])))
        except ValueError as exc:
            raise ModelDomainError(f"{os.fspath(path)}:{lineno}: {exc}") from exc
    return studies
