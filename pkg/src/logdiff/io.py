"""CSV reading and atomic file output."""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def read_series(path: str | os.PathLike, column: int | None = None) -> np.ndarray:
    """Read one numeric column from a comma-separated file.

    A single header row is recognised by a non-numeric first token. With more
    than one column, the last column is taken unless ``column`` is given.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc
    rows = [(i + 1, r) for i, r in enumerate(csv.reader(io.StringIO(text))) if any(c.strip() for c in r)]
    if not rows:
        raise DataError(f"{path}: no data")
    if not _is_number(rows[0][1][0].strip()):
        rows = rows[1:]
    values = []
    for lineno, row in rows:
        idx = (len(row) - 1) if column is None else column
        try:
            token = row[idx].strip()
        except IndexError:
            raise DataError(f"{path}, line {lineno}: missing column {idx}") from None
        try:
            v = float(token)
        except ValueError:
            raise DataError(f"{path}, line {lineno}: not a number: {token!r}") from None
        if not np.isfinite(v):
            raise DataError(f"{path}, line {lineno}: non-finite value {token!r}")
        values.append(v)
    if not values:
        raise DataError(f"{path}: no data rows")
    return np.array(values)


def format_float(x: float) -> str:
    return repr(float(x))


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
