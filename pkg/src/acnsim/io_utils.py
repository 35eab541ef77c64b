"""Small file-output helpers shared by the library and the CLI.

All writers are atomic (temp file in the target directory, then rename)
so a crashed run never leaves a half-written report behind, and the
formatting is deterministic: the same inputs produce the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence


def atomic_write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path


def atomic_write_bytes(path: str | Path, blob: bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path


def write_csv(path: str | Path, header: Sequence[str],
              rows: Iterable[Sequence[Any]]) -> Path:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(list(row))
    return atomic_write_text(path, buf.getvalue())


def write_json(path: str | Path, payload: Mapping[str, Any]) -> Path:
    text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    return atomic_write_text(path, text)


def format_quantity(value: float, decimals: int = 1) -> str:
    """Fixed-point rendering used in reports; avoids '-0.0'."""
    out = f"{value:.{decimals}f}"
    if float(out) == 0.0:
        out = f"{0.0:.{decimals}f}"
    return out
