"""Trace CSV files.

    # format_version: 1; dt: 0.006; t0: 0.0
    t(s),psec(m),sp(m),...
    0,0,0
    0.006,1.66666666667e-05,...

Values are written with 12 significant digits. Row numbers in errors are
1-based file lines.
"""

import csv
import re
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict

from feeddrive.core.errors import TraceFormatError
from feeddrive.core.trace import CHANNEL_REGISTRY, Trace


TRACE_FORMAT_VERSION = 1
TIME_TOLERANCE = 1e-9
VALUE_FORMAT = "%.12g"

_COLUMN = re.compile(r"^\s*([^()]+?)\s*\(([^()]*)\)\s*$")


class Table(BaseModel):
    """Generic time-indexed columns, possibly non-uniform."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: np.ndarray
    columns: dict[str, np.ndarray]
    units: dict[str, str]
    meta: dict[str, str] = {}


def _parse_meta(line: str) -> dict[str, str]:
    meta = {}
    for item in line.lstrip("#").split(";"):
        if ":" in item:
            key, value = item.split(":", 1)
            meta[key.strip()] = value.strip()
    return meta


def _parse_header(row: list[str]) -> list[tuple[str, str]]:
    cols = []
    for cell in row:
        m = _COLUMN.match(cell)
        if not m:
            raise TraceFormatError(f"column '{cell}' is not of the form name(unit)", line=2)
        cols.append((m.group(1), m.group(2)))
    if not cols or cols[0] != ("t", "s"):
        raise TraceFormatError("first column must be t(s)", line=2)
    return cols


def read_table(path: str | Path) -> Table:
    """Read a CSV whose first column is t(s) and whose times strictly increase."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as f:
        lines = f.read().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise TraceFormatError("missing '# format_version' line", line=1)
    meta = _parse_meta(lines[0])
    if meta.get("format_version") != str(TRACE_FORMAT_VERSION):
        raise TraceFormatError(f"unsupported format_version {meta.get('format_version')!r}", line=1)

    reader = csv.reader(lines[1:])
    try:
        header = next(reader)
    except StopIteration:
        raise TraceFormatError("missing header row", line=2) from None
    cols = _parse_header(header)

    rows: list[list[float]] = []
    for lineno, row in enumerate(reader, start=3):
        if not row:
            continue
        if len(row) != len(cols):
            raise TraceFormatError(f"expected {len(cols)} values, got {len(row)}", line=lineno)
        try:
            values = [float(x) for x in row]
        except ValueError as e:
            raise TraceFormatError(f"non-numeric value ({e})", line=lineno) from None
        if rows and not values[0] > rows[-1][0]:
            raise TraceFormatError(f"time column is not strictly increasing at t={values[0]}", line=lineno)
        rows.append(values)
    if not rows:
        raise TraceFormatError("no samples", line=3)

    data = np.array(rows)
    return Table(
        times=data[:, 0],
        columns={name: data[:, k] for k, (name, _) in enumerate(cols) if k > 0},
        units={name: unit for name, unit in cols[1:]},
        meta=meta,
    )


def read_trace(path: str | Path, expected_units: dict[str, str] | None = None) -> Trace:
    """Read a uniformly sampled trace; channel names must be registered."""
    table = read_table(path)
    t = table.times
    dt = float(table.meta["dt"]) if "dt" in table.meta else (float(t[1] - t[0]) if len(t) > 1 else 1.0)
    t0 = float(table.meta.get("t0", t[0]))
    expected = t0 + dt * np.arange(len(t))
    bad = np.nonzero(np.abs(t - expected) > TIME_TOLERANCE)[0]
    if len(bad):
        raise TraceFormatError(f"non-uniform sampling: t={t[bad[0]]} but expected {expected[bad[0]]:.12g}", line=int(bad[0]) + 3)

    unknown = [name for name in table.columns if name not in CHANNEL_REGISTRY]
    if unknown:
        raise TraceFormatError(f"unknown channel(s): {', '.join(unknown)}", line=2)
    for name, unit in (expected_units or {}).items():
        if name in table.units and table.units[name] != unit:
            raise TraceFormatError(f"channel '{name}' has unit '{table.units[name]}', expected '{unit}'", line=2)
    return Trace(dt=dt, t0=t0, channels=table.columns, units=table.units)


def write_table(path: str | Path, times: np.ndarray, columns: dict[str, np.ndarray], units: dict[str, str], meta: dict[str, str] | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    head = {"format_version": str(TRACE_FORMAT_VERSION)}
    head.update(meta or {})
    names = list(columns)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write("# " + "; ".join(f"{k}: {v}" for k, v in head.items()) + "\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["t(s)"] + [f"{n}({units.get(n, '')})" for n in names])
        stacked = np.column_stack([times] + [columns[n] for n in names])
        for row in stacked:
            writer.writerow([VALUE_FORMAT % x for x in row])
    return path


def write_trace(trace: Trace, path: str | Path) -> Path:
    return write_table(path, trace.times, trace.channels, trace.units, meta={"dt": repr(trace.dt), "t0": repr(trace.t0)})
