"""Reading and writing count files and bit files.

plain_csv
    ``#`` header lines holding comma-separated ``key=value`` pairs
    (``preset_time_s`` and ``source`` required; ``distance_cm`` and
    ``voltage`` optional), then one non-negative integer per line.

st360_export
    Delimited table as saved by the counter software: optional ``#``
    ``key=value`` lines, a header row naming the columns, one row per run.
    A ``Counts`` column is required; ``Preset Time`` and ``High Voltage``
    columns, when present, supply the matching metadata.
"""

from __future__ import annotations

import csv
import io
import re
from pathlib import Path

from ..bitcore import BitSequence, CountSeries
from ..errors import DataError

FORMATS = ("plain_csv", "st360_export")
_INT_RE = re.compile(r"^[+-]?\d+$")


def _parse_header_line(line: str, lineno: int, meta: dict):
    body = line.lstrip("#").strip()
    if not body:
        return
    for part in body.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            # free-text comment
            return
        key, value = (s.strip() for s in part.split("=", 1))
        meta[key] = (value, lineno)


def _parse_count(token: str, lineno: int) -> int:
    token = token.strip()
    if not _INT_RE.match(token):
        raise DataError(f"line {lineno}: count {token!r} is not an integer")
    value = int(token)
    if value < 0:
        raise DataError(f"line {lineno}: count {value} is negative")
    return value


def _float_field(meta: dict, key: str, required: bool):
    if key not in meta:
        if required:
            raise DataError(f"missing header field {key!r}")
        return None
    value, lineno = meta[key]
    try:
        return float(value)
    except ValueError:
        raise DataError(f"line {lineno}: header field {key}={value!r} is not a number") from None


def _series_from(counts, meta, preset=None, voltage=None) -> CountSeries:
    if not counts:
        raise DataError("no counts")
    if preset is None:
        preset = _float_field(meta, "preset_time_s", required=True)
    if "source" not in meta:
        raise DataError("missing header field 'source'")
    if voltage is None:
        voltage = _float_field(meta, "voltage", required=False)
    distance = _float_field(meta, "distance_cm", required=False)
    try:
        return CountSeries(
            counts=tuple(counts),
            preset_time_s=preset,
            source_label=meta["source"][0],
            distance_cm=distance,
            applied_voltage_V=voltage,
        )
    except ValueError as exc:
        raise DataError(str(exc)) from None


def parse_plain_csv(text: str) -> CountSeries:
    meta: dict = {}
    counts = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            _parse_header_line(stripped, lineno, meta)
            continue
        counts.append(_parse_count(stripped, lineno))
    return _series_from(counts, meta)


def _find_column(header: list[str], *names: str):
    norm = [h.strip().lower() for h in header]
    for name in names:
        if name in norm:
            return norm.index(name)
    return None


def parse_st360_export(text: str) -> CountSeries:
    meta: dict = {}
    lines = text.splitlines()
    body_start = 0
    for lineno, line in enumerate(lines, start=1):
        if line.strip().startswith("#") or not line.strip():
            _parse_header_line(line.strip(), lineno, meta)
            continue
        body_start = lineno
        break
    else:
        raise DataError("no counts")
    header_line = lines[body_start - 1]
    delimiter = "\t" if "\t" in header_line else ","
    rows = list(csv.reader(io.StringIO("\n".join(lines[body_start - 1 :])), delimiter=delimiter))
    header = rows[0]
    c_col = _find_column(header, "counts", "count")
    if c_col is None:
        raise DataError(f"line {body_start}: no 'Counts' column in header {header!r}")
    t_col = _find_column(header, "preset time", "preset_time_s", "time")
    v_col = _find_column(header, "high voltage", "voltage")
    counts, presets, volts = [], set(), set()
    for offset, row in enumerate(rows[1:], start=1):
        lineno = body_start + offset
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) <= c_col:
            raise DataError(f"line {lineno}: missing counts column")
        counts.append(_parse_count(row[c_col], lineno))
        for col, seen in ((t_col, presets), (v_col, volts)):
            if col is not None and col < len(row) and row[col].strip():
                try:
                    seen.add(float(row[col]))
                except ValueError:
                    raise DataError(f"line {lineno}: {row[col]!r} is not a number") from None
    for label, seen in (("preset time", presets), ("voltage", volts)):
        if len(seen) > 1:
            raise DataError(f"{label} varies between runs: {sorted(seen)}")
    preset = presets.pop() if presets else None
    voltage = volts.pop() if volts else None
    return _series_from(counts, meta, preset=preset, voltage=voltage)


def ingest_counts(path, format: str = "plain_csv") -> CountSeries:
    """Load a count file into a :class:`CountSeries`.

    Raises
    ------
    DataError
        On malformed rows (the message names the line), negative or
        non-integer counts, missing header fields or an empty data section.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    if format == "plain_csv":
        return parse_plain_csv(text)
    return parse_st360_export(text)


def _fmt_number(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def format_counts(series: CountSeries) -> str:
    lines = [f"# preset_time_s={_fmt_number(series.preset_time_s)}", f"# source={series.source_label}"]
    if series.distance_cm is not None:
        lines.append(f"# distance_cm={_fmt_number(series.distance_cm)}")
    if series.applied_voltage_V is not None:
        lines.append(f"# voltage={_fmt_number(series.applied_voltage_V)}")
    lines.extend(str(c) for c in series.counts)
    return "\n".join(lines) + "\n"


def write_counts(series: CountSeries, path) -> Path:
    path = Path(path)
    path.write_text(format_counts(series))
    return path


def read_bits(path) -> BitSequence:
    """ASCII ``0``/``1`` file; line breaks and other whitespace are ignored."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return BitSequence.from_string(text)
    except (ValueError, UnicodeEncodeError) as exc:
        raise DataError(f"{path}: {exc}") from None


def write_bits(seq: BitSequence, path, width: int = 0) -> Path:
    path = Path(path)
    text = seq.to_string()
    if width:
        text = "\n".join(text[i : i + width] for i in range(0, len(text), width))
    path.write_text(text + "\n")
    return path
