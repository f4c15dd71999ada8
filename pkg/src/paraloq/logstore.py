"""Spreadsheet-compatible CSV persistence for acquisition runs.

File layout: UTF-8 text with CRLF line endings, `#`-prefixed metadata
lines, a fixed header, then one wide row per tick (both channels side by
side, like the instrument's own dry/wet presentation):

    # run_id = 20260810T173000_0000002a
    # start = 2026-08-10T17:30:00.000
    # sample_rate_hz = 2.000000
    # channels = dry=0,wet=1
    # config = 5b3c9a1d8e2f
    t_s,timestamp,dry_code,dry_temp_c,wet_code,wet_temp_c,rh_pct,dew_point_c
    0.000000,2026-08-10T17:30:00.000,102,20.000000,92,18.039216,82.872516,16.998432

Floats are written with 6 decimal places; every float field is rounded to
6 decimals when a row or meta object is constructed, so reading a written
file back reproduces the run exactly and re-serialization is byte-stable.
Fields never contain commas, so no quoting is ever needed and the files
open directly in any spreadsheet application.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

from .errors import CsvParseError, InvalidInputError, StorageError

HEADER = "t_s,timestamp,dry_code,dry_temp_c,wet_code,wet_temp_c,rh_pct,dew_point_c"
_META_KEYS = ("run_id", "start", "sample_rate_hz", "channels", "config")


def round6(x: float) -> float:
    """Quantize to the file format's 6-decimal resolution."""
    return round(x, 6)


def fingerprint(text: str) -> str:
    """Short stable hash used to tag a run with its configuration."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class RunMeta:
    """Run identification carried in the file's comment lines."""

    run_id: str = ""
    start: str = ""  # ISO-8601, millisecond precision
    sample_rate_hz: float = 0.0
    channels: dict = field(default_factory=dict)  # name -> mux input
    config_fingerprint: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sample_rate_hz", round6(self.sample_rate_hz))


@dataclass(frozen=True)
class PsychroRow:
    """One logged tick: both channel readings plus derived humidity.

    rh_pct / dew_point_c are None when the psychrometric computation
    errored for that tick (they serialize as empty fields).
    """

    t_s: float
    timestamp: str
    dry_code: int
    dry_temp_c: float
    wet_code: int
    wet_temp_c: float
    rh_pct: float | None = None
    dew_point_c: float | None = None

    def __post_init__(self):
        for name in ("dry_code", "wet_code"):
            code = getattr(self, name)
            if not isinstance(code, int) or not (0 <= code <= 255):
                raise InvalidInputError(f"{name} must be an integer 0..255, got {code}")
        if not math.isfinite(self.t_s):
            raise InvalidInputError(f"t_s must be finite, got {self.t_s}")
        for name in ("t_s", "dry_temp_c", "wet_temp_c", "rh_pct", "dew_point_c"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, round6(value))


@dataclass
class RunLog:
    """An ordered run: metadata plus one PsychroRow per tick."""

    meta: RunMeta
    rows: list = field(default_factory=list)


def default_filename(meta: RunMeta) -> str:
    """Conventional log name: run_<ISO-8601-basic-start>_<id>.csv."""
    return f"run_{meta.run_id}.csv"


def _format_float(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def _format_row(row: PsychroRow) -> str:
    return ",".join(
        (
            f"{row.t_s:.6f}",
            row.timestamp,
            str(row.dry_code),
            f"{row.dry_temp_c:.6f}",
            str(row.wet_code),
            f"{row.wet_temp_c:.6f}",
            _format_float(row.rh_pct),
            _format_float(row.dew_point_c),
        )
    )


class CsvWriter:
    """Streaming writer: metadata and header up front, then row by row.

    Flushes after every row so a crash loses at most the in-flight row.
    Single-owner, append-only while a run is live.
    """

    def __init__(self, path, meta: RunMeta):
        self.path = path
        self._last_t = None
        try:
            self._fh = open(path, "w", encoding="utf-8", newline="")
        except OSError as exc:
            raise StorageError(path, str(exc)) from exc
        self._emit(f"# run_id = {meta.run_id}")
        self._emit(f"# start = {meta.start}")
        self._emit(f"# sample_rate_hz = {meta.sample_rate_hz:.6f}")
        channels = ",".join(f"{name}={idx}" for name, idx in meta.channels.items())
        self._emit(f"# channels = {channels}")
        self._emit(f"# config = {meta.config_fingerprint}")
        self._emit(HEADER)
        self._fh.flush()

    def _emit(self, line: str) -> None:
        try:
            self._fh.write(line + "\r\n")
        except OSError as exc:
            raise StorageError(self.path, str(exc)) from exc

    def write_row(self, row: PsychroRow) -> None:
        if self._last_t is not None and row.t_s <= self._last_t:
            raise InvalidInputError(
                f"rows must have strictly increasing t_s: {row.t_s} after {self._last_t}"
            )
        self._last_t = row.t_s
        self._emit(_format_row(row))
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()


def write_csv(run: RunLog, path) -> None:
    """Write a complete run to path in the documented CSV format."""
    with CsvWriter(path, run.meta) as writer:
        for row in run.rows:
            writer.write_row(row)


def _parse_float(text: str, line_no: int, name: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise CsvParseError(line_no, f"bad {name} value {text!r}") from None


def _parse_code(text: str, line_no: int, name: str) -> int:
    try:
        code = int(text)
    except ValueError:
        raise CsvParseError(line_no, f"bad {name} value {text!r}") from None
    if not (0 <= code <= 255):
        raise CsvParseError(line_no, f"{name} out of range 0..255: {code}")
    return code


def _parse_optional(text: str, line_no: int, name: str) -> float | None:
    return None if text == "" else _parse_float(text, line_no, name)


def _parse_meta_line(line: str, meta_values: dict) -> None:
    body = line[1:].strip()
    key, sep, value = body.partition(" = ")
    if sep and key.strip() in _META_KEYS:
        meta_values[key.strip()] = value
    # anything else is a free-form comment; ignore it


def _parse_channels(text: str, line_no: int) -> dict:
    channels = {}
    if not text:
        return channels
    for part in text.split(","):
        name, sep, idx = part.partition("=")
        if not sep:
            raise CsvParseError(line_no, f"bad channels entry {part!r}")
        try:
            channels[name] = int(idx)
        except ValueError:
            raise CsvParseError(line_no, f"bad channel index {idx!r}") from None
    return channels


def read_csv(path) -> RunLog:
    """Read a file produced by write_csv (exact inverse).

    Metadata lines may be absent (hand-written files); data rows are
    validated for column count, types, code range, and strictly
    increasing t_s. Errors carry the offending 1-based line number.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise StorageError(path, str(exc)) from exc

    meta_values: dict = {}
    meta_line_no = 0
    rows: list = []
    header_seen = False
    last_t = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if line == "":
            continue
        if line.startswith("#"):
            meta_line_no = line_no
            _parse_meta_line(line, meta_values)
            continue
        if not header_seen:
            if line != HEADER:
                raise CsvParseError(line_no, f"expected header {HEADER!r}, found {line!r}")
            header_seen = True
            continue
        fields = line.split(",")
        if len(fields) != 8:
            raise CsvParseError(line_no, f"expected 8 columns, found {len(fields)}")
        row = PsychroRow(
            t_s=_parse_float(fields[0], line_no, "t_s"),
            timestamp=fields[1],
            dry_code=_parse_code(fields[2], line_no, "dry_code"),
            dry_temp_c=_parse_float(fields[3], line_no, "dry_temp_c"),
            wet_code=_parse_code(fields[4], line_no, "wet_code"),
            wet_temp_c=_parse_float(fields[5], line_no, "wet_temp_c"),
            rh_pct=_parse_optional(fields[6], line_no, "rh_pct"),
            dew_point_c=_parse_optional(fields[7], line_no, "dew_point_c"),
        )
        if last_t is not None and row.t_s <= last_t:
            raise CsvParseError(line_no, f"t_s not increasing: {row.t_s} after {last_t}")
        last_t = row.t_s
        rows.append(row)
    if not header_seen:
        raise CsvParseError(max(meta_line_no, 1), "missing header line")

    meta = RunMeta(
        run_id=meta_values.get("run_id", ""),
        start=meta_values.get("start", ""),
        sample_rate_hz=_parse_float(
            meta_values.get("sample_rate_hz", "0"), meta_line_no, "sample_rate_hz"
        ),
        channels=_parse_channels(meta_values.get("channels", ""), meta_line_no),
        config_fingerprint=meta_values.get("config", ""),
    )
    return RunLog(meta=meta, rows=rows)
