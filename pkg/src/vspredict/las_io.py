"""Reading and writing well logs as LAS 2.0 or flat CSV.

Only unwrapped LAS 2.0 is handled. Missing samples are stored as NaN in
memory; the well's declared null value is used again on output.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_NULL = -999.25

# alternate spellings treated as the same curve
ALIASES = {"NPFI": "NPHI"}


class LASError(ValueError):
    """Malformed LAS or CSV input. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def canonical_mnemonic(name: str) -> str:
    key = name.strip().upper()
    return ALIASES.get(key, key)


@dataclass
class Curve:
    mnemonic: str
    unit: str = ""
    description: str = ""
    samples: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        if not self.mnemonic:
            raise ValueError("curve mnemonic must be nonempty")
        self.samples = np.asarray(self.samples, dtype=float)

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.samples)


@dataclass
class WellLog:
    """Depth-indexed set of curves.

    ``depth`` must be strictly increasing. Curve lookup is case-insensitive
    and honours :data:`ALIASES`, so ``log["npfi"]`` finds an NPHI curve.
    """

    well_name: str
    depth: np.ndarray
    curves: list[Curve] = field(default_factory=list)
    null_value: float = DEFAULT_NULL
    depth_unit: str = "M"

    def __post_init__(self):
        self.depth = np.asarray(self.depth, dtype=float)
        if self.depth.ndim != 1:
            raise ValueError("depth must be one-dimensional")
        if not np.all(np.isfinite(self.depth)):
            raise ValueError("depth contains missing or non-finite values")
        if self.depth.size > 1 and np.any(np.diff(self.depth) <= 0):
            raise ValueError("depth must be strictly increasing without duplicates")
        seen = set()
        for c in self.curves:
            key = canonical_mnemonic(c.mnemonic)
            if key in seen:
                raise ValueError(f"duplicate curve mnemonic {c.mnemonic!r}")
            seen.add(key)
            if c.samples.shape != self.depth.shape:
                raise ValueError(
                    f"curve {c.mnemonic!r} has {c.samples.size} samples, "
                    f"depth has {self.depth.size}"
                )

    @property
    def mnemonics(self) -> list[str]:
        return [c.mnemonic for c in self.curves]

    def find(self, name: str) -> Curve | None:
        key = canonical_mnemonic(name)
        for c in self.curves:
            if canonical_mnemonic(c.mnemonic) == key:
                return c
        return None

    def __contains__(self, name: str) -> bool:
        return self.find(name) is not None

    def __getitem__(self, name: str) -> Curve:
        c = self.find(name)
        if c is None:
            raise KeyError(name)
        return c


def _mask_nulls(values: np.ndarray, null_value: float) -> np.ndarray:
    values = np.asarray(values, dtype=float).copy()
    values[np.isclose(values, null_value, rtol=0.0, atol=1e-9)] = np.nan
    return values


def _parse_header_line(line: str):
    """Split ``MNEM.UNIT  VALUE : DESC`` into its four parts."""
    if ":" in line:
        head, desc = line.rsplit(":", 1)
    else:
        head, desc = line, ""
    if "." not in head:
        raise ValueError("missing '.' delimiter")
    mnem, rest = head.split(".", 1)
    if rest[:1].isspace() or rest == "":
        unit, value = "", rest
    else:
        parts = rest.split(None, 1)
        unit = parts[0]
        value = parts[1] if len(parts) > 1 else ""
    return mnem.strip(), unit.strip(), value.strip(), desc.strip()


def parse_las(data: bytes | str) -> WellLog:
    """Parse LAS 2.0 text into a :class:`WellLog`.

    Descending files are flipped so depth increases. The first ``~C`` entry
    is taken as the depth index.
    """
    text = data.decode("utf-8", errors="replace") if isinstance(data, bytes) else data
    lines = text.splitlines()

    section = None
    wrap = False
    null_value = DEFAULT_NULL
    well_name = ""
    curve_defs: list[tuple[str, str, str]] = []
    rows: list[list[float]] = []
    row_lines: list[int] = []
    saw_ascii = False

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("~"):
            section = line[1:2].upper()
            if section == "A":
                saw_ascii = True
            continue
        if section == "A":
            tokens = line.split()
            if len(tokens) != len(curve_defs):
                raise LASError(
                    f"expected {len(curve_defs)} values, found {len(tokens)}", lineno
                )
            try:
                rows.append([float(t) for t in tokens])
            except ValueError as exc:
                raise LASError(f"unparseable number ({exc})", lineno) from None
            row_lines.append(lineno)
            continue
        if section not in {"V", "W", "C"}:
            continue
        try:
            mnem, unit, value, desc = _parse_header_line(line)
        except ValueError as exc:
            raise LASError(str(exc), lineno) from None
        key = mnem.upper()
        if section == "V" and key == "WRAP":
            wrap = value.upper().startswith("Y")
            if wrap:
                raise LASError("wrapped LAS files are not supported", lineno)
        elif section == "W" and key == "NULL":
            try:
                null_value = float(value)
            except ValueError:
                raise LASError(f"bad NULL value {value!r}", lineno) from None
        elif section == "W" and key == "WELL":
            well_name = value or desc
        elif section == "C":
            curve_defs.append((mnem, unit, desc))

    if not saw_ascii:
        raise LASError("missing ~A (data) section")
    if not curve_defs:
        raise LASError("no curves defined in ~C section")

    table = np.array(rows, dtype=float).reshape(len(rows), len(curve_defs))
    depth = table[:, 0]
    if depth.size > 1 and depth[0] > depth[-1]:
        table = table[::-1]
        row_lines = row_lines[::-1]
        depth = table[:, 0]
    steps = np.diff(depth)
    bad = np.flatnonzero(steps <= 0)
    if bad.size:
        raise LASError("depth is not strictly monotonic", row_lines[bad[0] + 1])

    curves = [
        Curve(mnem, unit, desc, _mask_nulls(table[:, j], null_value))
        for j, (mnem, unit, desc) in enumerate(curve_defs[1:], start=1)
    ]
    return WellLog(
        well_name=well_name,
        depth=depth.copy(),
        curves=curves,
        null_value=null_value,
        depth_unit=curve_defs[0][1] or "M",
    )


def _fmt(value: float, null_value: float) -> str:
    if math.isnan(value):
        value = null_value
    return f"{value:.10g}"


def write_las(log: WellLog) -> bytes:
    """Serialize a :class:`WellLog` as unwrapped LAS 2.0 text."""
    out = io.StringIO()
    w = out.write
    depth = log.depth
    start = depth[0] if depth.size else 0.0
    stop = depth[-1] if depth.size else 0.0
    step = float(depth[1] - depth[0]) if depth.size > 1 else 0.0
    if depth.size > 2 and not np.allclose(np.diff(depth), step):
        step = 0.0
    du = log.depth_unit

    w("~Version Information\n")
    w(" VERS.                 2.0 : CWLS LOG ASCII STANDARD - VERSION 2.0\n")
    w(" WRAP.                  NO : ONE LINE PER DEPTH STEP\n")
    w("~Well Information\n")
    w(f" STRT.{du:<4} {_fmt(start, log.null_value):>16} : START DEPTH\n")
    w(f" STOP.{du:<4} {_fmt(stop, log.null_value):>16} : STOP DEPTH\n")
    w(f" STEP.{du:<4} {_fmt(step, log.null_value):>16} : STEP\n")
    w(f" NULL.     {_fmt(log.null_value, log.null_value):>16} : NULL VALUE\n")
    w(f" WELL.     {log.well_name:>16} : WELL\n")
    w("~Curve Information\n")
    w(f" DEPT.{du:<8} : DEPTH\n")
    for c in log.curves:
        w(f" {c.mnemonic}.{c.unit:<8} : {c.description}\n")
    w("~ASCII\n")
    columns = [depth] + [c.samples for c in log.curves]
    for i in range(depth.size):
        w(" ".join(_fmt(col[i], log.null_value) for col in columns))
        w("\n")
    return out.getvalue().encode("utf-8")


def _csv_float(cell: str, lineno: int) -> float:
    cell = cell.strip()
    if cell == "" or cell.lower() in {"nan", "na", "null"}:
        return math.nan
    try:
        return float(cell)
    except ValueError:
        raise LASError(f"unparseable number {cell!r}", lineno) from None


def parse_csv(data: bytes | str, depth_column: str = "DEPTH", well_name: str = "",
              null_value: float = DEFAULT_NULL) -> WellLog:
    """Parse a comma-delimited table with a header row.

    Empty cells, NaN literals and ``null_value`` all become missing.
    """
    text = data.decode("utf-8-sig") if isinstance(data, bytes) else data
    reader = csv.reader(
        line for line in io.StringIO(text) if not line.lstrip().startswith("#")
    )
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise LASError("empty CSV input") from None
    upper = [h.upper() for h in header]
    if depth_column.upper() not in upper:
        raise LASError(f"depth column {depth_column!r} not found", 1)
    di = upper.index(depth_column.upper())

    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise LASError(f"expected {len(header)} fields, found {len(row)}", lineno)
        rows.append([_csv_float(c, lineno) for c in row])

    table = np.array(rows, dtype=float).reshape(len(rows), len(header))
    depth = table[:, di]
    if np.any(np.isnan(depth)):
        raise LASError("missing depth value")
    if depth.size > 1 and np.any(np.diff(depth) <= 0):
        raise LASError("depth must be strictly increasing without duplicates")
    curves = [
        Curve(header[j], "", "", _mask_nulls(table[:, j], null_value))
        for j in range(len(header))
        if j != di
    ]
    return WellLog(well_name=well_name, depth=depth.copy(), curves=curves,
                   null_value=null_value)


def write_csv(log: WellLog, depth_column: str = "DEPTH") -> bytes:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([depth_column] + log.mnemonics)
    for i in range(log.depth.size):
        row = [f"{log.depth[i]:.10g}"]
        for c in log.curves:
            v = c.samples[i]
            row.append("" if math.isnan(v) else f"{v:.10g}")
        writer.writerow(row)
    return out.getvalue().encode("utf-8")


def read_log(path, depth_column: str = "DEPTH") -> WellLog:
    """Load a LAS or CSV file, chosen by extension."""
    path = str(path)
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        if path.lower().endswith(".csv"):
            name = path.rsplit("/", 1)[-1].rsplit(".", 1)[0]
            return parse_csv(data, depth_column=depth_column, well_name=name)
        return parse_las(data)
    except LASError as exc:
        raise LASError(f"{path}: {exc}") from None
