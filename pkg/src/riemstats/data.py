"""Data tables, pipeline configuration and CSV input/output."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from importlib import resources
from typing import IO, Sequence

import numpy as np


class InputError(ValueError):
    """Raised for malformed tables or out-of-range configuration."""


METRIC_MODES = ("geodesic", "minimax")
DISCONNECT_POLICIES = ("euclidean_bridge", "fail")
STANDARDIZE_MODES = ("none", "zscore")


def _check_labels(labels: Sequence[str], axis: str) -> tuple[str, ...]:
    labels = tuple(str(s) for s in labels)
    seen = set()
    for s in labels:
        if s in seen:
            raise InputError(f"duplicate {axis} label {s!r}")
        seen.add(s)
    return labels


@dataclass(frozen=True)
class DataTable:
    """An n x p table of finite reals with unique row and column labels.

    ``values`` is stored as a read-only float64 array.
    """

    values: np.ndarray
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise InputError("values must be a 2-D matrix")
        n, p = values.shape
        if n < 3:
            raise InputError(f"fewer than 3 rows (got {n})")
        if p < 1:
            raise InputError("table has no columns")
        if not np.all(np.isfinite(values)):
            raise InputError("table contains non-finite values")
        rows = _check_labels(self.row_labels, "row")
        cols = _check_labels(self.col_labels, "column")
        if len(rows) != n or len(cols) != p:
            raise InputError(
                f"label counts ({len(rows)}, {len(cols)}) do not match shape {values.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "col_labels", cols)

    @classmethod
    def from_array(cls, values, row_labels=None, col_labels=None) -> "DataTable":
        values = np.asarray(values, dtype=np.float64)
        if values.ndim == 1:
            values = values[:, None]
        n, p = values.shape
        if row_labels is None:
            row_labels = [f"row{i + 1}" for i in range(n)]
        if col_labels is None:
            col_labels = [f"X{j + 1}" for j in range(p)]
        return cls(values, tuple(row_labels), tuple(col_labels))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def __eq__(self, other):
        if not isinstance(other, DataTable):
            return NotImplemented
        return (
            self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and self.values.shape == other.values.shape
            and bool(np.array_equal(self.values, other.values))
        )

    __hash__ = None


@dataclass(frozen=True)
class PipelineConfig:
    k: int = 3
    min_dist: float = 0.1
    n_epochs: int = 200
    seed: int = 42
    metric_mode: str = "geodesic"
    disconnect_policy: str = "euclidean_bridge"
    standardize: str = "none"
    embedding_dim: int = 2
    spread: float = 1.0

    def __post_init__(self):
        if self.min_dist < 0:
            raise InputError("min_dist must be nonnegative")
        if self.spread <= 0:
            raise InputError("spread must be positive")
        if self.n_epochs < 1:
            raise InputError("n_epochs must be a positive integer")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")
        if self.metric_mode not in METRIC_MODES:
            raise InputError(f"unknown metric mode {self.metric_mode!r}")
        if self.disconnect_policy not in DISCONNECT_POLICIES:
            raise InputError(f"unknown disconnect policy {self.disconnect_policy!r}")
        if self.standardize not in STANDARDIZE_MODES:
            raise InputError(f"unknown standardize mode {self.standardize!r}")
        if self.embedding_dim < 2:
            raise InputError("embedding_dim must be at least 2")
        if self.k < 2:
            raise InputError(f"k out of range: {self.k} < 2")

    def check_against(self, table: DataTable) -> None:
        """Validate the table-dependent constraint ``k <= n - 1``."""
        if not 2 <= self.k <= table.n - 1:
            raise InputError(f"k out of range: need 2 <= k <= {table.n - 1}, got {self.k}")

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "min_dist": self.min_dist,
            "n_epochs": self.n_epochs,
            "seed": self.seed,
            "metric_mode": self.metric_mode,
            "disconnect_policy": self.disconnect_policy,
            "standardize": self.standardize,
            "embedding_dim": self.embedding_dim,
            "spread": self.spread,
        }


def _parse_float(cell: str, r: int, c: int) -> float:
    try:
        x = float(cell)
    except ValueError:
        raise InputError(f"non-numeric cell {cell!r} at row {r}, column {c}") from None
    if not math.isfinite(x):
        raise InputError(f"non-finite cell {cell!r} at row {r}, column {c}")
    return x


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_csv(source: IO[bytes] | IO[str] | bytes | str) -> DataTable:
    """Parse a comma-separated table with a header row.

    The first column is taken as row labels when the header's corner cell is
    empty or the first data cell is non-numeric. ``source`` may be a binary or
    text stream, raw bytes, or a string of CSV text.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise InputError(f"input is not UTF-8: {exc}") from None
    rows = [r for r in csv.reader(io.StringIO(source)) if any(c.strip() for c in r)]
    if not rows:
        raise InputError("empty input: a header row is required")
    header, body = rows[0], rows[1:]
    if len(body) < 3:
        raise InputError(f"fewer than 3 rows (got {len(body)})")
    has_labels = header[0].strip() == "" or not _is_number(body[0][0].strip())
    start = 1 if has_labels else 0
    col_labels = [h.strip() for h in header[start:]]
    values = []
    row_labels = []
    for r, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise InputError(f"row {r} has {len(row)} fields, expected {len(header)}")
        cells = row[start:]
        values.append([_parse_float(c.strip(), r, c_i + 1 + start) for c_i, c in enumerate(cells)])
        row_labels.append(row[0].strip() if has_labels else f"row{len(row_labels) + 1}")
    return DataTable(np.array(values, dtype=np.float64), tuple(row_labels), tuple(col_labels))


def emit_csv(table: DataTable) -> str:
    """Serialize a table so that ``load_csv(emit_csv(t)) == t``.

    Floats are written with ``repr`` so that they round-trip exactly.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["", *table.col_labels])
    for label, row in zip(table.row_labels, table.values):
        w.writerow([label, *(repr(float(x)) for x in row)])
    return buf.getvalue()


def standardize(table: DataTable, mode: str = "none") -> DataTable:
    """Return the table unchanged (``none``) or z-scored column-wise (``zscore``).

    z-scoring uses the population standard deviation.
    """
    if mode == "none":
        return table
    if mode != "zscore":
        raise InputError(f"unknown standardize mode {mode!r}")
    x = table.values
    sd = x.std(axis=0)
    flat = np.flatnonzero(sd == 0)
    if flat.size:
        raise InputError(f"cannot z-score constant column {table.col_labels[flat[0]]!r}")
    z = (x - x.mean(axis=0)) / sd
    return replace(table, values=z)


def load_students() -> DataTable:
    """Return the bundled ten-student grade table."""
    with resources.files("riemstats").joinpath("resources", "students.csv").open("rb") as fh:
        return load_csv(fh)


def students_csv_path():
    return resources.files("riemstats").joinpath("resources", "students.csv")


__all__ = [
    "DataTable",
    "InputError",
    "PipelineConfig",
    "emit_csv",
    "load_csv",
    "load_students",
    "standardize",
]
