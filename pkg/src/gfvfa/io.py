"""File formats: self-describing CSV, PGM heatmaps and signal ingestion.

Every CSV written here starts with ``#`` comment lines naming the quantity
and its units, followed by one header row naming the columns. Floats use
``%.17g`` so a written file reads back to identical values. Vertex and
frequency indices in files are 1-based.
"""

from __future__ import annotations

import csv
import io as _io
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "FormatError",
    "SignalStats",
    "fmt",
    "write_csv",
    "write_complex_matrix",
    "read_complex_matrix",
    "write_magnitude_csv",
    "write_pgm",
    "read_pgm",
    "write_signal_csv",
    "read_signal_csv",
    "write_matrix_csv",
    "ingest_matrix_csv",
    "signal_stats",
]


class FormatError(ValueError):
    pass


def fmt(v: float) -> str:
    return "%.17g" % v


def _text(comments: Iterable[str], header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = _io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def write_csv(path, comments, header, rows) -> Path:
    path = Path(path)
    path.write_text(_text(comments, header, rows), encoding="utf-8")
    return path


def _data_rows(path) -> tuple[list[str], list[list[str]]]:
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    rows = list(csv.reader(lines))
    if not rows:
        raise FormatError(f"{path}: no header row")
    return rows[0], rows[1:]


def write_complex_matrix(path, m, quantity: str, units: str = "arbitrary") -> Path:
    """Real and imaginary parts as two stacked blocks, tagged ``re`` / ``im``."""
    m = np.asarray(m, dtype=complex)
    rows_, cols = m.shape
    header = ["part", "row"] + [f"c{j}" for j in range(1, cols + 1)]
    rows = [["re", i + 1, *map(float, m[i].real)] for i in range(rows_)]
    rows += [["im", i + 1, *map(float, m[i].imag)] for i in range(rows_)]
    return write_csv(path, [f"quantity: {quantity}", f"units: {units}",
                            f"shape: {rows_} x {cols}"], header, rows)


def read_complex_matrix(path) -> np.ndarray:
    header, rows = _data_rows(path)
    if header[:2] != ["part", "row"]:
        raise FormatError(f"{path}: not a complex matrix file")
    re = [r for r in rows if r[0] == "re"]
    im = [r for r in rows if r[0] == "im"]
    if len(re) != len(im):
        raise FormatError(f"{path}: real and imaginary blocks differ in size")
    try:
        a = np.array([[float(v) for v in r[2:]] for r in re])
        b = np.array([[float(v) for v in r[2:]] for r in im])
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return a + 1j * b


def write_magnitude_csv(path, m, quantity: str = "|E(n,k)|") -> Path:
    """``|M|`` with rows = vertices ``n`` and columns = frequencies ``k``."""
    mag = np.abs(np.asarray(m))
    header = ["n"] + [f"k{j}" for j in range(1, mag.shape[1] + 1)]
    rows = [[i + 1, *map(float, mag[i])] for i in range(mag.shape[0])]
    return write_csv(path, [f"quantity: {quantity}", "units: energy (signal units squared)"],
                     header, rows)


def write_pgm(path, m) -> Path:
    """8-bit binary PGM of ``|M|`` scaled so the largest entry maps to 255."""
    mag = np.abs(np.asarray(m))
    peak = mag.max() if mag.size else 0.0
    img = np.zeros(mag.shape, dtype=np.uint8) if peak == 0 else \
        np.rint(255.0 * mag / peak).astype(np.uint8)
    h, w = img.shape
    path = Path(path)
    path.write_bytes(b"P5\n%d %d\n255\n" % (w, h) + img.tobytes())
    return path


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if len(parts) < 5 or parts[0] != b"P5":
        raise FormatError(f"{path}: not a binary PGM")
    w, h, maxval = int(parts[1]), int(parts[2]), int(parts[3])
    if maxval != 255:
        raise FormatError(f"{path}: only 8-bit PGM is supported")
    return np.frombuffer(parts[4][: w * h], dtype=np.uint8).reshape(h, w)


def write_signal_csv(path, x, quantity: str = "graph signal", units: str = "arbitrary") -> Path:
    """Two columns ``real, imag``; row ``i`` is vertex ``i`` (1-based)."""
    x = np.asarray(x, dtype=complex)
    rows = [[float(v.real), float(v.imag)] for v in x]
    return write_csv(path, [f"quantity: {quantity}", f"units: {units}",
                            "row i is vertex i (1-based)"], ["real", "imag"], rows)


def read_signal_csv(path) -> np.ndarray:
    header, rows = _data_rows(path)
    if [h.strip() for h in header] != ["real", "imag"]:
        raise FormatError(f"{path}: expected columns real,imag")
    try:
        return np.array([complex(float(r[0]), float(r[1])) for r in rows])
    except (ValueError, IndexError) as exc:
        raise FormatError(f"{path}: bad signal row ({exc})") from exc


def write_matrix_csv(path, m) -> Path:
    """Bare numeric CSV (no header), the format read by :func:`ingest_matrix_csv`."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in m:
        w.writerow([fmt(v) for v in r])
    path = Path(path)
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def ingest_matrix_csv(path, column: int, header: bool = False) -> np.ndarray:
    """Column ``column`` (1-based) of an N x T numeric CSV as a real signal.

    Blank lines and ``#`` lines are skipped; ``header=True`` drops the first
    remaining row. Ragged rows, non-numeric cells and out-of-range columns
    raise :class:`FormatError`.
    """
    if int(column) != column or column < 1:
        raise FormatError(f"column must be a positive 1-based index, got {column}")
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    rows = list(csv.reader(lines))
    if header:
        rows = rows[1:]
    if not rows:
        raise FormatError(f"{path}: no data rows")
    width = len(rows[0])
    out = np.empty((len(rows), width))
    for i, r in enumerate(rows, start=1):
        if len(r) != width:
            raise FormatError(f"{path}: row {i} has {len(r)} cells, expected {width}")
        for j, cell in enumerate(r):
            try:
                out[i - 1, j] = float(cell)
            except ValueError:
                raise FormatError(f"{path}: non-numeric cell {cell!r} at row {i}, column {j + 1}") from None
    if column > width:
        raise FormatError(f"column {column} out of range 1..{width}")
    return out[:, column - 1].copy()


class SignalStats(NamedTuple):
    n: int
    mean: float
    std: float
    min: float
    max: float
    norm: float


def signal_stats(x) -> SignalStats:
    x = np.asarray(x)
    r = np.real(x)
    return SignalStats(x.size, float(r.mean()), float(r.std()), float(r.min()),
                       float(r.max()), float(np.linalg.norm(x)))
