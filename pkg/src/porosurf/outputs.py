"""Delimited and image outputs with a reproducible formatting policy.

Every float is written with 9 significant digits and files use LF endings,
so re-running a manifest yields byte-identical CSVs.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .fdtd import FieldRecord

SIG_DIGITS = 9


def fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{value:.{SIG_DIGITS}g}"
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")
    return path


def write_amplitude_map_csv(record: FieldRecord, path: str | Path) -> Path:
    """Row-major amplitude map; one line per x row, prefixed grid metadata."""
    amp = record.amplitude_map
    if amp is None:
        raise ValueError("record has no amplitude map")
    path = Path(path)
    meta = record.metadata
    lines = [
        f"# nx={amp.shape[0]} ny={amp.shape[1]} dx={fmt(meta['dx'])} "
        f"x0={fmt(record.x[0])} y0={fmt(record.y[0])}",
        "# row-major: line i holds |E|(x_i, y_0..y_ny-1)",
    ]
    for i in range(amp.shape[0]):
        lines.append(",".join(fmt(v) for v in amp[i]))
    path.write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")
    return path


def write_amplitude_map_pgm(record: FieldRecord, path: str | Path,
                            floor_db: float = -60.0) -> Path:
    """Grayscale PGM (P5) of the amplitude map on a dB scale.

    Levels map [peak + floor_db, peak] dB onto 0..255; the image is stored
    with y increasing upward (last row first).
    """
    amp = record.amplitude_map
    if amp is None:
        raise ValueError("record has no amplitude map")
    peak = float(amp.max())
    if peak <= 0.0:
        db = np.full_like(amp, floor_db)
    else:
        db = 20.0 * np.log10(np.maximum(amp / peak, 10 ** (floor_db / 20.0)))
    gray = np.round((db - floor_db) / (-floor_db) * 255.0).astype(np.uint8)
    img = gray.T[::-1]  # rows top-to-bottom = decreasing y
    header = (f"P5\n# porosurf amplitude map, dB floor {fmt(floor_db)}\n"
              f"{img.shape[1]} {img.shape[0]}\n255\n")
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(img.tobytes())
    return path


def write_profile_csv(x: np.ndarray, values: np.ndarray, path: str | Path,
                      value_name: str = "power_db") -> Path:
    return write_csv(path, ["x_m", value_name], zip(x, values))


def write_probe_series_csv(record: FieldRecord, path: str | Path) -> Path:
    header = ["time_s"] + [f"probe_{k}" for k in range(record.probe_series.shape[0])]
    rows = zip(record.probe_times, *record.probe_series)
    return write_csv(path, header, rows)


def write_spectra_csv(freqs: np.ndarray, columns: dict[str, np.ndarray],
                      path: str | Path) -> Path:
    header = ["freq_hz"] + list(columns)
    rows = zip(freqs, *columns.values())
    return write_csv(path, header, rows)
