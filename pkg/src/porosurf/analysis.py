"""Profile metrics: local mean, fluctuation SD, path-loss slope, 3-dB band.

The centreline power profile of a channel run is smoothed by a centred moving
average; the fluctuation standard deviation is the population SD of the dB
profile about that local mean, and path loss is the fitted slope of the local
mean.  Band metrics locate the transmission peak of a swept spectrum and the
contiguous half-power interval around it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .constants import C0
from .errors import (
    DegenerateFitError,
    DomainError,
    EmptySpanError,
    NoPeakError,
    WindowError,
)
from .fdtd import FieldRecord


@dataclass
class CenterlineProfile:
    """Field power along the channel centreline, in dB re a declared amplitude."""

    x: np.ndarray                       # strictly increasing, uniform spacing
    p_db: np.ndarray
    local_mean_db: np.ndarray | None = None
    analysis_span: tuple[float, float] = (0.0, 0.0)
    reference_amplitude: float = 1.0

    @property
    def spacing(self) -> float:
        return float(self.x[1] - self.x[0])


@dataclass(frozen=True)
class BandMetrics:
    f_peak: float
    band_3db: tuple[float, float]
    peak_db: float
    truncated_low: bool = False
    truncated_high: bool = False


@dataclass
class AnalysisReport:
    """Derived metrics for one model run (spectra fields optional)."""

    sigma_db: float
    path_loss_db_per_m: float
    s21_db: np.ndarray | None = None
    s11_db: np.ndarray | None = None
    freqs: np.ndarray | None = None
    band: BandMetrics | None = None


def extract_centerline(record: FieldRecord,
                       margins: float | tuple[float, float] = 0.05,
                       reference_amplitude: float = 1.0,
                       floor_db: float = -300.0) -> CenterlineProfile:
    """Sample the amplitude map along the channel centreline, in dB.

    ``margins`` excludes a distance near the source and near the far end of
    the channel (a scalar applies to both).  Amplitudes are clipped at
    ``floor_db`` to keep conductor/null cells finite.
    """
    if record.amplitude_map is None:
        raise DomainError("record has no amplitude map")
    m_src, m_end = (margins, margins) if np.isscalar(margins) else margins

    meta = record.metadata
    npml = meta.get("npml", 0)
    interior_x0 = record.x[min(npml, len(record.x) - 1)]
    interior_x1 = record.x[max(len(record.x) - 1 - npml, 0)]
    src = meta.get("source_position")
    x_lo = (src[0] if src else interior_x0) + m_src
    chan = meta.get("channel")
    x_hi = (chan[1] if chan else interior_x1) - m_end
    x_lo = max(x_lo, interior_x0)
    x_hi = min(x_hi, interior_x1)

    j_mid = int(np.argmin(np.abs(record.y - (0.0 if chan is None
                                             else 0.5 * (chan[2] + chan[3])))))
    sel = (record.x >= x_lo - 1e-12) & (record.x <= x_hi + 1e-12)
    if not np.any(sel):
        raise EmptySpanError(
            f"margins ({m_src}, {m_end}) leave no samples in [{x_lo}, {x_hi}]"
        )
    amp = record.amplitude_map[sel, j_mid]
    p_db = 20.0 * np.log10(np.maximum(amp / reference_amplitude, 10 ** (floor_db / 20.0)))
    return CenterlineProfile(
        x=record.x[sel].copy(),
        p_db=p_db,
        analysis_span=(float(record.x[sel][0]), float(record.x[sel][-1])),
        reference_amplitude=reference_amplitude,
    )


def local_mean(profile: CenterlineProfile, window: float) -> np.ndarray:
    """Centred moving average of the dB profile.

    ``window`` is a length in metres; it must cover at least 3 samples.
    Near the ends the window shrinks symmetrically, so affine profiles are
    preserved everywhere and the output has the input's length.
    """
    dx = profile.spacing
    half = int(round(window / dx)) // 2
    if 2 * half + 1 < 3:
        raise WindowError(
            f"window {window} m covers fewer than 3 samples at spacing {dx} m"
        )
    p = profile.p_db
    n = len(p)
    csum = np.concatenate([[0.0], np.cumsum(p)])
    out = np.empty(n)
    for i in range(n):
        h = min(half, i, n - 1 - i)
        out[i] = (csum[i + h + 1] - csum[i - h]) / (2 * h + 1)
    return out


def smooth(profile: CenterlineProfile, window: float) -> CenterlineProfile:
    """Return a copy of the profile with its local mean populated."""
    return replace(profile, local_mean_db=local_mean(profile, window))


def fluctuation_sd(profile: CenterlineProfile) -> float:
    """Population SD of the dB profile about its local mean.

    sigma = sqrt( (1/n) * sum_i (p_i - mu_i)^2 )
    """
    if profile.local_mean_db is None:
        raise DomainError("profile has no local mean; call smooth() first")
    if len(profile.p_db) == 0:
        raise EmptySpanError("profile is empty")
    resid = profile.p_db - profile.local_mean_db
    return float(np.sqrt(np.mean(resid * resid)))


def path_loss_fit(profile: CenterlineProfile, min_samples: int = 10) -> float:
    """Least-squares slope of the local mean, returned as +dB/m of loss."""
    if profile.local_mean_db is None:
        raise DomainError("profile has no local mean; call smooth() first")
    n = len(profile.x)
    if n < min_samples or profile.x[-1] <= profile.x[0]:
        raise DegenerateFitError(
            f"span of {n} samples is too short for a slope fit"
        )
    slope = np.polyfit(profile.x, profile.local_mean_db, 1)[0]
    return float(-slope)


def _interp_crossing(f0: float, f1: float, v0: float, v1: float, level: float) -> float:
    if v1 == v0:
        return f0
    return f0 + (level - v0) * (f1 - f0) / (v1 - v0)


def band_metrics(freqs: np.ndarray, s_db: np.ndarray, drop_db: float = 3.0) -> BandMetrics:
    """Peak frequency and the contiguous interval within ``drop_db`` of it.

    Band edges are linearly interpolated between samples.  A monotone
    spectrum has no peak to bracket and raises :class:`NoPeakError`; an edge
    that runs into the sweep boundary is reported truncated (with a warning).
    """
    freqs = np.asarray(freqs, dtype=float)
    s_db = np.asarray(s_db, dtype=float)
    if len(freqs) < 10:
        raise DomainError("spectrum needs at least 10 points")
    if len(freqs) != len(s_db):
        raise DomainError("freqs and spectrum lengths differ")
    diffs = np.diff(s_db)
    if np.all(diffs <= 0.0) or np.all(diffs >= 0.0):
        raise NoPeakError("spectrum is monotone; no interior peak")

    ip = int(np.argmax(s_db))
    peak = float(s_db[ip])
    level = peak - drop_db

    lo = ip
    while lo > 0 and s_db[lo - 1] >= level:
        lo -= 1
    hi = ip
    while hi < len(s_db) - 1 and s_db[hi + 1] >= level:
        hi += 1

    truncated_low = lo == 0
    truncated_high = hi == len(s_db) - 1
    f_lo = (freqs[0] if truncated_low
            else _interp_crossing(freqs[lo], freqs[lo - 1], s_db[lo], s_db[lo - 1], level))
    f_hi = (freqs[-1] if truncated_high
            else _interp_crossing(freqs[hi], freqs[hi + 1], s_db[hi], s_db[hi + 1], level))
    if truncated_low or truncated_high:
        warnings.warn("3-dB band truncated at the sweep boundary",
                      RuntimeWarning, stacklevel=2)
    return BandMetrics(
        f_peak=float(freqs[ip]),
        band_3db=(float(f_lo), float(f_hi)),
        peak_db=peak,
        truncated_low=truncated_low,
        truncated_high=truncated_high,
    )


def default_window(f: float, n_background: float, wavelengths: float = 2.0) -> float:
    """Default local-mean window: two effective wavelengths at the run frequency."""
    return wavelengths * C0 / (f * n_background)


def analyze_record(record: FieldRecord,
                   margins: float | tuple[float, float] = 0.05,
                   window: float | None = None,
                   reference_amplitude: float = 1.0) -> tuple[CenterlineProfile, AnalysisReport]:
    """Run the standard profile pipeline on one field record."""
    meta = record.metadata
    if window is None:
        window = default_window(meta["frequency"], meta["n_background"])
    prof = extract_centerline(record, margins, reference_amplitude)
    prof = smooth(prof, window)
    sigma = fluctuation_sd(prof)
    loss = path_loss_fit(prof)
    return prof, AnalysisReport(sigma_db=sigma, path_loss_db_per_m=loss)


def synthetic_profile(length: float, spacing: float, level_db: float = -20.0,
                      slope_db_per_m: float = 0.0, ripple_db: float = 0.0,
                      ripple_period: float = 5e-3) -> CenterlineProfile:
    """Synthetic dB profile with known slope and sinusoidal ripple (test input)."""
    x = np.arange(0.0, length + spacing / 2, spacing)
    p = level_db - slope_db_per_m * x
    if ripple_db:
        p = p + ripple_db * np.sin(2.0 * np.pi * x / ripple_period)
    return CenterlineProfile(x=x, p_db=p, analysis_span=(0.0, float(x[-1])))
