"""Matplotlib figures written next to the delimited outputs.

Figures are saved as SVG without date metadata; the CSVs remain the
machine-readable contract.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import BandMetrics, CenterlineProfile
from .fdtd import FieldRecord

_SAVE_KW = {"metadata": {"Date": None}, "bbox_inches": "tight"}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return path


def plot_amplitude_map(record: FieldRecord, path: str | Path,
                       floor_db: float = -50.0) -> Path:
    amp = record.amplitude_map
    peak = float(amp.max()) if amp is not None else 0.0
    if peak <= 0.0:
        db = np.full(amp.shape, floor_db)
    else:
        db = 20.0 * np.log10(np.maximum(amp / peak, 10 ** (floor_db / 20.0)))
    fig, ax = plt.subplots(figsize=(10, 3.2))
    ex = record.extent
    im = ax.imshow(db.T, origin="lower", aspect="equal",
                   extent=[1e3 * ex[0], 1e3 * ex[1], 1e3 * ex[2], 1e3 * ex[3]],
                   cmap="inferno", vmin=floor_db, vmax=0.0)
    fig.colorbar(im, ax=ax, label="|E| (dB re peak)", shrink=0.9)
    ax.set_xlabel("x (mm)")
    ax.set_ylabel("y (mm)")
    ax.set_title("Steady-state field magnitude")
    return _save(fig, path)


def plot_profile(profile: CenterlineProfile, path: str | Path,
                 title: str = "Centreline power profile") -> Path:
    fig, ax = plt.subplots(figsize=(8, 3.6))
    ax.plot(1e3 * profile.x, profile.p_db, lw=0.9, label="profile")
    if profile.local_mean_db is not None:
        ax.plot(1e3 * profile.x, profile.local_mean_db, lw=1.6, label="local mean")
    ax.set_xlabel("x (mm)")
    ax.set_ylabel("power (dB)")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    return _save(fig, path)


def plot_sigma_vs_porosity(models: list[int], porosity_pct: list[float],
                           sigma_db: list[float], path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(porosity_pct, sigma_db, "o-", color="tab:blue")
    for m, p, s in zip(models, porosity_pct, sigma_db):
        ax.annotate(f"model {m}", (p, s), textcoords="offset points",
                    xytext=(6, 4), fontsize=8)
    ax.set_xlabel("porosity (%)")
    ax.set_ylabel("fluctuation SD (dB)")
    ax.set_title("Signal fluctuation vs porosity")
    ax.grid(True, alpha=0.3)
    return _save(fig, path)


def plot_spectrum(freqs: np.ndarray, s21_db: np.ndarray,
                  s11_db: np.ndarray | None, band: BandMetrics | None,
                  path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4))
    ghz = freqs / 1e9
    ax.plot(ghz, s21_db, label="S21 proxy", color="tab:blue")
    if s11_db is not None:
        ax.plot(ghz, s11_db, label="S11 proxy", color="tab:orange", lw=0.9)
    if band is not None:
        ax.axvspan(band.band_3db[0] / 1e9, band.band_3db[1] / 1e9,
                   color="tab:blue", alpha=0.15, label="3-dB band")
        ax.axvline(band.f_peak / 1e9, color="tab:red", ls="--", alpha=0.6,
                   label=f"peak {band.f_peak / 1e9:.2f} GHz")
    ax.set_xlabel("frequency (GHz)")
    ax.set_ylabel("level (dB)")
    ax.set_title("Transmission / reflection proxies")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_design_table(porosity_pct: np.ndarray, eps_eff: np.ndarray,
                      h_mm: np.ndarray, path: str | Path) -> Path:
    fig, ax1 = plt.subplots(figsize=(6, 4))
    ax1.plot(porosity_pct, eps_eff, "o-", color="tab:blue")
    ax1.set_xlabel("porosity (%)")
    ax1.set_ylabel("effective permittivity", color="tab:blue")
    ax2 = ax1.twinx()
    ax2.plot(porosity_pct, h_mm, "s--", color="tab:red")
    ax2.set_ylabel("matched thickness (mm)", color="tab:red")
    ax1.set_title("Surface design vs porosity")
    ax1.grid(True, alpha=0.3)
    return _save(fig, path)
