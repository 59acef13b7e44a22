"""2D effective-index time-domain solver for the channel models.

The guided 3D surface wave is reduced to a scalar out-of-plane field on a
horizontal 2D grid: the background carries the effective refractive index of
the unporous matched sheet, cavity disks are index-1 regions, and Galinstan
walls are perfect conductors.  A leapfrog update with convolutional perfectly
matched layers absorbs outgoing waves; a soft line source across the
transducer aperture launches the wave; steady-state amplitude is extracted by
a running single-frequency DFT over integer periods.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .constants import C0, EPS0, ETA0, MU0
from .errors import (
    DomainError,
    InstabilityError,
    ResolutionError,
    SteadyStateError,
)
from .geometry import CavityLattice, Rect


@dataclass(frozen=True)
class SourceConfig:
    """Excitation description.

    ``half_cosine`` tapers the aperture like the transducer's dominant mode;
    ``uniform`` is a flat aperture; ``sheet`` spans the whole domain height
    (plane-wave launch); ``point`` is a single cell.  ``position`` is the
    aperture centre; ``None`` lets the caller's orchestration place it.
    """

    frequency: float = 26e9
    waveform: str = "cw"                    # "cw" | "pulse"
    amplitude: float = 1.0
    aperture_width: float = 9.6e-3
    transverse_profile: str = "half_cosine"  # | "uniform" | "sheet" | "point"
    position: tuple[float, float] | None = None
    bandwidth: float | None = None          # pulse spectral half-width, Hz
    ramp_periods: float = 10.0              # cw soft turn-on

    def __post_init__(self) -> None:
        if self.frequency <= 0.0:
            raise DomainError(f"source frequency must be positive, got {self.frequency}")
        if self.waveform not in ("cw", "pulse"):
            raise DomainError(f"unknown waveform {self.waveform!r}")
        if self.transverse_profile not in ("half_cosine", "uniform", "sheet", "point"):
            raise DomainError(f"unknown transverse profile {self.transverse_profile!r}")
        if self.amplitude < 0.0:
            raise DomainError("amplitude must be non-negative")


@dataclass(frozen=True)
class SimulationConfig:
    """Grid, boundary, source, probe and runtime settings for one run."""

    grid_step: float
    domain: Rect
    background_index: float
    cavity_index: float = 1.0
    source: SourceConfig = field(default_factory=SourceConfig)
    probes: tuple[tuple[float, float], ...] = ()
    boundary: str = "cpml"                  # "cpml" | "pec"
    npml: int = 10
    courant: float = 0.95
    precision: str = "float32"              # field storage; "float64" available
    record_map: bool = True
    amplitude_mode: str = "dft"             # "dft" | "peak"
    settle_transits: float = 3.0
    dft_periods: int = 8
    convergence_tol: float = 1e-3   # relative L2 change of the map per window
    max_steps: int = 200_000
    spectrum_frequencies: tuple[float, ...] = ()
    attenuation_db_per_m: float = 0.0
    divergence_factor: float = 1e6
    check_interval: int = 250
    pulse_decay_tol: float = 1e-4

    def __post_init__(self) -> None:
        if self.grid_step <= 0.0:
            raise DomainError("grid_step must be positive")
        d = self.domain
        if not isinstance(d, Rect):
            object.__setattr__(self, "domain", Rect(*d))
            d = self.domain
        if d.width <= 0.0 or d.height <= 0.0:
            raise DomainError(f"degenerate domain {d}")
        if self.background_index < 1.0 or self.cavity_index < 1.0:
            raise DomainError("refractive indices must be >= 1")
        if not 0.0 < self.courant <= 0.99:
            raise DomainError("courant must lie in (0, 0.99]")
        if self.boundary not in ("cpml", "pec"):
            raise DomainError(f"unknown boundary {self.boundary!r}")
        if self.amplitude_mode not in ("dft", "peak"):
            raise DomainError(f"unknown amplitude_mode {self.amplitude_mode!r}")
        if self.precision not in ("float32", "float64"):
            raise DomainError(f"unknown precision {self.precision!r}")
        if self.npml < 0 or self.max_steps < 1 or self.dft_periods < 1:
            raise DomainError("npml, max_steps and dft_periods must be positive")

    @property
    def min_index(self) -> float:
        # Lattice-independent: cavities may appear anywhere, so the stability
        # bound always assumes the fastest medium the config can contain.
        return min(self.background_index, self.cavity_index)

    def time_step(self) -> float:
        """Stable time step; snapped to an integer divisor of the CW period."""
        dt = self.courant * self.grid_step * self.min_index / (C0 * math.sqrt(2.0))
        if self.source.waveform == "cw":
            period = 1.0 / self.source.frequency
            dt = period / math.ceil(period / dt)
        return dt

    def wavelength_cells(self, f: float | None = None) -> float:
        f = self.source.frequency if f is None else f
        return C0 / (f * self.background_index) / self.grid_step


@dataclass(frozen=True)
class MaterialGrid:
    """Per-node refractive index and conductor mask on the solver grid."""

    index: np.ndarray      # (nx, ny) refractive index
    mask: np.ndarray       # (nx, ny) 1.0 interior, 0.0 conductor
    x: np.ndarray          # node coordinates, m
    y: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.index.shape


@dataclass
class FieldRecord:
    """Output of one run: steady amplitude map, probe series and spectra."""

    amplitude_map: np.ndarray | None
    x: np.ndarray
    y: np.ndarray
    probe_series: np.ndarray            # (n_probes, n_steps)
    probe_times: np.ndarray
    probe_spectra: np.ndarray | None    # (n_probes, n_freqs), complex
    spectrum_freqs: np.ndarray | None
    metadata: dict

    @property
    def extent(self) -> tuple[float, float, float, float]:
        return (self.x[0], self.x[-1], self.y[0], self.y[-1])


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(math.ceil((hi - lo) / step - 1e-9)) + 1
    return lo + step * np.arange(n)


def rasterize(lattice: CavityLattice | None, config: SimulationConfig) -> MaterialGrid:
    """Sample the lattice onto the solver grid by node-inclusion tests."""
    dom = config.domain
    x = _axis(dom.x0, dom.x1, config.grid_step)
    y = _axis(dom.y0, dom.y1, config.grid_step)
    nx, ny = len(x), len(y)
    index = np.full((nx, ny), config.background_index)
    mask = np.ones((nx, ny))
    if lattice is None:
        return MaterialGrid(index=index, mask=mask, x=x, y=y)

    bb = lattice.bounding_box
    tol = 1e-9
    if not (dom.x0 - tol <= bb.x0 and bb.x1 <= dom.x1 + tol
            and dom.y0 - tol <= bb.y0 and bb.y1 <= dom.y1 + tol):
        # Walls may overhang (they are clipped); disks must fit.
        for d in lattice.cavity_disks + lattice.wall_disks:
            if not (dom.x0 <= d.x - d.r and d.x + d.r <= dom.x1
                    and dom.y0 <= d.y - d.r and d.y + d.r <= dom.y1):
                raise DomainError(f"disk {d} does not fit in the domain {dom}")

    for d in lattice.cavity_disks + lattice.wall_disks:
        if 2.0 * d.r / config.grid_step < 6.0 - 1e-9:
            raise ResolutionError(
                f"disk diameter {2 * d.r:.4g} m spans fewer than 6 cells at "
                f"grid_step {config.grid_step:.4g} m"
            )

    def node_slices(x0, x1, y0, y1):
        i0 = max(0, int(math.ceil((x0 - dom.x0) / config.grid_step - 1e-9)))
        i1 = min(nx - 1, int(math.floor((x1 - dom.x0) / config.grid_step + 1e-9)))
        j0 = max(0, int(math.ceil((y0 - dom.y0) / config.grid_step - 1e-9)))
        j1 = min(ny - 1, int(math.floor((y1 - dom.y0) / config.grid_step + 1e-9)))
        return i0, i1, j0, j1

    def disk_nodes(d):
        i0, i1, j0, j1 = node_slices(d.x - d.r, d.x + d.r, d.y - d.r, d.y + d.r)
        if i1 < i0 or j1 < j0:
            return None
        xx = x[i0:i1 + 1, None] - d.x
        yy = y[None, j0:j1 + 1] - d.y
        inside = xx * xx + yy * yy <= d.r * d.r
        return i0, i1, j0, j1, inside

    for d in lattice.cavity_disks:
        hit = disk_nodes(d)
        if hit:
            i0, i1, j0, j1, inside = hit
            index[i0:i1 + 1, j0:j1 + 1][inside] = config.cavity_index
    for s in lattice.wall_strips:
        i0, i1, j0, j1 = node_slices(s.x0, s.x1, s.y0, s.y1)
        if i1 >= i0 and j1 >= j0:
            mask[i0:i1 + 1, j0:j1 + 1] = 0.0
    for d in lattice.wall_disks:
        hit = disk_nodes(d)
        if hit:
            i0, i1, j0, j1, inside = hit
            mask[i0:i1 + 1, j0:j1 + 1][inside] = 0.0
    return MaterialGrid(index=index, mask=mask, x=x, y=y)


def attenuation_conductivity(db_per_m: float, f: float, n_bg: float,
                             channel_width: float | None = None) -> float:
    """Uniform conductivity realising a target dB/m along the channel axis.

    For a channel of width w the fundamental guided mode sees the bulk loss
    enhanced by k n / beta, so sigma is derated accordingly:
    sigma = 2 alpha beta / (eta0 k0), beta = sqrt((k0 n)^2 - (pi/w)^2).
    Without walls the plane-wave (bulk) conversion applies.
    """
    if db_per_m == 0.0:
        return 0.0
    if db_per_m < 0.0:
        raise DomainError("attenuation must be non-negative")
    alpha_np = db_per_m * math.log(10.0) / 20.0
    k0 = 2.0 * math.pi * f / C0
    if channel_width is not None:
        beta_sq = (k0 * n_bg) ** 2 - (math.pi / channel_width) ** 2
        if beta_sq <= 0.0:
            raise DomainError("channel is below cutoff at this frequency")
        return 2.0 * alpha_np * math.sqrt(beta_sq) / (ETA0 * k0)
    return 2.0 * alpha_np * n_bg / ETA0


def _cpml_profiles(n_nodes: int, npml: int, dt: float, dx: float, n_bg: float,
                   half: bool) -> tuple[np.ndarray, np.ndarray]:
    """1D CPML recursion coefficients (b, c) along one axis.

    Cubic-graded conductivity, kappa = 1, linearly graded CFS alpha.
    ``half`` selects the staggered (H) positions; positions are measured in
    node units so both sub-grids share the same PML interfaces at node
    ``npml`` and node ``n_nodes - 1 - npml``.
    """
    m = 3.0
    sigma_max = 0.8 * (m + 1.0) / (ETA0 * dx * n_bg)
    alpha_max = 0.05
    n = n_nodes - 1 if half else n_nodes
    b = np.ones(n)
    c = np.zeros(n)
    if npml <= 0:
        return b, c
    pos = np.arange(n) + (0.5 if half else 0.0)
    depth = np.maximum(npml - pos, pos - (n_nodes - 1 - npml)) / npml
    depth = np.clip(depth, 0.0, 1.0)
    sig = sigma_max * depth ** m
    alp = alpha_max * (1.0 - depth)
    active = depth > 0.0
    b[active] = np.exp(-(sig[active] + alp[active]) * dt / EPS0)
    c[active] = sig[active] / (sig[active] + alp[active]) * (b[active] - 1.0)
    return b, c


def _source_terms(config: SimulationConfig, grid: MaterialGrid):
    """Source cell indices, transverse profile and time waveform."""
    src = config.source
    if src.position is None:
        raise DomainError("source position must be set before running")
    xs, ys = src.position
    i_src = int(round((xs - grid.x[0]) / config.grid_step))
    if not 1 <= i_src <= len(grid.x) - 2:
        raise DomainError(f"source x={xs} lies outside the domain interior")

    ny = len(grid.y)
    if src.transverse_profile == "sheet":
        j0, j1 = 1, ny - 1
        prof = np.ones(j1 - j0)
    elif src.transverse_profile == "point":
        j = int(round((ys - grid.y[0]) / config.grid_step))
        j = min(max(j, 1), ny - 2)
        j0, j1 = j, j + 1
        prof = np.ones(1)
    else:
        yy = grid.y - ys
        inside = np.abs(yy) <= src.aperture_width / 2.0 + 1e-12
        inside[0] = inside[-1] = False  # boundary nodes stay PEC-backed
        jj = np.nonzero(inside)[0]
        if len(jj) == 0:
            raise DomainError("source aperture does not overlap the grid")
        j0, j1 = int(jj[0]), int(jj[-1]) + 1
        if src.transverse_profile == "half_cosine":
            prof = np.cos(np.pi * yy[j0:j1] / src.aperture_width)
        else:
            prof = np.ones(j1 - j0)
    prof = prof * grid.mask[i_src, j0:j1] * src.amplitude
    return i_src, j0, j1, prof


def _waveform(config: SimulationConfig, dt: float):
    """Scalar source waveform s(n) and bookkeeping times."""
    src = config.source
    w = 2.0 * math.pi * src.frequency
    if src.waveform == "cw":
        t_ramp = src.ramp_periods / src.frequency

        def s(n: int) -> float:
            t = n * dt
            ramp = 1.0 if t >= t_ramp else 0.5 * (1.0 - math.cos(math.pi * t / t_ramp))
            return ramp * math.sin(w * t)

        return s, 0.0

    bw = src.bandwidth if src.bandwidth is not None else src.frequency / 4.0
    tau = math.sqrt(math.log(10.0)) / (math.pi * bw)  # -20 dB at +-bw
    t0 = 4.5 * tau

    def s(n: int) -> float:
        t = n * dt - t0
        return math.exp(-(t / tau) ** 2) * math.sin(w * t)

    return s, 2.0 * t0


def run(config: SimulationConfig, lattice: CavityLattice | None = None) -> FieldRecord:
    """Advance the field to steady state (CW) or until pulse decay.

    Deterministic for a fixed config regardless of worker-thread count.
    Raises :class:`InstabilityError` on divergence and
    :class:`SteadyStateError` if the CW amplitude map has not converged
    within ``max_steps``.
    """
    t_start = time.perf_counter()
    grid = rasterize(lattice, config)
    nx, ny = grid.shape
    dx = config.grid_step
    if config.boundary == "cpml" and min(nx, ny) <= 2 * config.npml + 4:
        raise DomainError("domain too small for the requested CPML thickness")

    lam_cells = config.wavelength_cells()
    if lam_cells < 10.0:
        raise ResolutionError(
            f"background wavelength spans only {lam_cells:.1f} cells; need >= 10"
        )

    dt = config.time_step()
    npml = config.npml if config.boundary == "cpml" else 0
    be_x, ce_x = _cpml_profiles(nx, npml, dt, dx, config.background_index, half=False)
    be_y, ce_y = _cpml_profiles(ny, npml, dt, dx, config.background_index, half=False)
    bh_x, ch_x = _cpml_profiles(nx, npml, dt, dx, config.background_index, half=True)
    bh_y, ch_y = _cpml_profiles(ny, npml, dt, dx, config.background_index, half=True)

    def interior(c):
        idx = np.nonzero(c == 0.0)[0]
        return (int(idx[0]), int(idx[-1]) + 1) if len(idx) else (0, 0)

    jlo_h, jhi_h = interior(ch_y)
    jlo_e, jhi_e = interior(ce_y)
    jlo_e, jhi_e = max(jlo_e, 1), min(jhi_e, ny - 1)

    eps = EPS0 * grid.index ** 2
    sigma_loss = 0.0
    if config.attenuation_db_per_m:
        w_chan = lattice.channel.height if (lattice is not None and lattice.has_walls) else None
        sigma_loss = attenuation_conductivity(
            config.attenuation_db_per_m, config.source.frequency,
            config.background_index, w_chan)
    loss = sigma_loss * dt / (2.0 * eps)
    ca = (1.0 - loss) / (1.0 + loss)
    cb = (dt / (eps * dx)) / (1.0 + loss) * grid.mask  # cb == 0 marks conductors

    dtype = np.float32 if config.precision == "float32" else np.float64
    ca = ca.astype(dtype)
    cb = cb.astype(dtype)
    hcoef = dtype(dt / (MU0 * dx))
    be_x, ce_x, be_y, ce_y = (a.astype(dtype) for a in (be_x, ce_x, be_y, ce_y))
    bh_x, ch_x, bh_y, ch_y = (a.astype(dtype) for a in (bh_x, ch_x, bh_y, ch_y))

    ez = np.zeros((nx, ny), dtype)
    hx = np.zeros((nx, ny - 1), dtype)
    hy = np.zeros((nx - 1, ny), dtype)
    psi_ex = np.zeros((nx, ny), dtype)
    psi_ey = np.zeros((nx, ny), dtype)
    psi_hx = np.zeros((nx, ny - 1), dtype)
    psi_hy = np.zeros((nx - 1, ny), dtype)

    i_src, j0, j1, prof = _source_terms(config, grid)
    s_of_n, t_src_off = _waveform(config, dt)

    probe_idx = []
    for (px, py) in config.probes:
        pi = int(round((px - grid.x[0]) / dx))
        pj = int(round((py - grid.y[0]) / dx))
        if not (0 <= pi < nx and 0 <= pj < ny):
            raise DomainError(f"probe ({px}, {py}) lies outside the domain")
        probe_idx.append((pi, pj))
    series: list[list[float]] = [[] for _ in probe_idx]

    freqs = np.asarray(config.spectrum_frequencies, dtype=float)
    spec_acc = (np.zeros((len(probe_idx), len(freqs)), dtype=complex)
                if len(freqs) and probe_idx else None)
    omega = 2.0 * np.pi * freqs

    cw = config.source.waveform == "cw"
    f0 = config.source.frequency
    w0 = 2.0 * math.pi * f0
    spp = int(round(1.0 / (f0 * dt))) if cw else 0
    transit = config.domain.width * config.background_index / C0
    settle_steps = int(math.ceil(config.settle_transits * transit / dt))
    window_steps = config.dft_periods * spp if cw else 0
    min_pulse_steps = int(math.ceil((t_src_off + 2.0 * transit) / dt))

    acc_re = np.zeros((nx, ny))
    acc_im = np.zeros((nx, ny))
    peak = np.zeros((nx, ny), dtype)
    prev_map: np.ndarray | None = None
    amp_map: np.ndarray | None = None
    converged = False
    decayed = False
    conv_history: list[float] = []
    global_peak = 0.0
    n = 0

    lossy = sigma_loss != 0.0
    while n < config.max_steps:
        _kernels.update_h(ez, hx, hy, psi_hx, psi_hy, bh_x, ch_x, bh_y, ch_y,
                          hcoef, jlo_h, jhi_h)
        if lossy:
            _kernels.update_e_lossy(ez, hx, hy, psi_ex, psi_ey,
                                    be_x, ce_x, be_y, ce_y, ca, cb,
                                    jlo_e, jhi_e)
        else:
            _kernels.update_e(ez, hx, hy, psi_ex, psi_ey,
                              be_x, ce_x, be_y, ce_y, cb, jlo_e, jhi_e)
        ez[i_src, j0:j1] += prof * s_of_n(n)

        t_n = n * dt
        for p, (pi, pj) in enumerate(probe_idx):
            series[p].append(ez[pi, pj])

        if cw:
            in_window = n >= settle_steps
            if in_window:
                k = n - settle_steps
                if k % window_steps == 0:
                    acc_re.fill(0.0)
                    acc_im.fill(0.0)
                    peak.fill(0.0)
                    if spec_acc is not None:
                        spec_acc.fill(0.0)
                _kernels.accumulate_dft(ez, acc_re, acc_im,
                                        math.cos(w0 * t_n), math.sin(w0 * t_n))
                if config.amplitude_mode == "peak":
                    _kernels.track_peak(ez, peak)
                if spec_acc is not None:
                    phases = np.exp(-1j * omega * t_n)
                    for p, (pi, pj) in enumerate(probe_idx):
                        spec_acc[p] += ez[pi, pj] * phases
                if (k + 1) % window_steps == 0:
                    if config.amplitude_mode == "peak":
                        cur = peak.astype(np.float64)
                    else:
                        cur = np.hypot(acc_re, acc_im) * (2.0 / window_steps)
                    if prev_map is not None:
                        diff = float(np.linalg.norm(cur - prev_map))
                        ref = float(np.linalg.norm(cur))
                        rel = 0.0 if ref == 0.0 else diff / ref
                        conv_history.append(rel)
                        if rel < config.convergence_tol:
                            amp_map = cur
                            converged = True
                    prev_map = cur
        else:
            if config.record_map:
                _kernels.track_peak(ez, peak)
            if spec_acc is not None:
                phases = np.exp(-1j * omega * t_n)
                for p, (pi, pj) in enumerate(probe_idx):
                    spec_acc[p] += ez[pi, pj] * phases

        n += 1
        if n % config.check_interval == 0 or converged:
            m = float(np.max(np.abs(ez)))
            if not math.isfinite(m) or m > config.divergence_factor * max(config.source.amplitude, 1e-300):
                raise InstabilityError(
                    f"field magnitude {m:.3g} exceeded the divergence threshold at step {n}"
                )
            global_peak = max(global_peak, m)
            if converged:
                break
            if (not cw and n >= min_pulse_steps
                    and m < config.pulse_decay_tol * global_peak):
                decayed = True
                break

    if cw and not converged:
        tail = ", ".join(f"{v:.2e}" for v in conv_history[-5:])
        err = SteadyStateError(
            f"amplitude map not converged to {config.convergence_tol} "
            f"within {config.max_steps} steps (last window deltas: {tail})"
        )
        err.history = conv_history
        raise err
    if not cw and not decayed:
        warnings.warn("pulse had not decayed by max_steps; spectra may leak",
                      RuntimeWarning, stacklevel=2)

    if not cw and config.record_map:
        amp_map = peak.astype(np.float64)

    if spec_acc is not None:
        if cw:
            spec = spec_acc * (2.0 / window_steps)
        else:
            spec = spec_acc * dt
    else:
        spec = None

    if not np.all(np.isfinite(ez)):
        raise InstabilityError("non-finite field values at end of run")

    meta = {
        "dt": dt,
        "dx": dx,
        "steps": n,
        "settle_steps": settle_steps if cw else 0,
        "window_steps": window_steps,
        "domain": tuple(config.domain),
        "npml": npml,
        "nx": nx,
        "ny": ny,
        "n_background": config.background_index,
        "frequency": f0,
        "precision": config.precision,
        "waveform": config.source.waveform,
        "amplitude_mode": config.amplitude_mode,
        "source_position": config.source.position,
        "sigma_loss": sigma_loss,
        "channel": tuple(lattice.channel) if lattice is not None else None,
        "convergence_history": conv_history,
        "wall_clock_s": time.perf_counter() - t_start,
    }
    return FieldRecord(
        amplitude_map=amp_map if config.record_map else None,
        x=grid.x,
        y=grid.y,
        probe_series=np.asarray(series, dtype=float) if probe_idx else np.zeros((0, n)),
        probe_times=dt * np.arange(n),
        probe_spectra=spec,
        spectrum_freqs=freqs if spec is not None else None,
        metadata=meta,
    )


@dataclass(frozen=True)
class SweepResult:
    """Self-normalised transmission/reflection proxies over a band."""

    freqs: np.ndarray
    s11: np.ndarray      # complex
    s21: np.ndarray      # complex
    metadata: dict

    @property
    def s11_db(self) -> np.ndarray:
        return 20.0 * np.log10(np.maximum(np.abs(self.s11), 1e-300))

    @property
    def s21_db(self) -> np.ndarray:
        return 20.0 * np.log10(np.maximum(np.abs(self.s21), 1e-300))


def check_band_resolution(config: SimulationConfig, f_hi: float,
                          cells_per_wavelength: float = 15.0) -> None:
    n_max = max(config.background_index, config.cavity_index)
    cells = C0 / (f_hi * n_max) / config.grid_step
    if cells < cells_per_wavelength:
        raise ResolutionError(
            f"{cells:.1f} cells per wavelength at {f_hi / 1e9:.3g} GHz; "
            f"need >= {cells_per_wavelength}"
        )


def sweep(config: SimulationConfig, lattice: CavityLattice | None,
          band: tuple[float, float], n_points: int) -> SweepResult:
    """Broadband pulse run plus an empty reference run, ratioed per frequency.

    Probes: the first config probe is the input (reflection) sample, the
    second the output (transmission) sample.
    """
    f_lo, f_hi = band
    if not 0.0 < f_lo < f_hi:
        raise DomainError(f"invalid band {band}")
    if n_points < 2:
        raise DomainError("n_points must be at least 2")
    if len(config.probes) < 2:
        raise DomainError("sweep needs an input and an output probe")
    check_band_resolution(config, f_hi)

    freqs = np.linspace(f_lo, f_hi, n_points)
    fc = 0.5 * (f_lo + f_hi)
    pulse_cfg = replace(
        config,
        source=replace(config.source, waveform="pulse", frequency=fc,
                       bandwidth=0.5 * (f_hi - f_lo)),
        spectrum_frequencies=tuple(freqs),
        record_map=False,
    )
    rec = run(pulse_cfg, lattice)
    ref = run(pulse_cfg, None)

    inc_in = ref.probe_spectra[0]
    inc_out = ref.probe_spectra[1]
    s11 = (rec.probe_spectra[0] - inc_in) / inc_in
    s21 = rec.probe_spectra[1] / inc_out
    meta = {
        "band": (f_lo, f_hi),
        "n_points": n_points,
        "center_frequency": fc,
        "steps_structure": rec.metadata["steps"],
        "steps_reference": ref.metadata["steps"],
    }
    return SweepResult(freqs=freqs, s11=s11, s21=s21, metadata=meta)
