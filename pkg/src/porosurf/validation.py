"""Built-in validation suite: oracle comparisons with pass/fail thresholds.

Each check returns a :class:`CheckResult` with the measured value and its
threshold; the CLI ``validate`` command prints one line per check and the
acceptance tests reuse the same functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry, material
from .cylinder import analytic_cylinder_scatter, circle_points
from .errors import ResolutionError
from .fdtd import Rect, SimulationConfig, SourceConfig, rasterize, run
from .geometry import single_disk_lattice

TABLE_RHO_PCT = (0.0, 7.85, 11.78, 15.71, 19.63, 39.26)
TABLE_EPS_EFF = (2.10, 2.00, 1.95, 1.91, 1.86, 1.63)
TABLE_H_MM = (2.50, 2.63, 2.69, 2.77, 2.85, 3.40)


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    threshold: float
    passed: bool
    detail: str = ""


def _result(name: str, measured: float, threshold: float, detail: str = "") -> CheckResult:
    return CheckResult(name=name, measured=measured, threshold=threshold,
                       passed=bool(measured <= threshold), detail=detail)


def check_design_table(cfg: dict | None = None) -> list[CheckResult]:
    """Effective permittivity and matched thickness against the reference rows."""
    from .config import DEFAULT_CONFIG
    from .pipeline import design_model

    cfg = cfg or DEFAULT_CONFIG
    eps_dev = 0.0
    h_dev = 0.0
    rho_dev = 0.0
    for m in range(6):
        des = design_model(cfg, m)
        rho_dev = max(rho_dev, abs(des.rho * 100.0 - TABLE_RHO_PCT[m]))
        eps_dev = max(eps_dev, abs(round(des.eps_eff, 2) - TABLE_EPS_EFF[m]))
        h_dev = max(h_dev, abs(des.h * 1e3 - TABLE_H_MM[m]))
    return [
        _result("porosity vs reference table (pp)", rho_dev, 0.05),
        _result("eps_eff vs reference table (2 dp)", eps_dev, 0.0),
        _result("matched thickness vs reference table (mm)", h_dev, 0.02),
    ]


def check_porosity_oracle() -> CheckResult:
    """Formula porosity against the geometric area oracle on whole unit cells."""
    worst = 0.0
    for m in (1, 2, 3, 4, 5):
        params = geometry.model_params(m, d=0.06)
        lat = geometry.build_model(params)
        s = params.w_l if not params.interleaved else params.w_l / np.sqrt(2.0)
        pitch_y = params.w_h if not params.interleaved else s
        pitch_x = params.w_l if not params.interleaved else 2.0 * s
        # whole unit cells centred on the innermost rows
        region = Rect(pitch_x, 5.0 * pitch_x, -pitch_y, pitch_y)
        rho_geo = geometry.lattice_porosity(lat, region)
        rho_formula = geometry.porosity_of(params.w_l, params.w_h, params.r,
                                           params.interleaved)
        worst = max(worst, abs(rho_geo - rho_formula) * 100.0)
    return _result("formula vs area-oracle porosity (pp)", worst, 0.1)


def check_thickness_roundtrip(n_samples: int = 1000, seed: int = 20260810) -> CheckResult:
    """Reactance of the solved thickness must recover the target < 0.01 ohm."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        eps_eff = rng.uniform(1.01, 4.0)
        f = rng.uniform(5e9, 60e9)
        delta = material.skin_depth(rng.uniform(1e6, 6e7), f)
        floor = 2.0 * np.pi * f * 4e-7 * np.pi * delta / 2.0
        x_target = rng.uniform(floor * 1.01 + 1.0, 600.0)
        h = material.solve_thickness(eps_eff, f, delta, x_target)
        x_back = material.surface_reactance(eps_eff, h, f, delta)
        worst = max(worst, abs(x_back - x_target))
    return _result("thickness round-trip residual (ohm)", worst, 0.01)


def _bilinear(record, pts: np.ndarray) -> np.ndarray:
    gs = record.metadata["dx"]
    xi = (pts[:, 0] - record.x[0]) / gs
    yi = (pts[:, 1] - record.y[0]) / gs
    i0 = np.floor(xi).astype(int)
    j0 = np.floor(yi).astype(int)
    fx = xi - i0
    fy = yi - j0
    m = record.amplitude_map
    return (m[i0, j0] * (1 - fx) * (1 - fy) + m[i0 + 1, j0] * fx * (1 - fy)
            + m[i0, j0 + 1] * (1 - fx) * fy + m[i0 + 1, j0 + 1] * fx * fy)


def cylinder_scatter_rms(grid_step: float, radius: float = 0.5e-3,
                         n_bg: float = 1.23, f: float = 26e9,
                         ring_radius: float = 5e-3, n_ring: int = 72) -> float:
    """RMS mismatch between the solver and the series oracle on a ring.

    Plane-wave launch via a full-height source sheet; the empty-domain twin
    run normalises the incident amplitude out.
    """
    cfg = SimulationConfig(
        grid_step=grid_step,
        domain=Rect(-8e-3, 7.5e-3, -8e-3, 8e-3),
        background_index=n_bg,
        cavity_index=n_bg,
        source=SourceConfig(frequency=f, waveform="cw",
                            transverse_profile="sheet", position=(-6.5e-3, 0.0)),
        npml=10,
    )
    lat = single_disk_lattice(radius, half_extent=ring_radius * 0.9, conductor=True)
    rec_c = run(cfg, lat)
    rec_0 = run(cfg, None)
    pts = circle_points(ring_radius, n_ring)
    a0 = _bilinear(rec_0, np.array([[0.0, 0.0]]))[0]
    u_f = _bilinear(rec_c, pts) / a0
    u_o = np.abs(analytic_cylinder_scatter(radius, n_bg, f, True, pts))
    return float(np.sqrt(np.mean((u_f - u_o) ** 2)) / np.sqrt(np.mean(u_o ** 2)))


def check_cylinder_oracle(refine: bool = True) -> list[CheckResult]:
    r = 0.5e-3
    e10 = cylinder_scatter_rms(r / 10.0)
    out = [_result("disk scattering vs series oracle, RMS", e10, 0.05)]
    if refine:
        e20 = cylinder_scatter_rms(r / 20.0)
        out.append(CheckResult(
            name="oracle RMS decreases under 2x refinement",
            measured=e20, threshold=e10, passed=bool(e20 < e10),
            detail=f"order {np.log2(e10 / max(e20, 1e-12)):.2f}",
        ))
    return out


def check_spreading(grid_step: float = 0.4e-3, n_bg: float = 1.23,
                    f: float = 26e9) -> CheckResult:
    """Line-source amplitude ratio A(50 mm)/A(100 mm) against sqrt(2)."""
    cfg = SimulationConfig(
        grid_step=grid_step,
        domain=Rect(-0.02, 0.13, -0.06, 0.06),
        background_index=n_bg,
        cavity_index=n_bg,
        source=SourceConfig(frequency=f, waveform="cw",
                            transverse_profile="point", position=(0.0, 0.0)),
        npml=10,
    )
    rec = run(cfg)
    a = _bilinear(rec, np.array([[0.05, 0.0], [0.10, 0.0]]))
    ratio = float(a[0] / a[1])
    dev = abs(ratio / np.sqrt(2.0) - 1.0)
    return _result("spreading ratio A(50mm)/A(100mm) vs sqrt(2)", dev, 0.03,
                   detail=f"ratio {ratio:.4f}")


def check_boundary_reflection(grid_step: float = 0.4e-3, n_bg: float = 1.23,
                              f: float = 26e9) -> CheckResult:
    """Edge reflection from an empty CPML-bounded domain, via an enlarged twin."""
    def cfg_for(half: float) -> SimulationConfig:
        return SimulationConfig(
            grid_step=grid_step,
            domain=Rect(-half, half, -half, half),
            background_index=n_bg,
            cavity_index=n_bg,
            source=SourceConfig(frequency=f, waveform="pulse", bandwidth=8e9,
                                transverse_profile="point", position=(0.0, 0.0)),
            probes=((0.02, 0.0),),
            npml=10,
            record_map=False,
            max_steps=1500,
            pulse_decay_tol=1e-12,
        )

    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        small = run(cfg_for(0.04))
        big = run(cfg_for(0.12))
    a = small.probe_series[0]
    b = big.probe_series[0]
    n = min(len(a), len(b))
    refl = float(np.max(np.abs(a[:n] - b[:n])) / np.max(np.abs(b[:n])))
    return _result("boundary reflection (relative amplitude)", refl, 0.01)


def check_rasterize_resolution() -> CheckResult:
    """A disk coarser than 6 cells across must be rejected."""
    lat = single_disk_lattice(0.5e-3, half_extent=2e-3, conductor=True)
    cfg = SimulationConfig(
        grid_step=0.25e-3,  # 4 cells per diameter
        domain=Rect(-2e-3, 2e-3, -2e-3, 2e-3),
        background_index=1.23,
    )
    try:
        rasterize(lat, cfg)
    except ResolutionError:
        return CheckResult(name="coarse-disk rasterization rejected",
                           measured=1.0, threshold=1.0, passed=True)
    return CheckResult(name="coarse-disk rasterization rejected",
                       measured=0.0, threshold=1.0, passed=False,
                       detail="ResolutionError not raised")


def full_suite(quick: bool = False) -> list[CheckResult]:
    """All validation checks; ``quick`` skips the long field-solver runs."""
    results: list[CheckResult] = []
    results.extend(check_design_table())
    results.append(check_porosity_oracle())
    results.append(check_thickness_roundtrip())
    results.append(check_rasterize_resolution())
    if not quick:
        results.append(check_boundary_reflection())
        results.append(check_spreading())
        results.extend(check_cylinder_oracle(refine=True))
    return results
