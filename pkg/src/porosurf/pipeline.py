"""Orchestration: resolved configs -> lattices, solver configs and reports.

Glue between the configuration layer and the physics modules, shared by the
CLI commands and the validation suite.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import analysis, geometry, material
from .fdtd import SimulationConfig, SourceConfig
from .geometry import CavityLattice, Rect


@dataclass(frozen=True)
class ModelDesign:
    """Design-chain outputs for one comparative model."""

    model_id: int
    w_l: float | None
    w_h: float | None
    rho: float
    eps_eff: float
    h: float
    n_background: float


def design_model(cfg: dict, model_id: int) -> ModelDesign:
    """Porosity, matched thickness and solver background index for a model."""
    s = cfg["surface"]
    lat = cfg["lattice"]
    w_l, w_h, interleaved = geometry.MODEL_PITCHES[model_id]
    rho = 0.0 if w_l is None else geometry.porosity_of(
        w_l, w_h, lat["radius"], interleaved)
    eps_eff = material.effective_permittivity(s["eps_r"], rho)
    delta = material.skin_depth(s["sigma_ground"], s["frequency"])
    h = material.solve_thickness(eps_eff, s["frequency"], delta, s["x_target"])
    spec = material.SurfaceSpec(
        eps_r=s["eps_r"], rho=rho, h=h, sigma_ground=s["sigma_ground"],
        sigma_fill=s["sigma_fill"], f=s["frequency"], x_target=s["x_target"])
    n_bg = material.background_index(spec, h)
    return ModelDesign(model_id=model_id, w_l=w_l, w_h=w_h, rho=rho,
                       eps_eff=eps_eff, h=h, n_background=n_bg)


def build_lattice(cfg: dict, model_id: int) -> CavityLattice:
    sim = cfg["simulation"]
    lat = cfg["lattice"]
    params = geometry.model_params(
        model_id,
        r=lat["radius"],
        w_c=lat["channel_width"],
        d=lat["channel_length"],
        wall_style=lat["wall_style"],
        wall_thickness=lat["wall_thickness"],
        wall_pitch=lat["wall_pitch"],
        overhang=(sim["standoff"] + sim["margin_before"], sim["margin_after"]),
        exterior_margin=lat["exterior_margin"],
        phase=lat["phase"],
    )
    return geometry.build_model(params)


def channel_domain(cfg: dict) -> Rect:
    sim = cfg["simulation"]
    lat = cfg["lattice"]
    r = lat["radius"]
    wall_t = lat["wall_thickness"] if lat["wall_thickness"] is not None else 2.0 * r
    y_half = (lat["channel_width"] / 2.0 + wall_t + lat["exterior_margin"]
              + sim["lateral_margin"] + sim["npml"] * sim["grid_step"])
    x0 = -(sim["standoff"] + sim["margin_before"])
    x1 = lat["channel_length"] + sim["margin_after"]
    return Rect(x0, x1, -y_half, y_half)


def simulation_config(cfg: dict, n_background: float,
                      waveform: str | None = None) -> SimulationConfig:
    """Solver config for a channel run; source/probes placed by convention.

    Source sits ``standoff`` before the channel entrance; the input probe
    halfway between source and entrance, the output probe halfway into the
    far margin.
    """
    sim = cfg["simulation"]
    lat = cfg["lattice"]
    src_cfg = sim["source"]
    source = SourceConfig(
        frequency=cfg["surface"]["frequency"],
        waveform=waveform or src_cfg["waveform"],
        amplitude=src_cfg["amplitude"],
        aperture_width=src_cfg["aperture_width"],
        transverse_profile=src_cfg["profile"],
        position=(-sim["standoff"], 0.0),
        ramp_periods=src_cfg["ramp_periods"],
    )
    probes = (
        (-sim["standoff"] / 2.0, 0.0),
        (lat["channel_length"] + sim["margin_after"] / 2.0, 0.0),
    )
    return SimulationConfig(
        grid_step=sim["grid_step"],
        domain=channel_domain(cfg),
        background_index=n_background,
        source=source,
        probes=probes,
        boundary=sim["boundary"],
        npml=sim["npml"],
        courant=sim["courant"],
        amplitude_mode=sim["amplitude_mode"],
        settle_transits=sim["settle_transits"],
        dft_periods=sim["dft_periods"],
        convergence_tol=sim["convergence_tol"],
        max_steps=sim["max_steps"],
        attenuation_db_per_m=sim["attenuation_db_per_m"],
    )


def analysis_options(cfg: dict, design: ModelDesign) -> tuple[float, float, float]:
    """(margin, window, reference_amplitude) for the profile pipeline."""
    an = cfg["analysis"]
    window = an["local_mean_window"]
    if window is None:
        window = analysis.default_window(cfg["surface"]["frequency"],
                                         design.n_background)
    return an["margin"], window, an["reference_amplitude"]
