"""Configuration ingestion: YAML file, schema validation, defaults, manifest.

The configuration format is YAML (the one canonical format for this tool);
the schema ships with the package at ``porosurf/schema/config.schema.json``.
Syntax errors are reported with line/column, schema violations with the
offending field path.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import yaml

from . import __version__
from .errors import ConfigError
from .material import SurfaceSpec

DEFAULT_CONFIG: dict = {
    "surface": {
        "eps_r": 2.1,
        "sigma_ground": 59.6e6,
        "sigma_fill": 3.46e6,
        "frequency": 26e9,
        "x_target": 270.0,
    },
    "lattice": {
        "radius": 0.5e-3,
        "channel_width": 9.0e-3,
        "channel_length": 0.3,
        "wall_style": "strips",
        "wall_thickness": None,
        "wall_pitch": None,
        "exterior_margin": 0.0,
        "phase": None,
    },
    "simulation": {
        "grid_step": 1.0e-4,
        "courant": 0.95,
        "npml": 10,
        "boundary": "cpml",
        "amplitude_mode": "dft",
        "settle_transits": 3.0,
        "dft_periods": 8,
        "convergence_tol": 1.0e-3,
        "max_steps": 200_000,
        "attenuation_db_per_m": 0.0,
        "standoff": 0.015,
        "margin_before": 0.010,
        "margin_after": 0.015,
        "lateral_margin": 0.0025,
        "source": {
            "waveform": "cw",
            "amplitude": 1.0,
            "aperture_width": 9.6e-3,
            "profile": "half_cosine",
            "ramp_periods": 10.0,
        },
    },
    "analysis": {
        "margin": 0.05,
        "local_mean_window": None,
        "reference_amplitude": 1.0,
    },
    "output": {
        "figures": True,
    },
}

_NUMERIC_RE = re.compile(r"^[-+]?(\d+\.?\d*|\.\d+)[eE][-+]?\d+$")


def _coerce_numbers(node):
    """Turn exponent-style strings into floats (YAML 1.1 resolver quirk)."""
    if isinstance(node, dict):
        return {k: _coerce_numbers(v) for k, v in node.items()}
    if isinstance(node, list):
        return [_coerce_numbers(v) for v in node]
    if isinstance(node, str) and _NUMERIC_RE.match(node):
        return float(node)
    return node


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def load_schema() -> dict:
    with resources.files("porosurf.schema").joinpath("config.schema.json").open() as fh:
        return json.load(fh)


def validate_config(data: dict) -> None:
    validator = jsonschema.Draft202012Validator(load_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = []
        for err in errors:
            loc = ".".join(str(p) for p in err.absolute_path) or "<root>"
            msgs.append(f"{loc}: {err.message}")
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(msgs))


def load_config(path: str | Path | None) -> dict:
    """Load, validate and default-fill a configuration file.

    ``None`` returns the built-in defaults.  Raises :class:`ConfigError`
    with line/column on YAML syntax errors and with the field path on
    schema violations; a missing file propagates ``FileNotFoundError``.
    """
    if path is None:
        data: dict = {}
    else:
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        try:
            data = yaml.safe_load(text) or {}
        except yaml.MarkedYAMLError as exc:
            mark = exc.problem_mark
            where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else str(path)
            raise ConfigError(f"{where}: {exc.problem}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        data = _coerce_numbers(data)
    validate_config(data)
    merged = _merge(DEFAULT_CONFIG, data)
    validate_config({k: v for k, v in merged.items()})
    return merged


def surface_spec(cfg: dict, rho: float = 0.0, h: float | None = None) -> SurfaceSpec:
    s = cfg["surface"]
    return SurfaceSpec(
        eps_r=s["eps_r"],
        rho=rho,
        h=h if h is not None else 2.85e-3,
        sigma_ground=s["sigma_ground"],
        sigma_fill=s["sigma_fill"],
        f=s["frequency"],
        x_target=s["x_target"],
    )


@dataclass(frozen=True)
class RunManifest:
    """Fully resolved description of a run, written before simulation starts.

    The toolkit is seedless and fully deterministic: re-running a manifest
    reproduces every CSV byte for byte.
    """

    command: str
    config_path: str | None
    resolved_config: dict
    extra: dict
    output_dir: str
    version: str = __version__
    determinism: str = "seedless; outputs reproducible byte-for-byte"

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        doc = {
            "tool": "porosurf",
            "version": self.version,
            "command": self.command,
            "config_path": self.config_path,
            "output_dir": self.output_dir,
            "determinism": self.determinism,
            "resolved_config": self.resolved_config,
        }
        if self.extra:
            doc["parameters"] = self.extra
        path.write_text(
            yaml.safe_dump(doc, sort_keys=True, default_flow_style=False),
            encoding="utf-8", newline="\n",
        )
        return path
