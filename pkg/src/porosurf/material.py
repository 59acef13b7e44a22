"""Closed-form design math for porous dielectric surfaces over a ground plane.

A dielectric sheet of relative permittivity ``eps_r`` perforated by a lattice
of air cavities (porosity ``rho``) behaves like a homogeneous sheet of reduced
effective permittivity.  Backed by a conducting ground plane the sheet presents
an inductive surface reactance to a transverse-magnetic surface wave; tuning
the sheet thickness sets that reactance, and the reactance in turn fixes the
effective refractive index that the 2D field solver propagates with.

All functions are pure and operate on scalars in SI units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import ETA0, MU0
from .errors import DomainError, InfeasibleTargetError

#: Default target reactance magnitude (ohms) for maximum launch efficiency.
DEFAULT_X_TARGET = 270.0


@dataclass(frozen=True)
class SurfaceSpec:
    """Material and geometry description of one surface design.

    Defaults describe the reference design: PTFE sheet on a copper ground
    plane with Galinstan-filled cavities, operated at 26 GHz.
    """

    eps_r: float = 2.1             # relative permittivity of the sheet
    rho: float = 0.0               # porosity, fraction of unit-cell area
    h: float = 2.85e-3             # sheet thickness, m
    sigma_ground: float = 59.6e6   # ground-plane conductivity, S/m
    sigma_fill: float = 3.46e6     # fluid-metal conductivity, S/m
    f: float = 26e9                # operating frequency, Hz
    x_target: float = DEFAULT_X_TARGET  # target reactance magnitude, ohms

    def __post_init__(self) -> None:
        if self.eps_r < 1.0:
            raise DomainError(f"eps_r must be >= 1, got {self.eps_r}")
        if not 0.0 <= self.rho < 1.0:
            raise DomainError(f"rho must lie in [0, 1), got {self.rho}")
        if self.h <= 0.0:
            raise DomainError(f"h must be positive, got {self.h}")
        if self.f <= 0.0:
            raise DomainError(f"f must be positive, got {self.f}")
        if self.sigma_ground <= 0.0 or self.sigma_fill <= 0.0:
            raise DomainError("conductivities must be positive")
        if self.x_target <= 0.0:
            raise DomainError(f"x_target must be positive, got {self.x_target}")


@dataclass(frozen=True)
class DerivedSurface:
    """Quantities derived from a :class:`SurfaceSpec`.

    ``x_s`` is stored as a positive magnitude; the reactance is inductive by
    construction (thin grounded dielectric).
    """

    eps_eff: float   # effective relative permittivity of the porous sheet
    delta: float     # skin depth of the ground metal, m
    x_s: float       # surface reactance magnitude, ohms
    n_eff: float     # effective refractive index of the guided wave


def effective_permittivity(eps_r: float, rho: float) -> float:
    """Effective relative permittivity of a sheet with air-cavity porosity.

    eps_eff = eps_r * [1 + 3 eps_r + 3 rho (1 - eps_r)]
                    / [1 + 3 eps_r + rho (eps_r - 1)]

    Monotonically decreasing in ``rho`` for ``eps_r > 1``; equals ``eps_r``
    at zero porosity and stays within [1, eps_r].
    """
    if eps_r < 1.0:
        raise DomainError(f"eps_r must be >= 1, got {eps_r}")
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"rho must lie in [0, 1), got {rho}")
    num = eps_r * (1.0 + 3.0 * eps_r + 3.0 * rho * (1.0 - eps_r))
    den = 1.0 + 3.0 * eps_r + rho * (eps_r - 1.0)
    return num / den


def skin_depth(sigma: float, f: float) -> float:
    """Good-conductor skin depth, delta = 1 / sqrt(pi f mu0 sigma)."""
    if sigma <= 0.0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if f <= 0.0:
        raise DomainError(f"f must be positive, got {f}")
    return 1.0 / math.sqrt(math.pi * f * MU0 * sigma)


def surface_reactance(eps_eff: float, h: float, f: float, delta: float) -> float:
    """Inductive surface reactance of a grounded dielectric sheet.

    X_s = 2 pi f mu0 * [ (eps_eff - 1)/eps_eff * h + delta/2 ]

    Returned as a positive magnitude (ohms).  Affine and increasing in ``h``.
    """
    if eps_eff < 1.0:
        raise DomainError(f"eps_eff must be >= 1, got {eps_eff}")
    if h < 0.0:
        raise DomainError(f"h must be non-negative, got {h}")
    if delta < 0.0:
        raise DomainError(f"delta must be non-negative, got {delta}")
    if f <= 0.0:
        raise DomainError(f"f must be positive, got {f}")
    return 2.0 * math.pi * f * MU0 * ((eps_eff - 1.0) / eps_eff * h + delta / 2.0)


def solve_thickness(eps_eff: float, f: float, delta: float, x_target: float) -> float:
    """Sheet thickness that realises a target surface reactance.

    Closed-form inversion of the affine reactance relation:

    h = ( x_target / (2 pi f mu0) - delta/2 ) * eps_eff / (eps_eff - 1)

    Raises :class:`InfeasibleTargetError` when the skin-depth term alone
    exceeds the target (no positive thickness can help) and
    :class:`DomainError` at ``eps_eff == 1`` (the sheet contributes no
    reactance regardless of thickness).
    """
    if f <= 0.0:
        raise DomainError(f"f must be positive, got {f}")
    if delta < 0.0:
        raise DomainError(f"delta must be non-negative, got {delta}")
    if x_target <= 0.0:
        raise DomainError(f"x_target must be positive, got {x_target}")
    omega_mu = 2.0 * math.pi * f * MU0
    residual = x_target / omega_mu - delta / 2.0
    if residual < 0.0:
        if x_target >= omega_mu * delta / 2.0 * (1.0 - 1e-12):
            residual = 0.0  # target sits exactly on the skin-depth floor
        else:
            raise InfeasibleTargetError(
                f"x_target={x_target} ohm is below the skin-depth floor "
                f"{omega_mu * delta / 2.0:.4g} ohm"
            )
    if eps_eff <= 1.0:
        if residual == 0.0:
            return 0.0
        raise DomainError(
            "eps_eff = 1 surface has no thickness-dependent reactance; "
            f"cannot reach x_target={x_target} ohm"
        )
    h = residual * eps_eff / (eps_eff - 1.0)
    # Closed form must invert exactly; guard against silent regressions.
    assert abs(surface_reactance(eps_eff, h, f, delta) - x_target) < 0.01
    return h


def effective_index(x_s: float, f: float) -> float:
    """Effective refractive index of a TM surface wave over a reactive plane.

    n_eff = sqrt(1 + (X_s / eta0)^2) >= 1.  The frequency argument is kept in
    the signature for symmetry with the other operations; the relation itself
    is frequency-independent once X_s is known.
    """
    if x_s < 0.0:
        raise DomainError(f"x_s must be non-negative, got {x_s}")
    if f <= 0.0:
        raise DomainError(f"f must be positive, got {f}")
    return math.sqrt(1.0 + (x_s / ETA0) ** 2)


def derive_surface(spec: SurfaceSpec) -> DerivedSurface:
    """Evaluate the full design chain for one surface specification."""
    eps_eff = effective_permittivity(spec.eps_r, spec.rho)
    delta = skin_depth(spec.sigma_ground, spec.f)
    x_s = surface_reactance(eps_eff, spec.h, spec.f, delta)
    n_eff = effective_index(x_s, spec.f)
    return DerivedSurface(eps_eff=eps_eff, delta=delta, x_s=x_s, n_eff=n_eff)


def background_index(spec: SurfaceSpec, h: float) -> float:
    """Refractive index of the unporous sheet at a given matched thickness.

    This is the 2D solver's background medium: between cavities the wave sees
    the unperforated dielectric, so the index is evaluated at ``rho = 0`` with
    the thickness that was matched for the porous design.
    """
    delta = skin_depth(spec.sigma_ground, spec.f)
    x_s = surface_reactance(spec.eps_r, h, spec.f, delta)
    return effective_index(x_s, spec.f)
