"""Series solution for plane-wave scattering by a circular cylinder.

Validation oracle for the time-domain solver: the classical cylindrical-
harmonics expansion of a unit-amplitude plane wave exp(i k x) hitting a
cylinder centred at the origin.  A conducting cylinder imposes a vanishing
out-of-plane field on its boundary (Dirichlet); a penetrable one matches the
field and its radial derivative against an interior Bessel series.
"""

from __future__ import annotations

import numpy as np
from scipy.special import h1vp, hankel1, jv, jvp

from .constants import C0
from .errors import DomainError, SeriesConvergenceError


def analytic_cylinder_scatter(
    radius: float,
    background_index: float,
    f: float,
    conductor: bool,
    eval_points: np.ndarray,
    cylinder_index: float = 1.0,
    rtol: float = 1e-12,
    max_order: int = 200,
) -> np.ndarray:
    """Total complex field at ``eval_points`` for plane-wave incidence.

    ``eval_points`` is an (N, 2) array of (x, y) positions.  The incident
    wave is exp(i k x) with k = 2 pi f background_index / c.  Terms are added
    in increasing harmonic order until they fall below ``rtol`` of the partial
    sum; exceeding ``max_order`` first raises
    :class:`SeriesConvergenceError`.

    Inside a conducting cylinder the field is identically zero; inside a
    penetrable one the interior series is evaluated.
    """
    if radius <= 0.0:
        raise DomainError(f"radius must be positive, got {radius}")
    if background_index < 1.0 or cylinder_index < 1.0:
        raise DomainError("refractive indices must be >= 1")
    if f <= 0.0:
        raise DomainError(f"f must be positive, got {f}")

    pts = np.asarray(eval_points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DomainError("eval_points must have shape (N, 2)")

    k0 = 2.0 * np.pi * f * background_index / C0
    k1 = 2.0 * np.pi * f * cylinder_index / C0
    ka0 = k0 * radius
    ka1 = k1 * radius

    r = np.hypot(pts[:, 0], pts[:, 1])
    theta = np.arctan2(pts[:, 1], pts[:, 0])
    outside = r >= radius

    total = np.zeros(len(pts), dtype=complex)
    total[outside] = np.exp(1j * k0 * pts[outside, 0])

    scat = np.zeros(len(pts), dtype=complex)
    interior = np.zeros(len(pts), dtype=complex)
    converged = False
    for n in range(max_order + 1):
        if conductor:
            c_n = -jv(n, ka0) / hankel1(n, ka0)
            b_n = 0.0
        else:
            num = k1 * jvp(n, ka1) * jv(n, ka0) - k0 * jv(n, ka1) * jvp(n, ka0)
            den = k1 * jvp(n, ka1) * hankel1(n, ka0) - k0 * jv(n, ka1) * h1vp(n, ka0)
            c_n = -num / den
            b_n = (jv(n, ka0) + c_n * hankel1(n, ka0)) / jv(n, ka1)
        eps_n = 1.0 if n == 0 else 2.0
        phase = eps_n * (1j ** n) * np.cos(n * theta)

        term = np.zeros(len(pts), dtype=complex)
        term[outside] = phase[outside] * c_n * hankel1(n, k0 * r[outside])
        scat += term
        if not conductor:
            inside = ~outside
            iterm = phase[inside] * b_n * jv(n, k1 * r[inside])
            interior[inside] += iterm
        else:
            iterm = np.zeros(0)

        scale = max(np.abs(total + scat).max(), 1.0)
        tmax = np.abs(term).max() if term.size else 0.0
        imax = np.abs(iterm).max() if iterm.size else 0.0
        if n > ka0 and max(tmax, imax) < rtol * scale:
            converged = True
            break
    if not converged:
        raise SeriesConvergenceError(
            f"series not below rtol={rtol} within order {max_order}"
        )

    total += scat
    if not conductor:
        total[~outside] = interior[~outside]
    return total


def circle_points(radius: float, n: int, center: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """(n, 2) points evenly spaced on a circle (measurement ring helper)."""
    ang = 2.0 * np.pi * np.arange(n) / n
    return np.column_stack([center[0] + radius * np.cos(ang),
                            center[1] + radius * np.sin(ang)])
