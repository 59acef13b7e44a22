"""Cavity-lattice layouts for the comparative channel models.

A channel is a pair of conducting walls a fixed width apart; the floor between
them carries a lattice of circular air cavities.  Models 1-4 tile the channel
with an axis-aligned rectangular lattice at pitch ``(w_l, w_h)``; model 5 uses
a checkerboard-interleaved (45-degree rotated square) lattice whose
nearest-neighbour distance is ``w_l``; model 0 has walls only.

All coordinates are metres.  x runs along the channel (propagation), y across
it, and the channel is centred on y = 0 with the cavity region starting at
x = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from scipy.integrate import quad

from .errors import DomainError, OverlapError, PorosurfError


class Rect(NamedTuple):
    x0: float
    x1: float
    y0: float
    y1: float

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, x: float, y: float, tol: float = 1e-12) -> bool:
        return (self.x0 - tol <= x <= self.x1 + tol
                and self.y0 - tol <= y <= self.y1 + tol)


class Disk(NamedTuple):
    x: float
    y: float
    r: float


class Strip(NamedTuple):
    """Axis-aligned conducting rectangle (a continuous channel wall)."""

    x0: float
    x1: float
    y0: float
    y1: float


#: Table of comparative models: model id -> (w_l, w_h, interleaved).
#: Pitches are exact; printed tables round 10/3 mm to 3.33 and sqrt(2) mm
#: to 1.41.  Model 0 has no cavities.
MODEL_PITCHES: dict[int, tuple[float | None, float | None, bool]] = {
    0: (None, None, False),
    1: (5.00e-3, 2.00e-3, False),
    2: (10.0e-3 / 3.0, 2.00e-3, False),
    3: (2.50e-3, 2.00e-3, False),
    4: (2.00e-3, 2.00e-3, False),
    5: (math.sqrt(2.0) * 1e-3, 2.00e-3, True),
}


@dataclass(frozen=True)
class LatticeParams:
    """Parameters of one channel model's cavity lattice.

    ``w_l``/``w_h`` are ignored for model 0 (walls only).  ``wall_style`` is
    either ``"strips"`` (two continuous conducting strips, the default) or
    ``"disks"`` (rows of conductor-filled disks at ``wall_pitch``).
    ``phase`` shifts the cavity columns; the default anchors a disk centre one
    half-pitch past the channel entrance.  The porous surface continues beyond
    the measured section, so walls and cavities extend ``overhang`` metres
    before x = 0 and after x = d (a scalar applies to both ends).
    ``exterior_margin`` > 0 also tiles cavities outside the walls up to that
    distance.
    """

    model_id: int
    w_l: float | None
    w_h: float | None
    r: float = 0.5e-3
    w_c: float = 9.0e-3
    d: float = 0.3
    interleaved: bool = False
    wall_style: str = "strips"
    wall_thickness: float | None = None   # default 2r
    wall_pitch: float | None = None       # disks walls only; default 2r (touching)
    overhang: float | tuple[float, float] = 0.02
    exterior_margin: float = 0.0
    phase: float | None = None            # default w_l / 2

    def __post_init__(self) -> None:
        if self.r <= 0.0:
            raise DomainError(f"r must be positive, got {self.r}")
        if self.w_c <= 0.0 or self.d <= 0.0:
            raise DomainError("w_c and d must be positive")
        if self.w_c < 2.0 * self.r:
            raise DomainError(
                f"channel width {self.w_c} cannot hold disks of diameter {2 * self.r}"
            )
        if self.wall_style not in ("strips", "disks"):
            raise DomainError(f"unknown wall_style {self.wall_style!r}")
        if self.model_id != 0:
            if self.w_l is None or self.w_l <= 0.0:
                raise DomainError("w_l must be positive for porous models")
            if self.interleaved:
                if self.w_l < 2.0 * self.r:
                    raise OverlapError(
                        f"nearest-neighbour pitch {self.w_l} < disk diameter {2 * self.r}"
                    )
            else:
                if self.w_h is None or self.w_h <= 0.0:
                    raise DomainError("w_h must be positive for aligned models")
                if self.w_l < 2.0 * self.r or self.w_h < 2.0 * self.r:
                    raise OverlapError(
                        f"pitch ({self.w_l}, {self.w_h}) < disk diameter {2 * self.r}"
                    )

    @property
    def wall_t(self) -> float:
        return self.wall_thickness if self.wall_thickness is not None else 2.0 * self.r

    @property
    def overhangs(self) -> tuple[float, float]:
        if isinstance(self.overhang, tuple):
            return self.overhang
        return (self.overhang, self.overhang)


def model_params(model_id: int, **overrides) -> LatticeParams:
    """LatticeParams for one of the canonical comparative models 0-5."""
    if model_id not in MODEL_PITCHES:
        raise DomainError(f"model_id must be 0-5, got {model_id}")
    w_l, w_h, interleaved = MODEL_PITCHES[model_id]
    return LatticeParams(model_id=model_id, w_l=w_l, w_h=w_h,
                         interleaved=interleaved, **overrides)


@dataclass(frozen=True)
class CavityLattice:
    """Explicit 2D placement of walls and cavity disks for one model."""

    wall_strips: tuple[Strip, ...]
    wall_disks: tuple[Disk, ...]
    cavity_disks: tuple[Disk, ...]
    bounding_box: Rect
    channel: Rect                      # interior region between the walls
    params: LatticeParams | None = field(default=None, compare=False)

    @property
    def has_walls(self) -> bool:
        return bool(self.wall_strips) or bool(self.wall_disks)


def porosity_of(w_l: float, w_h: float | None, r: float, interleaved: bool) -> float:
    """Porosity (cavity area over measured-unit area) from lattice pitches.

    Aligned lattice: rho = pi r^2 / (w_l * w_h).
    Interleaved lattice: the measured unit is the rotated square of side w_l
    around one cavity, so rho = pi r^2 / w_l^2.
    """
    if r <= 0.0:
        raise DomainError(f"r must be positive, got {r}")
    if w_l is None or w_l <= 0.0:
        raise DomainError("w_l must be positive")
    if interleaved:
        if w_l < 2.0 * r:
            raise OverlapError(f"pitch {w_l} < disk diameter {2 * r}")
        return math.pi * r * r / (w_l * w_l)
    if w_h is None or w_h <= 0.0:
        raise DomainError("w_h must be positive for aligned lattices")
    if w_l < 2.0 * r or w_h < 2.0 * r:
        raise OverlapError(f"pitch ({w_l}, {w_h}) < disk diameter {2 * r}")
    return math.pi * r * r / (w_l * w_h)


def _column_positions(x_lo: float, x_hi: float, pitch: float, anchor: float) -> list[float]:
    """Centres anchor + j*pitch (j integer) within [x_lo, x_hi] (fuzzy)."""
    tol = 1e-9 * pitch
    j0 = int(math.ceil((x_lo - anchor) / pitch - 1e-9))
    j1 = int(math.floor((x_hi - anchor) / pitch + 1e-9))
    return [anchor + j * pitch for j in range(j0, j1 + 1) if x_lo - tol <= anchor + j * pitch]


def _tile_range(p: LatticeParams, pitch: float) -> tuple[float, float]:
    # The porous surface continues past the measured section: tile the whole
    # guide, half a pitch clear of the bounding-box ends.
    left, right = p.overhangs
    return (-left + pitch / 2.0, p.d + right - pitch / 2.0)


def _aligned_disks(p: LatticeParams) -> list[Disk]:
    # Rows sit symmetrically about the centreline at +-(k + 1/2) w_h, keeping
    # one half-pitch clearance from each wall.
    y_max = p.w_c / 2.0 - p.w_h / 2.0
    rows: list[float] = []
    k = 0
    while (k + 0.5) * p.w_h <= y_max + 1e-12:
        rows.extend([+(k + 0.5) * p.w_h, -(k + 0.5) * p.w_h])
        k += 1
    anchor = p.phase if p.phase is not None else p.w_l / 2.0
    x_lo, x_hi = _tile_range(p, p.w_l)
    cols = _column_positions(x_lo, x_hi, p.w_l, anchor)
    return [Disk(x, y, p.r) for y in sorted(rows) for x in cols]


def _interleaved_disks(p: LatticeParams) -> list[Disk]:
    # Checkerboard on an auxiliary square grid of spacing s = w_l / sqrt(2):
    # centres (i s + anchor, j s) with i + j even.  Nearest-neighbour distance
    # is w_l and the density is one disk per w_l^2.  A row sits on the channel
    # centreline, which makes the lattice mirror-symmetric about it (rows at
    # +-s/2 would be glide-symmetric and couple the antisymmetric channel
    # mode, which rings for a long time in the solver).
    s = p.w_l / math.sqrt(2.0)
    y_max = p.w_c / 2.0 - s / 2.0
    j_lim = int(math.floor(y_max / s + 1e-12))
    anchor = p.phase if p.phase is not None else s / 2.0
    x_lo, x_hi = _tile_range(p, s)
    disks: list[Disk] = []
    for j in range(-j_lim, j_lim + 1):
        y = j * s
        row_anchor = anchor + (0 if j % 2 == 0 else 1) * s
        for x in _column_positions(x_lo, x_hi, 2.0 * s, row_anchor):
            disks.append(Disk(x, y, p.r))
    disks.sort(key=lambda dsk: (dsk.y, dsk.x))
    return disks


def _exterior_disks(p: LatticeParams, interior: list[Disk]) -> list[Disk]:
    # Mirror the row rule outside the walls, up to exterior_margin.
    if p.exterior_margin <= 0.0 or not interior:
        return []
    pitch_y = p.w_h if not p.interleaved else p.w_l / math.sqrt(2.0)
    y_in = p.w_c / 2.0 + p.wall_t
    out: list[Disk] = []
    y_inner = min(abs(q.y) for q in interior)
    xs = sorted({d.x for d in interior if abs(abs(d.y) - y_inner) < 1e-12})
    k = 0
    while True:
        y = y_in + (k + 0.5) * pitch_y
        if y + p.r > y_in + p.exterior_margin + 1e-12:
            break
        for x in xs:
            out.append(Disk(x, +y, p.r))
            out.append(Disk(x, -y, p.r))
        k += 1
    return out


def build_model(params: LatticeParams) -> CavityLattice:
    """Construct the explicit lattice for one model.

    Deterministic: identical parameters yield an identical lattice.  Raises
    :class:`OverlapError` if any two cavity disks would overlap.
    """
    p = params
    if p.model_id == 0 or p.w_l is None:
        interior: list[Disk] = []
    elif p.interleaved:
        interior = _interleaved_disks(p)
    else:
        interior = _aligned_disks(p)
    cavities = interior + _exterior_disks(p, interior)

    _check_overlaps(cavities)

    y_wall0 = p.w_c / 2.0
    y_wall1 = y_wall0 + p.wall_t
    left, right = p.overhangs
    x0, x1 = -left, p.d + right
    strips: tuple[Strip, ...] = ()
    wall_disks: tuple[Disk, ...] = ()
    if p.wall_style == "strips":
        strips = (Strip(x0, x1, y_wall0, y_wall1),
                  Strip(x0, x1, -y_wall1, -y_wall0))
    else:
        pitch = p.wall_pitch if p.wall_pitch is not None else 2.0 * p.r
        yc = y_wall0 + p.wall_t / 2.0
        xs = _column_positions(x0, x1, pitch, pitch / 2.0)
        wall_disks = tuple(Disk(x, s * yc, p.r) for s in (+1, -1) for x in xs)

    y_ext = y_wall1 + max(p.exterior_margin, 0.0)
    bbox = Rect(x0, x1, -y_ext, y_ext)
    lattice = CavityLattice(
        wall_strips=strips,
        wall_disks=wall_disks,
        cavity_disks=tuple(cavities),
        bounding_box=bbox,
        channel=Rect(0.0, p.d, -p.w_c / 2.0, p.w_c / 2.0),
        params=p,
    )
    _check_lattice(lattice)
    return lattice


def _check_overlaps(disks: list[Disk]) -> None:
    # Sort-sweep by x keeps this near-linear for lattice-like inputs.
    byx = sorted(disks, key=lambda d: d.x)
    for i, a in enumerate(byx):
        for b in byx[i + 1:]:
            if b.x - a.x >= a.r + b.r - 1e-12:
                break
            if (a.x - b.x) ** 2 + (a.y - b.y) ** 2 < (a.r + b.r) ** 2 * (1 - 1e-9):
                raise OverlapError(f"cavity disks overlap: {a} and {b}")


def _check_lattice(lat: CavityLattice) -> None:
    bb = lat.bounding_box
    for d in lat.cavity_disks + lat.wall_disks:
        if not (bb.x0 - 1e-12 <= d.x - d.r and d.x + d.r <= bb.x1 + 1e-12
                and bb.y0 - 1e-12 <= d.y - d.r and d.y + d.r <= bb.y1 + 1e-12):
            raise PorosurfError(f"disk {d} extends outside the bounding box")
    for d in lat.cavity_disks:
        for s in lat.wall_strips:
            # closest point on the strip to the disk centre
            cx = min(max(d.x, s.x0), s.x1)
            cy = min(max(d.y, s.y0), s.y1)
            if (cx - d.x) ** 2 + (cy - d.y) ** 2 < d.r ** 2 * (1 - 1e-9):
                raise OverlapError(f"cavity disk {d} intersects wall strip {s}")
        for w in lat.wall_disks:
            if (w.x - d.x) ** 2 + (w.y - d.y) ** 2 < (w.r + d.r) ** 2 * (1 - 1e-9):
                raise OverlapError(f"cavity disk {d} intersects wall disk {w}")


def disk_rect_area(disk: Disk, region: Rect) -> float:
    """Area of a disk-rectangle intersection by adaptive quadrature.

    Integrates the clipped chord height across x; relative accuracy is far
    below the 0.1-percentage-point tolerance this oracle serves.
    """
    x0 = max(region.x0, disk.x - disk.r)
    x1 = min(region.x1, disk.x + disk.r)
    if x1 <= x0:
        return 0.0

    def height(x: float) -> float:
        dx = x - disk.x
        half = math.sqrt(max(disk.r ** 2 - dx * dx, 0.0))
        lo = max(region.y0, disk.y - half)
        hi = min(region.y1, disk.y + half)
        return max(hi - lo, 0.0)

    val, _ = quad(height, x0, x1, limit=200)
    return val


def lattice_porosity(lattice: CavityLattice, region: Rect) -> float:
    """Geometric porosity of a region: cavity area inside it over its area.

    This is the independent oracle for :func:`porosity_of`; it measures the
    explicit disks rather than evaluating the unit-cell formula.
    """
    if region.area <= 0.0:
        raise DomainError(f"degenerate region {region}")
    bb = lattice.bounding_box
    if not (bb.x0 - 1e-12 <= region.x0 and region.x1 <= bb.x1 + 1e-12
            and bb.y0 - 1e-12 <= region.y0 and region.y1 <= bb.y1 + 1e-12):
        raise DomainError("region extends outside the lattice bounding box")
    total = sum(disk_rect_area(d, region) for d in lattice.cavity_disks)
    return total / region.area


# ---------------------------------------------------------------------------
# Plain-text geometry file (one element per line; all lengths in metres)
# ---------------------------------------------------------------------------

_GEOMETRY_HEADER = "# porosurf geometry v1"


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def save_geometry(lattice: CavityLattice, path: str | Path) -> None:
    """Write a lattice to the documented plain-text geometry format.

    Lines: ``bbox x0 x1 y0 y1``, ``channel x0 x1 y0 y1``,
    ``wall_strip x0 x1 y0 y1``, ``wall_disk x y r``, ``cavity x y r``.
    """
    lines = [_GEOMETRY_HEADER]
    lines.append("bbox " + " ".join(_fmt(v) for v in lattice.bounding_box))
    lines.append("channel " + " ".join(_fmt(v) for v in lattice.channel))
    for s in lattice.wall_strips:
        lines.append("wall_strip " + " ".join(_fmt(v) for v in s))
    for d in lattice.wall_disks:
        lines.append("wall_disk " + " ".join(_fmt(v) for v in d))
    for d in lattice.cavity_disks:
        lines.append("cavity " + " ".join(_fmt(v) for v in d))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_geometry(path: str | Path) -> CavityLattice:
    """Read a lattice back from the plain-text geometry format."""
    text = Path(path).read_text(encoding="ascii")
    bbox = channel = None
    strips: list[Strip] = []
    wall_disks: list[Disk] = []
    cavities: list[Disk] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        kind, *vals = line.split()
        try:
            nums = [float(v) for v in vals]
            if kind == "bbox":
                bbox = Rect(*nums)
            elif kind == "channel":
                channel = Rect(*nums)
            elif kind == "wall_strip":
                strips.append(Strip(*nums))
            elif kind == "wall_disk":
                wall_disks.append(Disk(*nums))
            elif kind == "cavity":
                cavities.append(Disk(*nums))
            else:
                raise ValueError(f"unknown element kind {kind!r}")
        except (TypeError, ValueError) as exc:
            raise PorosurfError(f"{path}:{ln}: bad geometry line: {exc}") from exc
    if bbox is None or channel is None:
        raise PorosurfError(f"{path}: missing bbox/channel line")
    return CavityLattice(
        wall_strips=tuple(strips),
        wall_disks=tuple(wall_disks),
        cavity_disks=tuple(cavities),
        bounding_box=bbox,
        channel=channel,
    )


def single_disk_lattice(r: float, half_extent: float, conductor: bool = True) -> CavityLattice:
    """One disk at the origin in an otherwise empty box (validation setups)."""
    bbox = Rect(-half_extent, half_extent, -half_extent, half_extent)
    disk = Disk(0.0, 0.0, r)
    return CavityLattice(
        wall_strips=(),
        wall_disks=(disk,) if conductor else (),
        cavity_disks=() if conductor else (disk,),
        bounding_box=bbox,
        channel=bbox,
    )
