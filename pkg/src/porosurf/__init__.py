"""Design and 2D time-domain simulation toolkit for porous surface-wave channels."""

__version__ = "0.1.0"

from .analysis import (  # noqa: F401
    AnalysisReport,
    BandMetrics,
    CenterlineProfile,
    band_metrics,
    extract_centerline,
    fluctuation_sd,
    local_mean,
    path_loss_fit,
    smooth,
)
from .cylinder import analytic_cylinder_scatter, circle_points  # noqa: F401
from .fdtd import (  # noqa: F401
    FieldRecord,
    MaterialGrid,
    SimulationConfig,
    SourceConfig,
    SweepResult,
    rasterize,
    run,
    sweep,
)
from .geometry import (  # noqa: F401
    CavityLattice,
    Disk,
    LatticeParams,
    Rect,
    Strip,
    build_model,
    lattice_porosity,
    load_geometry,
    model_params,
    porosity_of,
    save_geometry,
)
from .material import (  # noqa: F401
    DerivedSurface,
    SurfaceSpec,
    background_index,
    derive_surface,
    effective_index,
    effective_permittivity,
    skin_depth,
    solve_thickness,
    surface_reactance,
)
