"""Exception hierarchy for the porosurf toolkit."""


class PorosurfError(Exception):
    """Base class for all toolkit errors."""


class DomainError(PorosurfError, ValueError):
    """An argument lies outside the physically valid domain."""


class InfeasibleTargetError(DomainError):
    """The requested reactance target cannot be met with a positive thickness."""


class OverlapError(PorosurfError, ValueError):
    """Lattice geometry would place overlapping cavity disks."""


class ResolutionError(PorosurfError, ValueError):
    """The grid is too coarse to resolve the geometry or the frequency band."""


class InstabilityError(PorosurfError, RuntimeError):
    """The time-domain field exceeded the divergence threshold."""


class SteadyStateError(PorosurfError, RuntimeError):
    """Steady state was not reached within the allowed number of steps."""


class SeriesConvergenceError(PorosurfError, RuntimeError):
    """The scattering series did not reach its truncation bound."""


class EmptySpanError(PorosurfError, ValueError):
    """The requested analysis span contains no samples."""


class WindowError(PorosurfError, ValueError):
    """A smoothing window is too small for the sample spacing."""


class NoPeakError(PorosurfError, ValueError):
    """The spectrum is monotone; there is no peak to bracket."""


class DegenerateFitError(PorosurfError, ValueError):
    """The profile span is too short for a meaningful linear fit."""


class ConfigError(PorosurfError, ValueError):
    """A configuration file failed to parse or validate."""
