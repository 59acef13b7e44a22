"""Physical constants used throughout the toolkit."""

import math

C0 = 299792458.0                  # speed of light in vacuum, m/s
MU0 = 4.0e-7 * math.pi            # permeability of free space, H/m
EPS0 = 1.0 / (MU0 * C0 * C0)      # permittivity of free space, F/m
ETA0 = MU0 * C0                   # free-space wave impedance, ohms (~376.73)
