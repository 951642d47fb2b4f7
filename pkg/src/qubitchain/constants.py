"""Physical constants and unit multipliers used across the package.

Everything internal runs in SI (farads, henries, joules, rad/s); the
multipliers below convert at the human-facing boundary only.
"""

import math

from scipy.constants import e as E_CHARGE  # elementary charge, C
from scipy.constants import h as H_PLANCK  # Planck constant, J s
from scipy.constants import hbar as HBAR

# Magnetic flux quantum h/2e and the reduced version entering E_J = (Phi0/2pi)^2 / L_J.
PHI0 = H_PLANCK / (2.0 * E_CHARGE)
PHI0_BAR = PHI0 / (2.0 * math.pi)

# e and h are exact in the 2019 SI redefinition; scipy.constants carries them.
CONSTANTS_SOURCE = "scipy.constants (SI-2019 exact e, h)"

TWO_PI = 2.0 * math.pi

# unit multipliers (value_in_SI = value_in_unit * multiplier)
FF = 1e-15   # femtofarad
NH = 1e-9    # nanohenry
GHZ = 1e9
MHZ = 1e6
