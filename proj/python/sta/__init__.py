"""Shortcuts to adiabaticity for non-Hermitian two-level systems."""

from ._sta import *  # noqa: F401,F403
from ._sta import (  # noqa: F401
    ConfigError,
    DegenerateSpectrum,
    InconsistentInitialConditions,
    NonFiniteState,
    StaError,
    ZeroGap,
)

__version__ = "0.1.0"
