"""Proportionate-type NLMS filters, MSE-surface conditioning, Monte-Carlo harness."""
__version__ = "0.1.0"

from ._backend import BACKEND
from .filters import (
    FilterState,
    FixedGain,
    Identity,
    Ipnlms,
    Pnlms,
    PureProportional,
    StepInput,
    ZeroAttractor,
    gain_ipnlms,
    gain_pnlms,
    gain_pure_proportional,
    step,
)
