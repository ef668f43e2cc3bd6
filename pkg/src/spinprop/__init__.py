"""Exact evolution operators for one- and two-spin systems in time-restricted fields."""

from .errors import (
    ConfigError,
    DomainError,
    NormalizationDriftError,
    NumericalError,
    PoleError,
    PrecisionError,
    SpinPropError,
    StepUnderflowError,
)
from .hyp2f1 import complex_log_gamma, hyp2f1, principal_power
from .sech import SechPulseParams, evolution_u, swap_probability
from .su2 import EulerParams, FieldVector3, Spinor2, Su2Propagator

__version__ = "0.1.0"
