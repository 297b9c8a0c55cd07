"""geogate: geometric quantum gate construction, robustness scans, and
physical-level transmon simulation."""

__version__ = "0.1.0"

from .qcore import gate_fidelity, state_fidelity
from .pulses import (
    GateSpec,
    PulseShape,
    Schedule,
    Scheme,
    ShapeKind,
    build_schedule,
    propagate,
    target_unitary,
)
from .noise import ErrorModel

__all__ = [
    "__version__",
    "GateSpec",
    "PulseShape",
    "Schedule",
    "Scheme",
    "ShapeKind",
    "ErrorModel",
    "build_schedule",
    "propagate",
    "target_unitary",
    "gate_fidelity",
    "state_fidelity",
]
