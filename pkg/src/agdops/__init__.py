"""Differential operators on the circle and their geometry.

Subpackages cover the scalar Fourier algebra, the operator algebra between
density bundles, the Adler-Gelfand-Dikii Poisson structure through
pseudodifferential symbols, Floquet monodromy with group certification, the
curve <-> operator dictionary, and the constructive Drinfeld-Sokolov
reduction of matrix connections.
"""

from ._core import BACKEND as KERNEL_BACKEND
from .fourier import DEFAULT_BAND, PeriodicFunction
from .diffeo import CircleDiffeo, OrientationError, pullback_density, schwarzian
from .operators import (
    ClassCheck,
    DifferentialOperator,
    GroupClass,
    ParityError,
    WeightError,
    diffeo_act,
    is_in_class,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "DEFAULT_BAND",
    "PeriodicFunction",
    "CircleDiffeo",
    "OrientationError",
    "pullback_density",
    "schwarzian",
    "ClassCheck",
    "DifferentialOperator",
    "GroupClass",
    "ParityError",
    "WeightError",
    "diffeo_act",
    "is_in_class",
]
