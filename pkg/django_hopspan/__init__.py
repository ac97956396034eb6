"""
Django Hopspan - Constant-hop spanners for geometric intersection graphs.
"""

__version__ = "0.1.0"

from django_hopspan.exceptions import (
    HopspanError,
    InputError,
    PreconditionError,
    ShallowCuttingError,
    StructuralViolation,
)

__all__ = [
    "HopspanError",
    "InputError",
    "PreconditionError",
    "ShallowCuttingError",
    "StructuralViolation",
]
