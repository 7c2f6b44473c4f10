"""hochcalc: exact Hochschild cohomology dimensions for bound quiver algebras."""

from .engine import build
from .fields import field_make, parse_field_spec
from .hochschild import hh_dims, hochschild_report
from .presentation import parse_presentation

__all__ = [
    "build",
    "field_make",
    "parse_field_spec",
    "hh_dims",
    "hochschild_report",
    "parse_presentation",
]

__version__ = "0.1.0"
