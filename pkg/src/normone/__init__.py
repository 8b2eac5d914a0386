"""Counting and verifying norm-one elements of bounded height in CM fields."""

from .angles import Angle, ArcProduct, Interval, PrecisionError, parse_arcs
from .field import ConfigError, FieldDescriptor, FieldElement, QuadReal, load_descriptor

__all__ = [
    "Angle", "ArcProduct", "Interval", "PrecisionError", "parse_arcs",
    "ConfigError", "FieldDescriptor", "FieldElement", "QuadReal", "load_descriptor",
]
__version__ = "0.1.0"
