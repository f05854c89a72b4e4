"""Exact Laurent-polynomial experiments with Somos-type recurrences."""

from .analysis import check_laurent, entropy_estimate, height_growth, tropical_degrees
from .engine import EpsSeries, OrbitRecord, iterate_exact, iterate_series, iterate_symbolic
from .exact import FracLaurent, LaurentPoly, exact_div, frac_equal
from .kernels import BACKEND
from .recdsl import RecurrenceSpec, catalog, catalog_names, parse_recurrence

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "EpsSeries",
    "FracLaurent",
    "LaurentPoly",
    "OrbitRecord",
    "RecurrenceSpec",
    "catalog",
    "catalog_names",
    "check_laurent",
    "entropy_estimate",
    "exact_div",
    "frac_equal",
    "height_growth",
    "iterate_exact",
    "iterate_series",
    "iterate_symbolic",
    "parse_recurrence",
    "tropical_degrees",
]
