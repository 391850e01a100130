"""Convex feasibility with the centralized circumcentered-reflection method."""

from ._ccrm import (
    InputError,
    NumericalError,
    UnsupportedError,
    catalog_names,
    circumcenter,
    rate_report,
    solve,
    table1,
    table2,
)

__all__ = [
    "InputError",
    "NumericalError",
    "UnsupportedError",
    "catalog_names",
    "circumcenter",
    "rate_report",
    "solve",
    "table1",
    "table2",
]
