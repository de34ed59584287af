"""Exact symbolic engine for Cuntz-Krieger algebras graded by the free group."""

from .algebra import (
    PRESETS,
    AdjacencyMatrix,
    CKAlgebra,
    CKElement,
    CKMonomial,
    component,
    degree,
    expectation,
    generator,
    mono_mul,
    partial_rep,
    range_projection,
    unit,
)
from .expr import format_element, parse_expression

__all__ = [
    "PRESETS",
    "AdjacencyMatrix",
    "CKAlgebra",
    "CKElement",
    "CKMonomial",
    "component",
    "degree",
    "expectation",
    "generator",
    "mono_mul",
    "partial_rep",
    "range_projection",
    "unit",
    "format_element",
    "parse_expression",
]
