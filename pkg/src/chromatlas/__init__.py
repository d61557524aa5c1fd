"""Chromatic polynomial atlas of small connected graphs."""

from .chromatic import ChromaticEngine, ChromaticPolynomial, chromatic_polynomial, coefficient_vector
from .graph import Graph, from_graph6, to_graph6

__all__ = [
    "ChromaticEngine",
    "ChromaticPolynomial",
    "Graph",
    "chromatic_polynomial",
    "coefficient_vector",
    "from_graph6",
    "to_graph6",
]
