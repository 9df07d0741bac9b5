"""Support varieties over graded complete intersections, and Verdier-quotient diagnostics."""

__version__ = "0.1.0"
