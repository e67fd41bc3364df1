"""Cohomology presentations and invariants of hyperpolygon spaces and their core components."""

__version__ = "0.1.0"
