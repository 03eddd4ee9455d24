"""Exact and numerical verification toolkit for projectively flat bundles on complex tori."""

__version__ = "0.1.0"
