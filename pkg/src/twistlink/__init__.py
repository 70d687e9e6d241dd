"""Twist regions, augmented links and exhaustive checks of embedded-graph lemmas."""

__version__ = "0.1.0"
