"""Entangled and diagonal ergodic averages of unitaries, verified numerically."""

__version__ = "0.1.0"
