"""Stochastic shortest path planning: VI, iLAO*, CG-iLAO* and LRTDP."""

__version__ = "0.1.0"
