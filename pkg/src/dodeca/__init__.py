"""Covers, cubulations and canonical surfaces of dodecahedral 3-manifolds."""

__version__ = "0.1.0"
