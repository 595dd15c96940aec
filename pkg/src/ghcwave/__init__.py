"""Travelling-wave lab for a five-parameter Camassa-Holm type equation."""
from .model import EquationParams, Grid, QuinticPoly, ValidationError, WaveParams, pole_location, poly_from_params

__version__ = "0.1.0"

__all__ = ["EquationParams", "WaveParams", "QuinticPoly", "Grid", "ValidationError",
           "poly_from_params", "pole_location", "__version__"]
