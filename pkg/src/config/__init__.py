"""
Configuration Management Package

Numerical tolerances, clock discretization, runner and observability
settings, all overridable through environment variables.
"""

from .settings import Settings, settings, lattice_tolerance

__all__ = ["Settings", "settings", "lattice_tolerance"]
