"""Numerical laboratory for penalized three-phase segregation energies.

Solves the penalized Euler-Lagrange system, builds explicit recovery
sequences (interface profiles, junction constructions, partition of unity),
and verifies the limiting scaling laws by eps sweeps with log-log slope
fits.
"""

from .kernels import HAVE_COMPILED

__version__ = "0.1.0"
__all__ = ["HAVE_COMPILED", "__version__"]
