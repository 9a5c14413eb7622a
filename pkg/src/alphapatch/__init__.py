"""Numerical laboratory for alpha-patch contour dynamics.

Closed-curve geometry, boundary Biot-Savart integrals, the dispersive
fractional operator with its Littlewood-Paley toolkit, lower-bound scans for
the rough-data harness, curve bending, and a contour evolution loop.
"""

__version__ = "0.1.0"
