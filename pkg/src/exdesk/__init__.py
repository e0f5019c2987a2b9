"""Desk-scale computational toolkit for exceptional-group subgroup analysis.

Finite-field linear algebra, MeatAxe composition factors, presentation
cohomology, socle/radical machinery, root-system torus eigenvalues and the
E6 trilinear-form solver, with a CLI for reproducible runs.
"""

__version__ = "0.1.0"
