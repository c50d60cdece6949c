"""Dirac equation on a (2+1)-dimensional de Sitter-like background.

Geometry and spin connection, separation into angular and temporal parts,
the supersymmetric angular spectrum, Romanovski time-part solutions, a
finite-difference spectral oracle and the pseudo-supersymmetric partner
construction, with a batch verification CLI.
"""
from .exceptions import ConvergenceError, DegeneracyError, DivergenceError, DomainError

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DegeneracyError",
    "DivergenceError",
    "DomainError",
    "__version__",
]
