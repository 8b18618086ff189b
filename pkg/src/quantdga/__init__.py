"""Exact rational-homotopy computations: free CDGAs, cylinder homotopies,
obstruction theory with exponent bookkeeping, and simplicial isoperimetry."""

__version__ = "0.1.0"
