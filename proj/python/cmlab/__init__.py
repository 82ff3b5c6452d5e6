"""Compressed modes for finite-difference Schroedinger operators."""

from ._cmlab import (
    Boundary,
    EigenSystem,
    Grid,
    Hamiltonian,
    SolveResult,
    SweepReport,
    column_mass_lemma_check,
    eigenpairs,
    localization,
    mu_sweep,
    procrustes_residual,
    solve,
)

__all__ = [
    "Boundary",
    "EigenSystem",
    "Grid",
    "Hamiltonian",
    "SolveResult",
    "SweepReport",
    "column_mass_lemma_check",
    "eigenpairs",
    "localization",
    "mu_sweep",
    "procrustes_residual",
    "solve",
]
