"""Ladder hierarchies, closed-form spectra and numerical cross-checks."""

from ._core import (
    ClosureError,
    ContextMismatch,
    DegenerateDenominator,
    DiracParams,
    DivergentIntegral,
    DomainError,
    Error,
    GridTooCoarse,
    InvalidParameters,
    NegativeRadicand,
    NoBoundStates,
    NRParams,
    PhysicalParams,
    SingularXi,
    TailNotDecayed,
    dirac_default_rho_max,
    dirac_dn,
    dirac_eigenfunction,
    dirac_eigenvalue,
    dirac_physical_energy,
    dirac_scan,
    dirac_xi_residual,
    fd_eigenvalues,
    nr_default_rho_max,
    nr_eigenfunction,
    nr_energy,
    nr_factorization_energy,
    nr_nodes,
    nr_physical_energy,
    nr_potential,
    nr_superpotential,
    run_cli,
)

__all__ = [name for name in dir() if not name.startswith("_")]
