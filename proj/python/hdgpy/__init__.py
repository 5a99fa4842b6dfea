"""Hybridizable discontinuous Galerkin solvers for Poisson, CDR, Stokes and Oseen."""

from ._core import (
    AssemblyError,
    ConfigError,
    HdgError,
    Mesh,
    ParseError,
    SolverError,
    TopologyError,
    canonical_config,
    catalog,
    config_hash,
    convergence,
    identity_residual,
    inf_sup,
    lshape_mesh,
    solve,
    structured_mesh,
)

__all__ = [
    "AssemblyError",
    "ConfigError",
    "HdgError",
    "Mesh",
    "ParseError",
    "SolverError",
    "TopologyError",
    "canonical_config",
    "catalog",
    "config_hash",
    "convergence",
    "identity_residual",
    "inf_sup",
    "lshape_mesh",
    "solve",
    "structured_mesh",
]
