"""Quasiclassical coherent-state propagator engine.

Thin python facade over the C++ core: phase-space geometry, covariant
symbols, boundary-value classical dynamics and the quasiclassical amplitude,
cross-checked against exact finite-dimensional quantum evolution.
"""

from ._core import (
    BoundaryData,
    HamiltonianSpec,
    PhaseSpaceGeometry,
    QcpropError,
    SolverSettings,
    covariant_symbol,
    exact_amplitude,
    geometry,
    hamiltonian,
    kahler_potential,
    liouville_density,
    metric,
    oscillator,
    overlap,
    parametric_amplifier,
    propagator_flat_alpha,
    propagator_qc,
    run_propagate_json,
    solve_trajectory,
    su2_linear,
    su2_quadratic,
    validate_acceptance,
)

__all__ = [
    "BoundaryData",
    "HamiltonianSpec",
    "PhaseSpaceGeometry",
    "QcpropError",
    "SolverSettings",
    "covariant_symbol",
    "exact_amplitude",
    "geometry",
    "hamiltonian",
    "kahler_potential",
    "liouville_density",
    "metric",
    "oscillator",
    "overlap",
    "parametric_amplifier",
    "propagator_flat_alpha",
    "propagator_qc",
    "run_propagate_json",
    "solve_trajectory",
    "su2_linear",
    "su2_quadratic",
    "validate_acceptance",
]
