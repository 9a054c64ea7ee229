"""Inverse scattering energies, Hamiltonian hierarchy and integrable flows."""

from ._core import (
    IscatError,
    energy,
    energy_quadratic,
    evolve,
    expand_log_t,
    find_poles,
    generate,
    grid_points,
    hamiltonian,
    hamiltonian_density,
    momentum,
    quartic_term,
    transmission_inverse,
)

__all__ = [
    "IscatError",
    "energy",
    "energy_quadratic",
    "evolve",
    "expand_log_t",
    "find_poles",
    "generate",
    "grid_points",
    "hamiltonian",
    "hamiltonian_density",
    "momentum",
    "quartic_term",
    "transmission_inverse",
]
