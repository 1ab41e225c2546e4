"""Bound states and information entropies of a hydrogen-like ion in a
spherical cavity.

The package solves the radial problem inside an impenetrable sphere,
transforms the eigenfunctions to momentum space, and evaluates Renyi,
Shannon, Tsallis and Onicescu measures in position, momentum and
composite spaces, with analytic free-atom references and exact
charge-scaling maps.
"""

from .angular import AngularFactor, angular_factor, angular_moment, angular_shannon, chi
from .entropy import (
    DEFAULT_ORDERS,
    EntropicOrders,
    InfoMeasures,
    compute_all,
    onicescu,
    radial_moment,
    renyi,
    renyi_sum,
    scale_measures,
    shannon,
    tsallis,
)
from .errors import CavionError, ConvergenceError, PrecisionLossError, ValidationError
from .momentum import MomentumSolution, PSpec, choose_pmax, fha_momentum, to_momentum
from .solver import (
    Confinement,
    GridSpec,
    QuantumNumbers,
    RadialSolution,
    energy_scaling,
    fha_radial,
    kummer_boundary,
    solve_state,
)

__version__ = "0.1.0"

__all__ = [
    "AngularFactor",
    "CavionError",
    "Confinement",
    "ConvergenceError",
    "DEFAULT_ORDERS",
    "EntropicOrders",
    "GridSpec",
    "InfoMeasures",
    "MomentumSolution",
    "PSpec",
    "PrecisionLossError",
    "QuantumNumbers",
    "RadialSolution",
    "ValidationError",
    "angular_factor",
    "angular_moment",
    "angular_shannon",
    "chi",
    "choose_pmax",
    "compute_all",
    "energy_scaling",
    "fha_momentum",
    "fha_radial",
    "kummer_boundary",
    "onicescu",
    "radial_moment",
    "renyi",
    "renyi_sum",
    "scale_measures",
    "shannon",
    "solve_state",
    "to_momentum",
    "tsallis",
]
