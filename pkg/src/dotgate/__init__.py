"""Simulation and pulse design for two Heisenberg-coupled spin-1/2 quantum
dots in parallel magnetic fields.

The package provides closed-form propagators for several exactly solvable
pulse families, an independent numerical integrator for validation, a
Heitler-London exchange-coupling calculator for unequal fields, and designers
that pick pulse parameters realizing the XOR (CNOT-class) gate.
"""

__version__ = "0.1.0"

from .algebra import fidelity_phase_invariant, swap_operator
from .dynamics import (
    ConstantPulse,
    FreePulse,
    ProportionalPulse,
    QVectorPath,
    SampledPulse,
    SechPulse,
    build_hamiltonian,
    build_parallel_hamiltonian,
    free_evolution,
    lift_two_level,
    propagator,
    swap_probability,
)
from .designer import (
    GateDesign,
    design_adiabatic_xor,
    design_proportional_xor,
    xor_sequence,
    xor_target,
)
from .exchange import DotParameters, ExchangeBreakdown, FieldPair, exchange_J
from .oracle import IntegratorConfig, evolve_numeric

__all__ = [
    "__version__",
    "fidelity_phase_invariant",
    "swap_operator",
    "ConstantPulse",
    "FreePulse",
    "ProportionalPulse",
    "QVectorPath",
    "SampledPulse",
    "SechPulse",
    "build_hamiltonian",
    "build_parallel_hamiltonian",
    "free_evolution",
    "lift_two_level",
    "propagator",
    "swap_probability",
    "GateDesign",
    "design_adiabatic_xor",
    "design_proportional_xor",
    "xor_sequence",
    "xor_target",
    "DotParameters",
    "ExchangeBreakdown",
    "FieldPair",
    "exchange_J",
    "IntegratorConfig",
    "evolve_numeric",
]
