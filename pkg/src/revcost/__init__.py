"""Reversible-circuit toolkit.

Lowers macro reversible gates to 1- and 2-line quantum primitives, optimizes
the result with deletion/moving/template rules to report quantum cost, and
generates and verifies reversible multiplier circuits.
"""
from .circuit import (
    Circuit,
    Gate,
    GateKind,
    InputKind,
    Library,
    LineRole,
    PreconditionError,
    ResourceCounts,
    ResourceError,
    SemanticsError,
    StructuralError,
    append_gate,
    cnot,
    cv,
    cv_dag,
    fredkin,
    inverse,
    new_circuit,
    peres,
    resource_counts,
    swap,
    toffoli,
    v,
    v_dag,
    x,
)
from .semantics import (
    DyadicGaussian,
    ExactUnitary,
    Permutation,
    commute,
    equivalent,
    permutation_of,
    simulate_basis,
    unitary_of,
)

__all__ = [name for name in dir() if not name.startswith("_")]
