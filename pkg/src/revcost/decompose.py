"""Lowering passes: macro gates to NCT, NCT to quantum primitives, fan-out to copies.

``to_primitives`` rewrites every gate into the 1- and 2-line costing basis
{NOT, CNOT, V, V+, CV, CV+}.  Each expansion is a fixed gate sequence proven
exactly unitary-equal to its macro (the equivalence tests pin them), so the
pass is deterministic and idempotent.
"""
from __future__ import annotations

from .circuit import (
    Circuit,
    Gate,
    GateKind,
    InputKind,
    PreconditionError,
    StructuralError,
    cnot,
    cv,
    cv_dag,
    toffoli,
)


def decompose_toffoli(g: Gate) -> list[Gate]:
    """Toffoli as the five-primitive CV/CNOT sequence."""
    if g.kind is not GateKind.TOFFOLI:
        raise StructuralError(f"expected TOFFOLI, got {g.kind.name}")
    a, b = g.controls
    t = g.targets[0]
    return [cv(b, t), cnot(a, b), cv_dag(b, t), cnot(a, b), cv(a, t)]


def decompose_fredkin(g: Gate) -> list[Gate]:
    """Fredkin as a CNOT-conjugated Toffoli."""
    if g.kind is not GateKind.FREDKIN:
        raise StructuralError(f"expected FREDKIN, got {g.kind.name}")
    a = g.controls[0]
    b, c = g.targets
    return [cnot(c, b), toffoli(a, b, c), cnot(c, b)]


def decompose_peres(g: Gate) -> list[Gate]:
    """Peres as Toffoli followed by CNOT on its control pair."""
    if g.kind is not GateKind.PERES:
        raise StructuralError(f"expected PERES, got {g.kind.name}")
    a, b = g.controls
    t = g.targets[0]
    return [toffoli(a, b, t), cnot(a, b)]


def decompose_swap(g: Gate) -> list[Gate]:
    if g.kind is not GateKind.SWAP:
        raise StructuralError(f"expected SWAP, got {g.kind.name}")
    t1, t2 = g.targets
    return [cnot(t1, t2), cnot(t2, t1), cnot(t1, t2)]


def _fredkin_primitives(g: Gate) -> list[Gate]:
    # Direct NCV form of the controlled swap: nine gates arranged as seven
    # 2-line primitives.  One redundant commuting CNOT pair is kept apart so
    # the optimizer's moving rule exposes and deletes it, landing on a
    # 7-gate arrangement that packs into five 2-line primitives.
    a = g.controls[0]
    b, c = g.targets
    return [
        cnot(a, b),
        cnot(b, c),
        cnot(a, b),
        cv(c, b),
        cv(a, b),
        cnot(a, b),
        cnot(a, c),
        cv_dag(c, b),
        cnot(b, c),
    ]


def to_primitives(c: Circuit) -> Circuit:
    """Expand every gate into 1- and 2-line primitives; lines and roles kept."""
    out: list[Gate] = []
    for g in c.gates:
        if g.kind.is_primitive and g.kind is not GateKind.SWAP:
            out.append(g)
        elif g.kind is GateKind.SWAP:
            out.extend(decompose_swap(g))
        elif g.kind is GateKind.TOFFOLI:
            out.extend(decompose_toffoli(g))
        elif g.kind is GateKind.PERES:
            t, cx = decompose_peres(g)
            out.extend(decompose_toffoli(t))
            out.append(cx)
        elif g.kind is GateKind.FREDKIN:
            out.extend(_fredkin_primitives(g))
        else:  # pragma: no cover - GateKind is closed
            raise StructuralError(f"no expansion for {g.kind.name}")
    return c.with_gates(out)


def copy_gate(c: Circuit, source_line: int, zero_line: int) -> Gate:
    """The reversible fan-out substitute: CNOT from source onto a 0-ancilla."""
    if not 0 <= zero_line < c.n_lines or not 0 <= source_line < c.n_lines:
        raise StructuralError("line out of range")
    if c.roles[zero_line].input is not InputKind.CONST_ZERO:
        raise PreconditionError(
            f"copy target line {zero_line} is not a constant-0 input"
        )
    return cnot(source_line, zero_line)
