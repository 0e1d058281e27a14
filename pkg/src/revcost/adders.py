"""Reversible full/half adder blocks and exhaustive 4-line adder enumeration.

An :class:`AdderBlock` wraps a small NCT circuit with a pinout: which lines
carry the operands, which line is the fresh 0-ancilla, and where the sum and
carry appear.  ``enumerate_full_adders`` searches every NCT gate sequence on
four lines up to a length bound for circuits computing (sum, majority) on
some output pair, the constructive version of the claim that 4x4 full-adder
gates are plentiful.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .circuit import (
    Circuit,
    Gate,
    GateKind,
    LineRole,
    PreconditionError,
    ResourceError,
    SemanticsError,
    StructuralError,
    cnot,
    toffoli,
)
from .optimize import quantum_cost
from .semantics import apply_gate_basis, permutation_of

FULL_ADDER_LINES = 4  # a, b, c_in, ancilla


@dataclass(frozen=True)
class AdderBlock:
    """A sum/carry block: operand lines in, sum and carry lines out."""

    circuit: Circuit
    inputs: tuple[int, ...]  # (a, b) for a half adder, (a, b, c_in) for full
    ancilla: int
    sum_line: int
    carry_line: int
    name: str = ""

    @property
    def is_full(self) -> bool:
        return len(self.inputs) == 3

    def __post_init__(self) -> None:
        validate_adder_block(self)


def validate_adder_block(block: AdderBlock) -> None:
    """Exhaustive truth-table check of the sum/carry contract."""
    c = block.circuit
    lines = (*block.inputs, block.ancilla, block.sum_line, block.carry_line)
    if len(set((*block.inputs, block.ancilla))) != len(block.inputs) + 1:
        raise StructuralError("pinout lines must be distinct")
    if any(not 0 <= ln < c.n_lines for ln in lines):
        raise StructuralError("pinout line out of range")
    if block.sum_line == block.carry_line:
        raise StructuralError("sum and carry must be distinct lines")
    if c.roles[block.ancilla].constant_value != 0:
        raise StructuralError("ancilla line must be a constant-0 input")
    for values in itertools.product((0, 1), repeat=len(block.inputs)):
        state = 0
        for line, bit in zip(block.inputs, values):
            state |= bit << line
        for g in c.gates:
            if not g.kind.is_classical:
                raise SemanticsError(f"non-classical gate {g} in adder block")
            state = apply_gate_basis(g, state)
        total = sum(values)
        if (state >> block.sum_line) & 1 != total % 2:
            raise StructuralError(f"sum output wrong for inputs {values}")
        if (state >> block.carry_line) & 1 != total // 2:
            raise StructuralError(f"carry output wrong for inputs {values}")


def _block_roles(n: int, ancilla: int, sum_line: int, carry_line: int) -> tuple[LineRole, ...]:
    roles = []
    for i in range(n):
        output = "s" if i == sum_line else "c" if i == carry_line else None
        if i == ancilla:
            roles.append(LineRole.zero(output))
        else:
            roles.append(LineRole.primary(output))
    return tuple(roles)


def full_adder_maslov() -> AdderBlock:
    """The four-gate NCT full adder: quantum cost 6."""
    gates = (toffoli(0, 1, 3), cnot(0, 1), toffoli(1, 2, 3), cnot(1, 2))
    circuit = Circuit(4, _block_roles(4, 3, 2, 3), gates)
    return AdderBlock(circuit, (0, 1, 2), 3, sum_line=2, carry_line=3, name="maslov")


def half_adder() -> AdderBlock:
    """Toffoli plus CNOT on three lines: quantum cost 4."""
    gates = (toffoli(0, 1, 2), cnot(0, 1))
    circuit = Circuit(3, _block_roles(3, 2, 1, 2), gates)
    return AdderBlock(circuit, (0, 1), 2, sum_line=1, carry_line=2, name="half")


def _nct_pool_4() -> list[Gate]:
    pool = [Gate(GateKind.NOT, (), (t,)) for t in range(4)]
    pool += [cnot(c, t) for c in range(4) for t in range(4) if c != t]
    pool += [
        toffoli(c1, c2, t)
        for c1 in range(4)
        for c2 in range(4)
        for t in range(4)
        if c1 < c2 and t not in (c1, c2)
    ]
    return pool


# bit k of a line mask = that line's value on 4-bit input k (line i = bit i of k)
_LINE_MASKS = (0xAAAA, 0xCCCC, 0xF0F0, 0xFF00)
_LOW = 0xFF  # inputs with the ancilla (line 3) at zero
_SUM8 = (_LINE_MASKS[0] ^ _LINE_MASKS[1] ^ _LINE_MASKS[2]) & _LOW
_MAJ8 = (
    (_LINE_MASKS[0] & _LINE_MASKS[1])
    | (_LINE_MASKS[0] & _LINE_MASKS[2])
    | (_LINE_MASKS[1] & _LINE_MASKS[2])
) & _LOW


def _apply_mask_gate(masks: tuple[int, int, int, int], g: Gate) -> tuple[int, int, int, int]:
    m = list(masks)
    t = g.targets[0]
    if g.kind is GateKind.NOT:
        m[t] ^= 0xFFFF
    elif g.kind is GateKind.CNOT:
        m[t] ^= m[g.controls[0]]
    else:  # TOFFOLI
        m[t] ^= m[g.controls[0]] & m[g.controls[1]]
    return tuple(m)


def _find_pinout(masks: tuple[int, int, int, int]) -> tuple[int, int] | None:
    sums = [i for i in range(4) if masks[i] & _LOW == _SUM8]
    carries = [i for i in range(4) if masks[i] & _LOW == _MAJ8]
    for s in sums:
        for c in carries:
            if s != c:
                return s, c
    return None


def _canonical_cost_key(gates: Sequence[Gate]) -> tuple:
    """Min encoding over line permutations; cost is renumbering-invariant.

    Control order is preserved: the Toffoli lowering is keyed on it, so only
    true relabelings may share a cache entry.
    """
    best = None
    for perm in itertools.permutations(range(4)):
        mapping = dict(enumerate(perm))
        enc = tuple(
            (g.kind.value, tuple(mapping[c] for c in g.controls), mapping[g.targets[0]])
            for g in gates
        )
        if best is None or enc < best:
            best = enc
    return best


def enumerate_full_adders(max_gates: int = 4) -> list[AdderBlock]:
    """Every distinct NCT full adder on four lines with at most ``max_gates``
    gates; deduplicated by basis-state permutation, canonically ordered, and
    (at length four) restricted to quantum cost 6."""
    if max_gates > 5:
        raise ResourceError("enumeration bounded at five gates")
    pool = _nct_pool_4()
    found: dict[tuple, tuple[tuple, tuple[Gate, ...], int, int]] = {}

    def encode(seq: list[Gate]) -> tuple:
        return tuple((g.kind.value, g.controls, g.targets) for g in seq)

    def rec(masks: tuple[int, int, int, int], seq: list[Gate], depth: int) -> None:
        pin = _find_pinout(masks)
        if pin is not None and seq:
            candidate = ((len(seq), encode(seq)), tuple(seq), *pin)
            prev = found.get(masks)
            if prev is None or candidate[0] < prev[0]:
                found[masks] = candidate
        if depth == max_gates:
            return
        for g in pool:
            seq.append(g)
            rec(_apply_mask_gate(masks, g), seq, depth + 1)
            seq.pop()

    rec(_LINE_MASKS, [], 0)

    cost_cache: dict[tuple, int] = {}
    blocks: list[AdderBlock] = []
    for _, gates, s, c in sorted(found.values(), key=lambda item: item[0]):
        if len(gates) == 4:
            key = _canonical_cost_key(gates)
            cost = cost_cache.get(key)
            if cost is None:
                probe = Circuit(4, _block_roles(4, 3, s, c), gates)
                cost = quantum_cost(probe)
                cost_cache[key] = cost
            if cost != 6:
                continue
        circuit = Circuit(4, _block_roles(4, 3, s, c), gates)
        blocks.append(
            AdderBlock(circuit, (0, 1, 2), 3, sum_line=s, carry_line=c)
        )
    return blocks


_NAMED_CACHE: dict[str, AdderBlock] | None = None


def named_blocks() -> dict[str, AdderBlock]:
    """Exported blocks addressable by name: maslov, pfag, a1..a3, half."""
    global _NAMED_CACHE
    if _NAMED_CACHE is None:
        blocks = {"maslov": full_adder_maslov(), "half": half_adder()}
        # pfag is the black-box view of the maslov netlist
        blocks["pfag"] = AdderBlock(
            blocks["maslov"].circuit, (0, 1, 2), 3, 2, 3, name="pfag"
        )
        maslov_perm = permutation_of(blocks["maslov"].circuit)
        alternates = []
        for block in enumerate_full_adders(4):
            if permutation_of(block.circuit) == maslov_perm:
                continue
            alternates.append(block)
            if len(alternates) == 3:
                break
        for i, block in enumerate(alternates, start=1):
            blocks[f"a{i}"] = AdderBlock(
                block.circuit, block.inputs, block.ancilla,
                block.sum_line, block.carry_line, name=f"a{i}",
            )
        _NAMED_CACHE = blocks
    return _NAMED_CACHE


_PATTERNS_2 = {
    (1, 1, 1, 0): "nand",
    (1, 0, 0, 0): "nor",
    (0, 0, 0, 1): "and",
    (0, 1, 1, 1): "or",
}


def universality_witness(c: Circuit | AdderBlock) -> dict[str, tuple] | None:
    """Constant assignments and output lines realizing a complete basis.

    Returns ``{"nand": (assignment, output)}`` style evidence, or the
    AND/OR + NOT combination, or None when the block is not universal.
    """
    if isinstance(c, AdderBlock):
        c = c.circuit
    if c.n_lines > 6:
        raise ResourceError("universality check bounded at six lines")
    for g in c.gates:
        if not g.kind.is_classical:
            raise PreconditionError(f"non-classical gate {g}")
    n = c.n_lines
    strong: dict[str, tuple] = {}
    weak: dict[str, tuple] = {}
    for free in itertools.combinations(range(n), 2):
        fixed = [i for i in range(n) if i not in free]
        for constants in itertools.product((0, 1), repeat=len(fixed)):
            base = sum(bit << line for line, bit in zip(fixed, constants))
            outs = []
            for xy in range(4):
                state = base | ((xy & 1) << free[0]) | ((xy >> 1) << free[1])
                for g in c.gates:
                    state = apply_gate_basis(g, state)
                outs.append(state)
            for line in range(n):
                pattern = tuple((s >> line) & 1 for s in outs)
                op = _PATTERNS_2.get(pattern)
                if op in ("nand", "nor"):
                    strong[op] = (dict(zip(fixed, constants)), free, line)
                elif op in ("and", "or"):
                    weak[op] = (dict(zip(fixed, constants)), free, line)
    for free_line in range(n):
        fixed = [i for i in range(n) if i != free_line]
        for constants in itertools.product((0, 1), repeat=len(fixed)):
            base = sum(bit << line for line, bit in zip(fixed, constants))
            outs = []
            for xv in (0, 1):
                state = base | (xv << free_line)
                for g in c.gates:
                    state = apply_gate_basis(g, state)
                outs.append(state)
            for line in range(n):
                if ((outs[0] >> line) & 1, (outs[1] >> line) & 1) == (1, 0):
                    weak["not"] = (dict(zip(fixed, constants)), (free_line,), line)
    if strong:
        op = sorted(strong)[0]
        return {op: strong[op]}
    if ("and" in weak or "or" in weak) and "not" in weak:
        op = "and" if "and" in weak else "or"
        return {op: weak[op], "not": weak["not"]}
    return None


def universality_check(c: Circuit | AdderBlock) -> bool:
    """True iff constants plus one output line realize a complete basis."""
    return universality_witness(c) is not None
