"""Gate and circuit IR for reversible logic.

A :class:`Gate` is an immutable record of a gate kind applied to integer line
indices (controls and targets).  A :class:`Circuit` is an immutable ordered
gate list over ``n_lines`` lines, where every line carries an input role
(primary input / constant 0 / constant 1) and an output tag (a named primary
output, or garbage).

Circuits are values: every edit returns a new circuit, so they are safe to
share across threads.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple


class StructuralError(ValueError):
    """A gate or circuit violates a structural invariant."""


class SemanticsError(ValueError):
    """An operation was asked to interpret a gate it has no semantics for."""


class PreconditionError(ValueError):
    """An operation's documented precondition does not hold."""


class ResourceError(RuntimeError):
    """A size bound (line count, search depth) was exceeded."""


class GateKind(Enum):
    """Reversible gate kinds.

    ``V``/``V_DAG`` are the square root of NOT and its inverse; ``CV`` and
    ``CV_DAG`` are their singly-controlled forms.  Everything else maps basis
    states to basis states.
    """

    NOT = "not"
    CNOT = "cnot"
    TOFFOLI = "toffoli"
    FREDKIN = "fredkin"
    SWAP = "swap"
    PERES = "peres"
    V = "v"
    V_DAG = "v_dag"
    CV = "cv"
    CV_DAG = "cv_dag"

    @property
    def n_controls(self) -> int:
        return _ARITY[self][0]

    @property
    def n_targets(self) -> int:
        return _ARITY[self][1]

    @property
    def lines_touched(self) -> int:
        c, t = _ARITY[self]
        return c + t

    @property
    def is_primitive(self) -> bool:
        """True for the 1x1 and 2x2 kinds, the unit of quantum cost."""
        return self.lines_touched <= 2

    @property
    def is_classical(self) -> bool:
        """True for kinds that permute basis states."""
        return self not in (GateKind.V, GateKind.V_DAG, GateKind.CV, GateKind.CV_DAG)


# kind -> (number of controls, number of targets)
_ARITY: dict[GateKind, tuple[int, int]] = {
    GateKind.NOT: (0, 1),
    GateKind.CNOT: (1, 1),
    GateKind.TOFFOLI: (2, 1),
    GateKind.FREDKIN: (1, 2),
    GateKind.SWAP: (0, 2),
    GateKind.PERES: (2, 1),
    GateKind.V: (0, 1),
    GateKind.V_DAG: (0, 1),
    GateKind.CV: (1, 1),
    GateKind.CV_DAG: (1, 1),
}


@dataclass(frozen=True)
class Gate:
    """One reversible gate over integer line indices.

    ``controls`` is an ordered duplicate-free tuple, ``targets`` holds one
    line, or the swapped pair for SWAP/FREDKIN.  For PERES on ``(a, b, t)``
    the controls are ``(a, b)`` and the target ``t``; it acts as a Toffoli on
    ``t`` followed by a CNOT ``a -> b``, so control order is significant.
    """

    kind: GateKind
    controls: tuple[int, ...]
    targets: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "controls", tuple(self.controls))
        object.__setattr__(self, "targets", tuple(self.targets))
        want_c, want_t = _ARITY[self.kind]
        if len(self.controls) != want_c or len(self.targets) != want_t:
            raise StructuralError(
                f"{self.kind.name} takes {want_c} control(s) and {want_t} "
                f"target(s), got {self.controls} / {self.targets}"
            )
        lines = self.controls + self.targets
        if any(x < 0 for x in lines):
            raise StructuralError(f"negative line index in {lines}")
        if len(set(lines)) != len(lines):
            raise StructuralError(
                f"{self.kind.name} lines must be distinct, got {lines}"
            )

    @property
    def lines(self) -> tuple[int, ...]:
        return self.controls + self.targets

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.lines)

    def relabel(self, mapping: dict[int, int]) -> "Gate":
        """Return the same gate with every line renamed through ``mapping``."""
        return Gate(
            self.kind,
            tuple(mapping[c] for c in self.controls),
            tuple(mapping[t] for t in self.targets),
        )

    def __str__(self) -> str:
        body = ",".join(map(str, self.lines))
        return f"{self.kind.name}({body})"


def x(t: int) -> Gate:
    return Gate(GateKind.NOT, (), (t,))


def cnot(c: int, t: int) -> Gate:
    return Gate(GateKind.CNOT, (c,), (t,))


def toffoli(c1: int, c2: int, t: int) -> Gate:
    return Gate(GateKind.TOFFOLI, (c1, c2), (t,))


def fredkin(c: int, t1: int, t2: int) -> Gate:
    return Gate(GateKind.FREDKIN, (c,), (t1, t2))


def swap(t1: int, t2: int) -> Gate:
    return Gate(GateKind.SWAP, (), (t1, t2))


def peres(a: int, b: int, t: int) -> Gate:
    return Gate(GateKind.PERES, (a, b), (t,))


def v(t: int) -> Gate:
    return Gate(GateKind.V, (), (t,))


def v_dag(t: int) -> Gate:
    return Gate(GateKind.V_DAG, (), (t,))


def cv(c: int, t: int) -> Gate:
    return Gate(GateKind.CV, (c,), (t,))


def cv_dag(c: int, t: int) -> Gate:
    return Gate(GateKind.CV_DAG, (c,), (t,))


_INVERSE_KIND = {
    GateKind.V: GateKind.V_DAG,
    GateKind.V_DAG: GateKind.V,
    GateKind.CV: GateKind.CV_DAG,
    GateKind.CV_DAG: GateKind.CV,
}


def inverse_gates(gates: Iterable[Gate]) -> tuple[Gate, ...]:
    """Inverse of a gate sequence: reversed order, each gate inverted.

    V-family kinds swap with their daggered twins.  Classical kinds are
    self-inverse except PERES, whose inverse is emitted as its CNOT+Toffoli
    pair (there is no single-gate inverse kind for it).
    """
    out: list[Gate] = []
    for g in reversed(tuple(gates)):
        if g.kind in _INVERSE_KIND:
            out.append(Gate(_INVERSE_KIND[g.kind], g.controls, g.targets))
        elif g.kind is GateKind.PERES:
            a, b = g.controls
            out.append(cnot(a, b))
            out.append(toffoli(a, b, g.targets[0]))
        else:
            out.append(g)
    return tuple(out)


class InputKind(Enum):
    PRIMARY = "primary"
    CONST_ZERO = "const0"
    CONST_ONE = "const1"


@dataclass(frozen=True)
class LineRole:
    """Input role plus output tag of one circuit line.

    ``output`` is the primary-output name, or ``None`` for a garbage line.
    """

    input: InputKind
    output: str | None = None

    @classmethod
    def primary(cls, output: str | None = None) -> "LineRole":
        return cls(InputKind.PRIMARY, output)

    @classmethod
    def zero(cls, output: str | None = None) -> "LineRole":
        return cls(InputKind.CONST_ZERO, output)

    @classmethod
    def one(cls, output: str | None = None) -> "LineRole":
        return cls(InputKind.CONST_ONE, output)

    @property
    def is_constant(self) -> bool:
        return self.input is not InputKind.PRIMARY

    @property
    def constant_value(self) -> int | None:
        if self.input is InputKind.CONST_ZERO:
            return 0
        if self.input is InputKind.CONST_ONE:
            return 1
        return None

    @property
    def is_garbage(self) -> bool:
        return self.output is None


class Library(Enum):
    """Declared gate libraries, smallest to widest."""

    NCT = "nct"
    NCTSF = "nctsf"
    NCV = "ncv"
    MIXED = "mixed"


_LIBRARY_KINDS: dict[Library, frozenset[GateKind]] = {
    Library.NCT: frozenset({GateKind.NOT, GateKind.CNOT, GateKind.TOFFOLI}),
    Library.NCTSF: frozenset(
        {GateKind.NOT, GateKind.CNOT, GateKind.TOFFOLI, GateKind.SWAP, GateKind.FREDKIN}
    ),
    Library.NCV: frozenset(
        {GateKind.NOT, GateKind.CNOT, GateKind.V, GateKind.V_DAG, GateKind.CV, GateKind.CV_DAG}
    ),
    Library.MIXED: frozenset(GateKind),
}


def infer_library(kinds: Iterable[GateKind]) -> Library:
    """Smallest declared library containing every kind present."""
    present = set(kinds)
    for lib in (Library.NCT, Library.NCTSF, Library.NCV):
        if present <= _LIBRARY_KINDS[lib]:
            return lib
    return Library.MIXED


_NAME_OK = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list over ``n_lines`` role-annotated lines."""

    n_lines: int
    roles: tuple[LineRole, ...]
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "roles", tuple(self.roles))
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_lines < 1:
            raise StructuralError("a circuit needs at least one line")
        if len(self.roles) != self.n_lines:
            raise StructuralError(
                f"{self.n_lines} lines but {len(self.roles)} roles"
            )
        names = [r.output for r in self.roles if r.output is not None]
        if len(set(names)) != len(names):
            raise StructuralError(f"duplicate output names in {names}")
        for name in names:
            if not _NAME_OK.match(name):
                raise StructuralError(f"bad output name {name!r}")
        for g in self.gates:
            if max(g.lines) >= self.n_lines:
                raise StructuralError(
                    f"gate {g} out of range for {self.n_lines} lines"
                )

    @property
    def library(self) -> Library:
        """Smallest library tag consistent with the kinds present."""
        return infer_library(g.kind for g in self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def with_gates(self, gates: Iterable[Gate]) -> "Circuit":
        """Same lines and roles, different gate list."""
        return Circuit(self.n_lines, self.roles, tuple(gates))

    def output_line(self, name: str) -> int:
        """Line index of the primary output called ``name``."""
        for i, role in enumerate(self.roles):
            if role.output == name:
                return i
        raise KeyError(name)


def new_circuit(n_lines: int, roles: Iterable[LineRole]) -> Circuit:
    """Empty circuit (identity behavior) over the given roles."""
    return Circuit(n_lines, tuple(roles))


def append_gate(c: Circuit, g: Gate) -> Circuit:
    """New circuit with ``g`` appended; all invariants re-checked."""
    return Circuit(c.n_lines, c.roles, c.gates + (g,))


def inverse(c: Circuit) -> Circuit:
    """Circuit computing the inverse map; composing the two is the identity."""
    return c.with_gates(inverse_gates(c.gates))


class ResourceCounts(NamedTuple):
    gate_count: int
    garbage: int
    constants: int


def resource_counts(c: Circuit) -> ResourceCounts:
    """Gate count plus declared garbage-output and constant-input counts."""
    return ResourceCounts(
        gate_count=len(c.gates),
        garbage=sum(1 for r in c.roles if r.is_garbage),
        constants=sum(1 for r in c.roles if r.is_constant),
    )
