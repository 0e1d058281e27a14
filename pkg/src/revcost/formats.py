"""Reversible-circuit file formats: a TFC dialect and a RevLib-style REAL dialect.

Both dialects are restricted to gates on at most three lines.  ``#`` starts a
comment in either dialect.  Parsing is all-or-nothing: errors carry a 1-based
line number and never yield a partial circuit.

Emission canonicalizes variable names to ``l0..l{n-1}`` except for lines with
a declared primary-output name, which use that name; this keeps output tags
(and therefore structural equality) stable across a parse/emit round trip.
"""
from __future__ import annotations

import re

from .circuit import (
    Circuit,
    Gate,
    GateKind,
    InputKind,
    LineRole,
    cnot,
    cv,
    cv_dag,
    fredkin,
    peres,
    swap,
    toffoli,
    v,
    v_dag,
    x,
)


class ParseError(ValueError):
    """Malformed circuit file; ``line`` is 1-based."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmitError(ValueError):
    """Circuit not representable in the requested dialect."""


_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def _line_names(c: Circuit) -> list[str]:
    names = []
    for i, role in enumerate(c.roles):
        names.append(role.output if role.output is not None else f"l{i}")
    if len(set(names)) != len(names):
        raise EmitError(f"output names collide with canonical line names: {names}")
    return names


def _emit_gate(g: Gate, names: list[str], dialect: str, sep: str) -> str:
    kind = g.kind
    if kind is GateKind.NOT:
        mnem, lines = "t1", g.targets
    elif kind is GateKind.CNOT:
        mnem, lines = "t2", g.lines
    elif kind is GateKind.TOFFOLI:
        mnem, lines = "t3", g.lines
    elif kind is GateKind.FREDKIN:
        mnem, lines = "f3", g.lines
    elif kind is GateKind.SWAP:
        if dialect == "tfc":
            raise EmitError("SWAP has no TFC token; lower it or use the REAL dialect")
        mnem, lines = "f2", g.lines
    elif kind is GateKind.PERES:
        mnem, lines = "p3", g.lines
    elif kind is GateKind.V:
        mnem, lines = "v", g.lines
    elif kind is GateKind.V_DAG:
        mnem, lines = "v+", g.lines
    elif kind is GateKind.CV:
        mnem, lines = "v", g.lines
    elif kind is GateKind.CV_DAG:
        mnem, lines = "v+", g.lines
    else:  # pragma: no cover - GateKind is closed
        raise EmitError(f"unrepresentable kind {kind.name}")
    return f"{mnem} " + sep.join(names[i] for i in lines)


_GATE_BUILDERS = {
    ("t", 1): lambda a: x(a),
    ("t", 2): lambda a, b: cnot(a, b),
    ("t", 3): lambda a, b, c: toffoli(a, b, c),
    ("f", 2): lambda a, b: swap(a, b),
    ("f", 3): lambda a, b, c: fredkin(a, b, c),
    ("p", 3): lambda a, b, c: peres(a, b, c),
    ("v", 1): lambda a: v(a),
    ("v", 2): lambda a, b: cv(a, b),
    ("v+", 1): lambda a: v_dag(a),
    ("v+", 2): lambda a, b: cv_dag(a, b),
}


def _build_gate(mnem: str, operands: list[int], lineno: int) -> Gate:
    if mnem in ("v", "v+"):
        key = (mnem, len(operands))
    elif mnem and mnem[0] in "tfp" and mnem[1:].isdigit():
        key = (mnem[0], int(mnem[1:]))
        if len(operands) != key[1]:
            raise ParseError(lineno, f"{mnem} takes {key[1]} operands")
    else:
        raise ParseError(lineno, f"unknown gate mnemonic {mnem!r}")
    builder = _GATE_BUILDERS.get(key)
    if builder is None:
        raise ParseError(lineno, f"unknown gate mnemonic {mnem!r}")
    try:
        return builder(*operands)
    except ValueError as exc:
        raise ParseError(lineno, str(exc)) from None


class _Reader:
    """Comment-stripping line reader that remembers 1-based positions."""

    def __init__(self, text: str) -> None:
        self.rows: list[tuple[int, str]] = []
        for i, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.split("#", 1)[0].strip()
            if stripped:
                self.rows.append((i, stripped))
        self.pos = 0
        self.last_line = self.rows[-1][0] if self.rows else 1

    def __iter__(self):
        return iter(self.rows)


def _split_names(body: str, lineno: int) -> list[str]:
    parts = [p.strip() for p in re.split(r"[,\s]+", body) if p.strip()]
    for p in parts:
        if not _TOKEN.match(p):
            raise ParseError(lineno, f"bad name {p!r}")
    return parts


def _roles_from_headers(
    variables: list[str],
    inputs: list[str] | None,
    outputs: list[str] | None,
    constants: str | None,
    garbage: str | None,
    lineno: int,
) -> tuple[LineRole, ...]:
    n = len(variables)
    const_map: list[int | None] = [None] * n
    if constants is not None:
        if len(constants) != n:
            raise ParseError(lineno, f"constants string must have {n} entries")
        for i, ch in enumerate(constants):
            if ch == "0":
                const_map[i] = 0
            elif ch == "1":
                const_map[i] = 1
            elif ch != "-":
                raise ParseError(lineno, f"bad constants flag {ch!r}")
    input_set = set(inputs) if inputs is not None else None
    if input_set is not None:
        unknown = input_set - set(variables)
        if unknown:
            raise ParseError(lineno, f"undeclared input name(s) {sorted(unknown)}")
        for i, name in enumerate(variables):
            declared_input = name in input_set
            if declared_input and const_map[i] is not None:
                raise ParseError(lineno, f"line {name} is both input and constant")
            if not declared_input and const_map[i] is None:
                raise ParseError(
                    lineno, f"line {name} is neither an input nor a constant"
                )
    garbage_flags: list[bool] | None = None
    if garbage is not None:
        if len(garbage) != n:
            raise ParseError(lineno, f"garbage string must have {n} entries")
        for ch in garbage:
            if ch not in "1-":
                raise ParseError(lineno, f"bad garbage flag {ch!r}")
        garbage_flags = [ch == "1" for ch in garbage]
    out_names: list[str | None] = [None] * n
    if outputs is not None:
        known = set(variables)
        for name in outputs:
            if name not in known:
                raise ParseError(lineno, f"undeclared output name {name!r}")
        out_set = set(outputs)
        if len(out_set) != len(outputs):
            raise ParseError(lineno, "duplicate output name")
        for i, name in enumerate(variables):
            if name in out_set:
                out_names[i] = name
    if garbage_flags is not None:
        for i, flagged in enumerate(garbage_flags):
            if flagged and out_names[i] is not None:
                raise ParseError(
                    lineno, f"line {variables[i]} declared both output and garbage"
                )
    roles = []
    for i in range(n):
        if const_map[i] == 0:
            kind = InputKind.CONST_ZERO
        elif const_map[i] == 1:
            kind = InputKind.CONST_ONE
        else:
            kind = InputKind.PRIMARY
        roles.append(LineRole(kind, out_names[i]))
    return tuple(roles)


def parse_tfc(text: str) -> Circuit:
    """Parse the TFC dialect (.v/.i/.o/.c/.g headers, BEGIN/END body)."""
    reader = _Reader(text)
    variables: list[str] | None = None
    inputs: list[str] | None = None
    outputs: list[str] | None = None
    constants: str | None = None
    garbage: str | None = None
    gates: list[Gate] = []
    in_body = False
    body_done = False
    header_line = 1
    index: dict[str, int] = {}
    for lineno, row in reader:
        if body_done:
            raise ParseError(lineno, "content after END")
        low = row.lower()
        if not in_body:
            if low.startswith(".v "):
                if variables is not None:
                    raise ParseError(lineno, "duplicate .v")
                variables = _split_names(row[2:], lineno)
                if len(set(variables)) != len(variables):
                    raise ParseError(lineno, "duplicate variable name")
                index = {name: i for i, name in enumerate(variables)}
                header_line = lineno
            elif low.startswith(".i "):
                if inputs is not None:
                    raise ParseError(lineno, "duplicate .i")
                inputs = _split_names(row[2:], lineno)
            elif low.startswith(".o "):
                if outputs is not None:
                    raise ParseError(lineno, "duplicate .o")
                outputs = _split_names(row[2:], lineno)
            elif low.startswith(".c "):
                constants = row[2:].strip()
                header_line = lineno
            elif low.startswith(".g "):
                garbage = row[2:].strip()
                header_line = lineno
            elif low == "begin":
                if variables is None:
                    raise ParseError(lineno, "BEGIN before .v")
                in_body = True
            else:
                raise ParseError(lineno, f"unexpected header {row!r}")
            continue
        if low == "end":
            body_done = True
            continue
        parts = row.split(None, 1)
        if len(parts) != 2:
            raise ParseError(lineno, f"malformed gate line {row!r}")
        mnem, operand_text = parts
        names = _split_names(operand_text, lineno)
        try:
            operands = [index[nm] for nm in names]
        except KeyError as exc:
            raise ParseError(lineno, f"undeclared name {exc.args[0]!r}") from None
        gates.append(_build_gate(mnem.lower(), operands, lineno))
    if variables is None:
        raise ParseError(reader.last_line, "missing .v header")
    if not body_done:
        raise ParseError(reader.last_line, "missing END")
    roles = _roles_from_headers(
        variables, inputs, outputs, constants, garbage, header_line
    )
    return Circuit(len(variables), roles, tuple(gates))


def emit_tfc(c: Circuit) -> str:
    """Emit the TFC dialect; deterministic byte output."""
    names = _line_names(c)
    out = [".v " + ",".join(names)]
    inputs = [names[i] for i, r in enumerate(c.roles) if not r.is_constant]
    if inputs:
        out.append(".i " + ",".join(inputs))
    outputs = [names[i] for i, r in enumerate(c.roles) if r.output is not None]
    if outputs:
        out.append(".o " + ",".join(outputs))
    if any(r.is_constant for r in c.roles):
        flags = "".join(
            "-" if r.constant_value is None else str(r.constant_value)
            for r in c.roles
        )
        out.append(".c " + flags)
    out.append("BEGIN")
    for g in c.gates:
        out.append(_emit_gate(g, names, "tfc", ","))
    out.append("END")
    return "\n".join(out) + "\n"


def parse_real(text: str) -> Circuit:
    """Parse the RevLib-style REAL dialect."""
    reader = _Reader(text)
    numvars: int | None = None
    variables: list[str] | None = None
    inputs: list[str] | None = None
    outputs: list[str] | None = None
    constants: str | None = None
    garbage: str | None = None
    gates: list[Gate] = []
    in_body = False
    body_done = False
    header_line = 1
    index: dict[str, int] = {}
    for lineno, row in reader:
        if body_done:
            raise ParseError(lineno, "content after .end")
        low = row.lower()
        if not in_body:
            if low.startswith(".version"):
                pass
            elif low.startswith(".numvars"):
                try:
                    numvars = int(row.split()[1])
                except (IndexError, ValueError):
                    raise ParseError(lineno, "bad .numvars") from None
                header_line = lineno
            elif low.startswith(".variables"):
                variables = _split_names(row[len(".variables"):], lineno)
                if len(set(variables)) != len(variables):
                    raise ParseError(lineno, "duplicate variable name")
                index = {name: i for i, name in enumerate(variables)}
            elif low.startswith(".inputs"):
                inputs = _split_names(row[len(".inputs"):], lineno)
            elif low.startswith(".outputs"):
                outputs = _split_names(row[len(".outputs"):], lineno)
            elif low.startswith(".constants"):
                constants = row.split(None, 1)[1].strip() if " " in row else ""
                header_line = lineno
            elif low.startswith(".garbage"):
                garbage = row.split(None, 1)[1].strip() if " " in row else ""
                header_line = lineno
            elif low == ".begin":
                if numvars is None:
                    raise ParseError(lineno, ".begin before .numvars")
                if variables is None:
                    variables = [f"x{i}" for i in range(numvars)]
                    index = {name: i for i, name in enumerate(variables)}
                in_body = True
            else:
                raise ParseError(lineno, f"unexpected header {row!r}")
            continue
        if low == ".end":
            body_done = True
            continue
        parts = row.split(None, 1)
        if len(parts) != 2:
            raise ParseError(lineno, f"malformed gate line {row!r}")
        mnem, operand_text = parts
        names = _split_names(operand_text, lineno)
        try:
            operands = [index[nm] for nm in names]
        except KeyError as exc:
            raise ParseError(lineno, f"undeclared name {exc.args[0]!r}") from None
        gates.append(_build_gate(mnem.lower(), operands, lineno))
    if numvars is None:
        raise ParseError(reader.last_line, "missing .numvars")
    if variables is None:
        raise ParseError(reader.last_line, "missing .variables")
    if not body_done:
        raise ParseError(reader.last_line, "missing .end")
    if len(variables) != numvars:
        raise ParseError(header_line, ".numvars does not match .variables")
    roles = _roles_from_headers(
        variables, inputs, outputs, constants, garbage, header_line
    )
    return Circuit(numvars, roles, tuple(gates))


def emit_real(c: Circuit) -> str:
    """Emit the REAL dialect; deterministic byte output."""
    names = _line_names(c)
    out = [".version 2.0", f".numvars {c.n_lines}", ".variables " + " ".join(names)]
    inputs = [names[i] for i, r in enumerate(c.roles) if not r.is_constant]
    if inputs:
        out.append(".inputs " + " ".join(inputs))
    outputs = [names[i] for i, r in enumerate(c.roles) if r.output is not None]
    if outputs:
        out.append(".outputs " + " ".join(outputs))
    out.append(
        ".constants "
        + "".join(
            "-" if r.constant_value is None else str(r.constant_value)
            for r in c.roles
        )
    )
    out.append(".garbage " + "".join("1" if r.is_garbage else "-" for r in c.roles))
    out.append(".begin")
    for g in c.gates:
        out.append(_emit_gate(g, names, "real", " "))
    out.append(".end")
    return "\n".join(out) + "\n"


def parse_path(path: str) -> Circuit:
    """Parse a file by extension (.tfc or .real)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".real"):
        return parse_real(text)
    return parse_tfc(text)
