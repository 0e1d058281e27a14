"""Quantum-cost protocol: lowering plus fixpoint local optimization.

The pipeline mirrors the classic recipe: rewrite at the gate level with
identity templates, express everything in 1- and 2-line primitives, then
repeat {deletion rule, moving rule, template matching} until nothing changes.

Costing unit: a *primitive* is a maximal contiguous run of gates whose
combined support fits in two lines; each such run costs one, regardless of
how many elementary gates it contains.  Under this convention a lone CNOT
costs 1, the five-gate Toffoli expansion costs 5, and a pair of adjacent
same-pair gates costs 1.  The moving rule can therefore lower cost without
deleting anything, which is exactly why it is part of the protocol.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .circuit import (
    Circuit,
    Gate,
    GateKind,
    PreconditionError,
    StructuralError,
    cnot,
    inverse_gates,
    x,
)
from .decompose import (
    _fredkin_primitives,
    decompose_peres,
    decompose_swap,
    decompose_toffoli,
    to_primitives,
)
from .semantics import commute, gates_unitary, unitary_of

DEFAULT_WINDOW = 8

# naive primitive weight of one gate (its fixed expansion, ungrouped)
_WEIGHT = {
    GateKind.NOT: 1,
    GateKind.CNOT: 1,
    GateKind.V: 1,
    GateKind.V_DAG: 1,
    GateKind.CV: 1,
    GateKind.CV_DAG: 1,
    GateKind.SWAP: 3,
    GateKind.TOFFOLI: 5,
    GateKind.PERES: 6,
    GateKind.FREDKIN: 7,
}


def primitive_weight(g: Gate) -> int:
    """Number of primitive gates in this gate's fixed expansion."""
    return _WEIGHT[g.kind]


def primitive_count(gates: Sequence[Gate]) -> int:
    """Number of 1- and 2-line primitives in a gate list.

    Greedy maximal grouping: consecutive gates whose combined support still
    fits in two lines count as one primitive.  Greedy is optimal here because
    group feasibility is monotone in the window.
    """
    count = 0
    cur: set[int] = set()
    for g in gates:
        if len(g.support) > 2:
            raise PreconditionError(f"{g} is not a primitive gate")
        union = cur | g.support
        if len(union) <= 2:
            cur = union
        else:
            count += 1
            cur = set(g.support)
    return count + (1 if cur else 0)


def naive_cost(c: Circuit) -> int:
    """Primitive count of the plain lowering, before any optimization."""
    return primitive_count(to_primitives(c).gates)


def _cancels(g1: Gate, g2: Gate) -> bool:
    """True if g1 directly followed by g2 composes to the identity."""
    k1, k2 = g1.kind, g2.kind
    if k1 is GateKind.PERES or k2 is GateKind.PERES:
        return False
    if k1 in (GateKind.V, GateKind.V_DAG, GateKind.CV, GateKind.CV_DAG):
        inv = inverse_gates([g1])
        return len(inv) == 1 and inv[0] == g2
    if k1 is not k2:
        return False
    if k1 is GateKind.TOFFOLI:
        return set(g1.controls) == set(g2.controls) and g1.targets == g2.targets
    if k1 is GateKind.SWAP:
        return set(g1.targets) == set(g2.targets)
    if k1 is GateKind.FREDKIN:
        return g1.controls == g2.controls and set(g1.targets) == set(g2.targets)
    return g1 == g2  # NOT, CNOT self-inverse


def _merges(g1: Gate, g2: Gate) -> Gate | None:
    """Square-root pairs combine: CV.CV -> CNOT, V.V -> NOT (and daggered)."""
    if g1 != g2:
        return None
    if g1.kind in (GateKind.CV, GateKind.CV_DAG):
        return cnot(g1.controls[0], g1.targets[0])
    if g1.kind in (GateKind.V, GateKind.V_DAG):
        return x(g1.targets[0])
    return None


@dataclass(frozen=True)
class TraceStep:
    """One rewrite: ``before`` at ``position`` became ``after``."""

    rule: str  # "template" | "lower" | "deletion" | "moving"
    position: int
    before: tuple[Gate, ...]
    after: tuple[Gate, ...]


@dataclass(frozen=True)
class OptimizeTrace:
    steps: tuple[TraceStep, ...]
    initial_count: int
    final_count: int


def replay_trace(c: Circuit, trace: OptimizeTrace) -> Circuit:
    """Re-apply every recorded step; reproduces the optimized circuit exactly."""
    gates = list(c.gates)
    for step in trace.steps:
        window = tuple(gates[step.position : step.position + len(step.before)])
        if window != step.before:
            raise StructuralError(f"trace does not apply: {step} vs {window}")
        gates[step.position : step.position + len(step.before)] = step.after
    return c.with_gates(gates)


@dataclass(frozen=True)
class Template:
    """Identity-equivalent gate sequence usable for substitution."""

    gates: tuple[Gate, ...]
    name: str = ""

    @property
    def size(self) -> int:
        return len(self.gates)

    @property
    def n_lines(self) -> int:
        return max(line for g in self.gates for line in g.lines) + 1

    @property
    def weight(self) -> int:
        return sum(primitive_weight(g) for g in self.gates)


def make_template(gates: Iterable[Gate], name: str = "") -> Template:
    """Validate and register an identity template (exact unitary check)."""
    gates = tuple(gates)
    if not gates:
        raise StructuralError("empty template")
    n = max(line for g in gates for line in g.lines) + 1
    if n > 6:
        raise StructuralError("template too wide to verify exactly")
    if not gates_unitary(gates, n).is_identity:
        raise StructuralError(f"template {name or gates} is not an identity")
    return Template(gates, name)


def _unify(tg: Gate, cg: Gate, mapping: dict[int, int]) -> list[dict[int, int]]:
    """Extend line mapping(s) so template gate ``tg`` matches circuit gate ``cg``."""
    if tg.kind is not cg.kind:
        return []
    if tg.kind is GateKind.TOFFOLI:
        control_orders = [cg.controls, cg.controls[::-1]]
        target_orders = [cg.targets]
    elif tg.kind in (GateKind.SWAP, GateKind.FREDKIN):
        control_orders = [cg.controls]
        target_orders = [cg.targets, cg.targets[::-1]]
    else:
        control_orders = [cg.controls]
        target_orders = [cg.targets]
    results = []
    for ctrls in control_orders:
        for tgts in target_orders:
            m = dict(mapping)
            used = set(m.values())
            ok = True
            for t_line, c_line in zip(tg.controls + tg.targets, ctrls + tgts):
                bound = m.get(t_line)
                if bound is None:
                    if c_line in used:
                        ok = False
                        break
                    m[t_line] = c_line
                    used.add(c_line)
                elif bound != c_line:
                    ok = False
                    break
            if ok and m not in results:
                results.append(m)
    return results


class _TemplateIndex:
    """Rotations of each template, indexed by their leading gate kind."""

    def __init__(self, templates: Sequence[Template]) -> None:
        self.by_kind: dict[GateKind, list[tuple[int, tuple[Gate, ...]]]] = {}
        self.templates = tuple(templates)
        for t_idx, tmpl in enumerate(self.templates):
            m = len(tmpl.gates)
            seen_rots = set()
            for r in range(m):
                rot = tmpl.gates[r:] + tmpl.gates[:r]
                if rot in seen_rots:
                    continue
                seen_rots.add(rot)
                self.by_kind.setdefault(rot[0].kind, []).append((t_idx, rot))


def _template_step(
    gates: list[Gate], index: _TemplateIndex
) -> tuple[list[Gate], TraceStep] | None:
    """Leftmost-longest beneficial template rewrite, or None."""
    for p in range(len(gates)):
        candidates = index.by_kind.get(gates[p].kind)
        if not candidates:
            continue
        best: tuple[tuple[int, int, int], list[Gate]] | None = None
        for order, (t_idx, rot) in enumerate(candidates):
            mappings = [{}]
            matched: list[list[dict[int, int]]] = []
            limit = min(len(rot), len(gates) - p)
            for idx in range(limit):
                nxt = []
                for m in mappings:
                    nxt.extend(_unify(rot[idx], gates[p + idx], m))
                if not nxt:
                    break
                mappings = nxt
                matched.append(mappings)
            for j in range(len(matched), 0, -1):
                remainder = rot[j:]
                matched_w = sum(primitive_weight(g) for g in rot[:j])
                remainder_w = sum(primitive_weight(g) for g in remainder)
                if matched_w < remainder_w:
                    continue
                repl_template = inverse_gates(remainder)
                # benefit rule: strictly lighter, or same weight in fewer gates
                if matched_w == remainder_w and len(repl_template) >= j:
                    continue
                for m in matched[j - 1]:
                    if any(line not in m for g in remainder for line in g.lines):
                        continue
                    replacement = [g.relabel(m) for g in repl_template]
                    key = (j, -remainder_w, -order)
                    if best is None or key > best[0]:
                        best = (key, replacement)
                    break
        if best is not None:
            (j, _, _), replacement = best
            before = tuple(gates[p : p + j])
            new_gates = gates[:p] + replacement + gates[p + j :]
            step = TraceStep("template", p, before, tuple(replacement))
            return new_gates, step
    return None


def _deletion_pass(gates: list[Gate]) -> tuple[list[Gate], list[TraceStep]]:
    """Cancel adjacent inverse pairs and merge square-root pairs, cascading."""
    out: list[Gate] = []
    steps: list[TraceStep] = []
    for g in gates:
        out.append(g)
        while len(out) >= 2:
            g1, g2 = out[-2], out[-1]
            if _cancels(g1, g2):
                out.pop()
                out.pop()
                steps.append(TraceStep("deletion", len(out), (g1, g2), ()))
                continue
            merged = _merges(g1, g2)
            if merged is not None:
                out.pop()
                out.pop()
                steps.append(TraceStep("deletion", len(out), (g1, g2), (merged,)))
                out.append(merged)
                continue
            break
    return out, steps


def _pair_enabled(g1: Gate, g2: Gate) -> bool:
    return _cancels(g1, g2) or _merges(g1, g2) is not None


def _transpose_right(gates: list[Gate], i: int, j: int) -> tuple[list[Gate], list[TraceStep]]:
    """Move gates[i] rightward until it sits just before position j."""
    new = list(gates)
    steps = []
    for k in range(i, j - 1):
        before = (new[k], new[k + 1])
        new[k], new[k + 1] = new[k + 1], new[k]
        steps.append(TraceStep("moving", k, before, (before[1], before[0])))
    return new, steps


def _transpose_left(gates: list[Gate], i: int, j: int) -> tuple[list[Gate], list[TraceStep]]:
    """Move gates[j] leftward until it sits just after position i."""
    new = list(gates)
    steps = []
    for k in range(j, i + 1, -1):
        before = (new[k - 1], new[k])
        new[k - 1], new[k] = new[k], new[k - 1]
        steps.append(TraceStep("moving", k - 1, before, (before[1], before[0])))
    return new, steps


def _moving_step(
    gates: list[Gate], n_lines: int, window: int
) -> tuple[list[Gate], list[TraceStep]] | None:
    """One moving opportunity: transpositions that set up a deletion, a
    merge, or a strictly smaller primitive count."""
    m = len(gates)
    for i in range(m - 1):
        gi = gates[i]
        for j in range(i + 1, min(i + 1 + window, m)):
            gj = gates[j]
            if not (_pair_enabled(gi, gj) or _pair_enabled(gj, gi)):
                continue
            if j == i + 1:
                continue  # already adjacent; deletion pass handles it
            between = gates[i + 1 : j]
            if all(commute(gi, b, n_lines) for b in between):
                return _transpose_right(gates, i, j)
            if all(commute(gj, b, n_lines) for b in between):
                return _transpose_left(gates, i, j)
    if any(len(g.support) > 2 for g in gates):
        return None  # grouping is defined on primitive gates only
    base = primitive_count(gates)
    for i in range(m - 1):
        gi = gates[i]
        for j in range(i + 1, min(i + 1 + window, m)):
            gj = gates[j]
            if j == i + 1 or len(gi.support | gj.support) > 2:
                continue
            between = gates[i + 1 : j]
            if all(commute(gi, b, n_lines) for b in between):
                new, steps = _transpose_right(gates, i, j)
                if primitive_count(new) < base:
                    return new, steps
            if all(commute(gj, b, n_lines) for b in between):
                new, steps = _transpose_left(gates, i, j)
                if primitive_count(new) < base:
                    return new, steps
    return None


def _lower_steps(gates: list[Gate]) -> tuple[list[Gate], list[TraceStep]]:
    out: list[Gate] = []
    steps: list[TraceStep] = []
    for g in gates:
        if g.kind.is_primitive and g.kind is not GateKind.SWAP:
            out.append(g)
            continue
        if g.kind is GateKind.SWAP:
            expansion = decompose_swap(g)
        elif g.kind is GateKind.TOFFOLI:
            expansion = decompose_toffoli(g)
        elif g.kind is GateKind.PERES:
            t, cx = decompose_peres(g)
            expansion = decompose_toffoli(t) + [cx]
        else:  # FREDKIN
            expansion = _fredkin_primitives(g)
        steps.append(TraceStep("lower", len(out), (g,), tuple(expansion)))
        out.extend(expansion)
    return out, steps


def _run_pipeline(
    c: Circuit, templates: Sequence[Template] | None, window: int
) -> tuple[list[Gate], list[TraceStep]]:
    if templates is None:
        templates = default_templates()
    index = _TemplateIndex(templates)
    gates = list(c.gates)
    steps: list[TraceStep] = []
    while True:  # gate-level template rewrites before lowering
        r = _template_step(gates, index)
        if r is None:
            break
        gates, step = r
        steps.append(step)
    gates, lsteps = _lower_steps(gates)
    steps.extend(lsteps)
    while True:
        gates2, dsteps = _deletion_pass(gates)
        if dsteps:
            gates = gates2
            steps.extend(dsteps)
            continue
        mv = _moving_step(gates, c.n_lines, window)
        if mv is not None:
            gates, msteps = mv
            steps.extend(msteps)
            continue
        tp = _template_step(gates, index)
        if tp is not None:
            new_gates, step = tp
            if all(len(g.support) <= 2 for g in new_gates) and primitive_count(
                new_gates
            ) <= primitive_count(gates):
                gates = new_gates
                steps.append(step)
                continue
        break
    return gates, steps


def optimize_with_trace(
    c: Circuit,
    templates: Sequence[Template] | None = None,
    window: int = DEFAULT_WINDOW,
) -> tuple[Circuit, OptimizeTrace]:
    """Full protocol with a replayable audit trail."""
    gates, steps = _run_pipeline(c, templates, window)
    optimized = c.with_gates(gates)
    trace = OptimizeTrace(
        steps=tuple(steps),
        initial_count=naive_cost(c),
        final_count=primitive_count(gates),
    )
    if c.n_lines <= 6 and unitary_of(c) != unitary_of(optimized):
        raise StructuralError("optimizer produced a non-equivalent circuit")
    return optimized, trace


def quantum_cost(
    c: Circuit,
    templates: Sequence[Template] | None = None,
    window: int = DEFAULT_WINDOW,
) -> int:
    """Primitive count after lowering and fixpoint local optimization."""
    _, trace = optimize_with_trace(c, templates, window)
    return trace.final_count


def apply_deletion(c: Circuit) -> tuple[Circuit, bool]:
    """Remove adjacent inverse pairs and merge adjacent square-root pairs."""
    for g in c.gates:
        if not g.kind.is_primitive:
            raise PreconditionError(f"{g} is not a primitive gate")
    gates, steps = _deletion_pass(list(c.gates))
    return c.with_gates(gates), bool(steps)


def apply_moving(c: Circuit, window: int = DEFAULT_WINDOW) -> tuple[Circuit, bool]:
    """Commuting transpositions, only where they set up a deletion, a merge,
    or a smaller primitive count."""
    r = _moving_step(list(c.gates), c.n_lines, window)
    if r is None:
        return c, False
    gates, _ = r
    return c.with_gates(gates), True


def apply_templates(
    c: Circuit, lib: Sequence[Template]
) -> tuple[Circuit, bool]:
    """Rewrite with the given identity templates until no match remains."""
    index = _TemplateIndex(lib)
    gates = list(c.gates)
    changed = False
    while True:
        r = _template_step(gates, index)
        if r is None:
            break
        gates, _ = r
        changed = True
    return c.with_gates(gates), changed


_DEFAULT_TEMPLATES: tuple[Template, ...] | None = None


def default_templates() -> tuple[Template, ...]:
    """The shipped template library (loaded once from package data)."""
    global _DEFAULT_TEMPLATES
    if _DEFAULT_TEMPLATES is None:
        from importlib import resources

        from .formats import parse_tfc

        loaded = []
        root = resources.files("revcost").joinpath("data/templates")
        for entry in sorted(root.iterdir(), key=lambda e: e.name):
            if entry.name.endswith(".tfc"):
                circuit = parse_tfc(entry.read_text(encoding="utf-8"))
                loaded.append(
                    make_template(circuit.gates, name=entry.name[: -len(".tfc")])
                )
        _DEFAULT_TEMPLATES = tuple(loaded)
    return _DEFAULT_TEMPLATES


def load_templates(path: str) -> tuple[Template, ...]:
    """Parse one circuit file per template from a directory or single file."""
    import os

    from .formats import parse_path

    paths = []
    if os.path.isdir(path):
        for name in sorted(os.listdir(path)):
            if name.endswith((".tfc", ".real")):
                paths.append(os.path.join(path, name))
    else:
        paths = [path]
    return tuple(
        make_template(parse_path(p).gates, name=os.path.basename(p)) for p in paths
    )
