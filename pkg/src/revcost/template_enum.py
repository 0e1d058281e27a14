"""Exhaustive enumeration of small identity templates.

Generates every identity-equivalent sequence of size 3..max_size over
{NOT, CNOT, CV, CV+} on up to three lines, then keeps one canonical
irreducible representative per class:

- deduplicated under cyclic rotation and line relabeling (the matcher
  handles both at match time); mirror inversions stay as separate entries,
- sequences with a cyclically-adjacent inverse or square-root pair are
  dropped (the deletion rule already reduces them),
- sequences containing a proper cyclic sub-identity are dropped (a smaller
  template already fires inside them).

Run ``python -m revcost.template_enum`` to regenerate the shipped library
under ``data/templates``.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from typing import Iterable, Sequence

from .circuit import Circuit, Gate, GateKind, LineRole, cnot, cv, cv_dag, x
from .semantics import gates_unitary


def _gate_pool(n_lines: int) -> list[Gate]:
    pool = [x(t) for t in range(n_lines)]
    for c in range(n_lines):
        for t in range(n_lines):
            if c != t:
                pool.extend([cnot(c, t), cv(c, t), cv_dag(c, t)])
    return pool


def _matrix_key(gates: Sequence[Gate], n_lines: int) -> tuple:
    u = gates_unitary(gates, n_lines)
    return (u.log2_den, u.re, u.im)


def _encode(g: Gate) -> tuple:
    return (g.kind.value, g.controls, g.targets)


def _canonical(seq: tuple[Gate, ...], n_lines: int) -> tuple:
    """Minimal encoding over rotations x line relabelings."""
    best = None
    m = len(seq)
    lines = sorted({line for g in seq for line in g.lines})
    for perm in itertools.permutations(range(n_lines), len(lines)):
        mapping = dict(zip(lines, perm))
        relabeled = [g.relabel(mapping) for g in seq]
        for r in range(m):
            rot = tuple(relabeled[r:] + relabeled[:r])
            enc = tuple(_encode(g) for g in rot)
            if best is None or enc < best:
                best = enc
    return best


def _inverse_of(g: Gate) -> Gate:
    from .circuit import inverse_gates

    (inv,) = inverse_gates([g])
    return inv


def _has_adjacent_pair(seq: Sequence[Gate]) -> bool:
    """Cyclically adjacent inverse pair (pure padding)."""
    m = len(seq)
    for i in range(m):
        if _inverse_of(seq[i]) == seq[(i + 1) % m]:
            return True
    return False


def _rules_subsume(seq: Sequence[Gate], n_lines: int) -> bool:
    """True when deletion+moving alone already erase this identity.

    Such templates (square-root merge chains, commutator padding) add no
    rewrite power the cheaper rules lack, so they are not shipped.
    """
    from .optimize import _deletion_pass, _moving_step

    gates = list(seq)
    while True:
        gates, steps = _deletion_pass(gates)
        if steps:
            continue
        mv = _moving_step(gates, n_lines, window=len(seq))
        if mv is not None:
            gates = mv[0]
            continue
        return not gates


def _has_sub_identity(seq: Sequence[Gate], n_lines: int) -> bool:
    """Any proper contiguous cyclic window composing to the identity."""
    m = len(seq)
    doubled = list(seq) + list(seq)
    for length in range(2, m):
        for start in range(m):
            window = doubled[start : start + length]
            if gates_unitary(window, n_lines).is_identity:
                return True
    return False


def enumerate_identity_templates(
    max_size: int = 6, n_lines: int = 3
) -> list[tuple[Gate, ...]]:
    """All canonical irreducible identity templates of size 3..max_size."""
    if max_size > 6:
        raise ValueError("enumeration bounded at size 6")
    pool = _gate_pool(n_lines)
    half = max_size - max_size // 2
    # products of length 1..half, keyed by exact unitary
    by_key: dict[tuple, list[tuple[Gate, ...]]] = defaultdict(list)
    frontier: list[tuple[Gate, ...]] = [()]
    for _ in range(half):
        nxt = []
        for seq in frontier:
            for g in pool:
                ext = seq + (g,)
                by_key[_matrix_key(ext, n_lines)].append(ext)
                nxt.append(ext)
        frontier = nxt
    raw_seen: set[tuple] = set()
    seen: set[tuple] = set()
    results: list[tuple[Gate, ...]] = []
    for key, seqs in list(by_key.items()):
        # pair each bucket with the bucket holding its inverse unitary
        rep = seqs[0]
        inv_seq = tuple(_inverse_of(g) for g in reversed(rep))
        ikey = _matrix_key(inv_seq, n_lines)
        partners = by_key.get(ikey, [])
        for s1 in seqs:
            for s2 in partners:
                total = s1 + s2
                if not 3 <= len(total) <= max_size:
                    continue
                enc = tuple(_encode(g) for g in total)
                if enc in raw_seen:
                    continue
                raw_seen.add(enc)
                if _has_adjacent_pair(total):
                    continue
                canon = _canonical(total, n_lines)
                if canon in seen:
                    continue
                seen.add(canon)
                if _has_sub_identity(total, n_lines):
                    continue
                if _rules_subsume(total, n_lines):
                    continue
                results.append(_from_encoding(canon))
    results.sort(key=lambda gs: (len(gs), tuple(_encode(g) for g in gs)))
    return results


def _from_encoding(enc: tuple) -> tuple[Gate, ...]:
    return tuple(
        Gate(GateKind(kind), controls, targets) for kind, controls, targets in enc
    )


def _macro_templates() -> list[tuple[str, tuple[Gate, ...]]]:
    """Gate-level templates: the controlled-swap identities."""
    from .circuit import fredkin, toffoli

    a, b, c = 0, 1, 2
    sandwich = (cnot(c, b), toffoli(a, b, c), cnot(c, b), fredkin(a, b, c))
    three_toffoli = (
        toffoli(a, c, b),
        toffoli(a, b, c),
        toffoli(a, c, b),
        cnot(c, b),
        toffoli(a, b, c),
        cnot(c, b),
    )
    return [
        ("macro_cswap_sandwich", sandwich),
        ("macro_cswap_three_toffoli", three_toffoli),
    ]


def write_library(directory: str, max_size: int = 6) -> list[str]:
    """Regenerate the shipped template files; returns written names."""
    import os

    from .formats import emit_tfc

    os.makedirs(directory, exist_ok=True)
    written = []
    entries = [
        (f"ncv_{len(gates)}_{i:03d}", gates)
        for i, gates in enumerate(enumerate_identity_templates(max_size))
    ]
    entries.extend(_macro_templates())
    for name, gates in entries:
        n = max(line for g in gates for line in g.lines) + 1
        circ = Circuit(n, tuple(LineRole.primary() for _ in range(n)), tuple(gates))
        path = os.path.join(directory, f"{name}.tfc")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(emit_tfc(circ))
        written.append(name)
    return written


if __name__ == "__main__":
    import os
    import sys

    target = os.path.join(os.path.dirname(__file__), "data", "templates")
    if len(sys.argv) > 1:
        target = sys.argv[1]
    names = write_library(target)
    print(f"wrote {len(names)} templates to {target}")
