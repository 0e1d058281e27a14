"""Exact circuit semantics.

Classical gates act as permutations of basis states; the V family is handled
in exact dyadic-Gaussian arithmetic (Gaussian integers over a power-of-two
denominator), so unitary equality is decided with zero tolerance and no
floating point anywhere.

Basis states are encoded as integers with line ``i`` on bit ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .circuit import (
    Circuit,
    Gate,
    GateKind,
    PreconditionError,
    ResourceError,
    SemanticsError,
    StructuralError,
)

DEFAULT_PERMUTATION_LINES = 20
DEFAULT_UNITARY_LINES = 6


def apply_gate_basis(g: Gate, state: int) -> int:
    """Action of one classical gate on an integer-encoded basis state."""
    kind = g.kind
    if kind is GateKind.NOT:
        return state ^ (1 << g.targets[0])
    if kind is GateKind.CNOT:
        if state >> g.controls[0] & 1:
            return state ^ (1 << g.targets[0])
        return state
    if kind is GateKind.TOFFOLI:
        c1, c2 = g.controls
        if state >> c1 & 1 and state >> c2 & 1:
            return state ^ (1 << g.targets[0])
        return state
    if kind is GateKind.SWAP:
        t1, t2 = g.targets
        b1 = state >> t1 & 1
        b2 = state >> t2 & 1
        if b1 != b2:
            return state ^ (1 << t1) ^ (1 << t2)
        return state
    if kind is GateKind.FREDKIN:
        if state >> g.controls[0] & 1:
            t1, t2 = g.targets
            b1 = state >> t1 & 1
            b2 = state >> t2 & 1
            if b1 != b2:
                return state ^ (1 << t1) ^ (1 << t2)
        return state
    if kind is GateKind.PERES:
        a, b = g.controls
        t = g.targets[0]
        if state >> a & 1:
            if state >> b & 1:
                state ^= 1 << t
            state ^= 1 << b
        return state
    raise SemanticsError(f"{kind.name} has no basis-state action")


def simulate_basis(c: Circuit, input_bits: Sequence[int]) -> tuple[int, ...]:
    """Run a classical circuit on one basis input.

    Constant-role lines must carry their declared constant value.
    """
    if len(input_bits) != c.n_lines:
        raise PreconditionError(
            f"input length {len(input_bits)} != {c.n_lines} lines"
        )
    for i, role in enumerate(c.roles):
        cv = role.constant_value
        if cv is not None and input_bits[i] != cv:
            raise PreconditionError(
                f"line {i} is a constant-{cv} input but got {input_bits[i]}"
            )
    state = 0
    for i, bit in enumerate(input_bits):
        if bit not in (0, 1):
            raise PreconditionError(f"non-bit value {bit!r} at line {i}")
        state |= bit << i
    for g in c.gates:
        if not g.kind.is_classical:
            raise SemanticsError(f"non-classical gate {g} in basis simulation")
        state = apply_gate_basis(g, state)
    return tuple(state >> i & 1 for i in range(c.n_lines))


@dataclass(frozen=True)
class Permutation:
    """Bijection on [0, 2^n) basis-state indices."""

    n_lines: int
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        size = 1 << self.n_lines
        if len(self.image) != size or set(self.image) != set(range(size)):
            raise StructuralError("image is not a bijection on basis states")

    @property
    def is_identity(self) -> bool:
        return all(i == y for i, y in enumerate(self.image))


def permutation_of(c: Circuit, max_lines: int = DEFAULT_PERMUTATION_LINES) -> Permutation:
    """Full basis-state permutation of a classical circuit, ignoring roles."""
    if c.n_lines > max_lines:
        raise ResourceError(
            f"{c.n_lines} lines exceeds permutation bound {max_lines}"
        )
    for g in c.gates:
        if not g.kind.is_classical:
            raise SemanticsError(f"non-classical gate {g} has no permutation")
    image = list(range(1 << c.n_lines))
    for g in c.gates:
        image = [apply_gate_basis(g, s) for s in image]
    return Permutation(c.n_lines, tuple(image))


@dataclass(frozen=True)
class DyadicGaussian:
    """(re + i*im) / 2^log2_den with integer numerators, fully reduced."""

    re_num: int
    im_num: int
    log2_den: int = 0

    def __post_init__(self) -> None:
        re, im, k = self.re_num, self.im_num, self.log2_den
        if k < 0:
            raise ValueError("negative denominator exponent")
        if re == 0 and im == 0:
            k = 0
        else:
            while k > 0 and re % 2 == 0 and im % 2 == 0:
                re //= 2
                im //= 2
                k -= 1
        object.__setattr__(self, "re_num", re)
        object.__setattr__(self, "im_num", im)
        object.__setattr__(self, "log2_den", k)

    def __add__(self, other: "DyadicGaussian") -> "DyadicGaussian":
        k = max(self.log2_den, other.log2_den)
        a = self.re_num << (k - self.log2_den)
        b = self.im_num << (k - self.log2_den)
        c = other.re_num << (k - other.log2_den)
        d = other.im_num << (k - other.log2_den)
        return DyadicGaussian(a + c, b + d, k)

    def __neg__(self) -> "DyadicGaussian":
        return DyadicGaussian(-self.re_num, -self.im_num, self.log2_den)

    def __sub__(self, other: "DyadicGaussian") -> "DyadicGaussian":
        return self + (-other)

    def __mul__(self, other: "DyadicGaussian") -> "DyadicGaussian":
        a, b = self.re_num, self.im_num
        c, d = other.re_num, other.im_num
        return DyadicGaussian(a * c - b * d, a * d + b * c, self.log2_den + other.log2_den)

    def conjugate(self) -> "DyadicGaussian":
        return DyadicGaussian(self.re_num, -self.im_num, self.log2_den)

    @property
    def is_zero(self) -> bool:
        return self.re_num == 0 and self.im_num == 0

    @property
    def is_one(self) -> bool:
        return self.re_num == 1 and self.im_num == 0 and self.log2_den == 0

    def __complex__(self) -> complex:
        scale = 1 << self.log2_den
        return complex(self.re_num / scale, self.im_num / scale)


ZERO = DyadicGaussian(0, 0)
ONE = DyadicGaussian(1, 0)

# V = ((1+i)/2) * [[1, -i], [-i, 1]]; V*V is exactly NOT.
V_MATRIX = (
    (DyadicGaussian(1, 1, 1), DyadicGaussian(1, -1, 1)),
    (DyadicGaussian(1, -1, 1), DyadicGaussian(1, 1, 1)),
)
V_DAG_MATRIX = tuple(
    tuple(V_MATRIX[j][i].conjugate() for j in range(2)) for i in range(2)
)


class ExactUnitary:
    """Square matrix of dyadic Gaussians over one shared denominator.

    Internally the matrix is stored as integer real/imaginary grids with a
    single power-of-two denominator, normalized so equality is structural.
    """

    __slots__ = ("dim", "log2_den", "re", "im")

    def __init__(
        self,
        dim: int,
        log2_den: int,
        re: Sequence[Sequence[int]],
        im: Sequence[Sequence[int]],
    ) -> None:
        self.dim = dim
        re = [list(row) for row in re]
        im = [list(row) for row in im]
        # strip common powers of two for a canonical form
        while log2_den > 0 and all(
            val % 2 == 0 for row in re for val in row
        ) and all(val % 2 == 0 for row in im for val in row):
            re = [[val // 2 for val in row] for row in re]
            im = [[val // 2 for val in row] for row in im]
            log2_den -= 1
        self.log2_den = log2_den
        self.re = tuple(tuple(row) for row in re)
        self.im = tuple(tuple(row) for row in im)

    @classmethod
    def identity(cls, dim: int) -> "ExactUnitary":
        return cls(
            dim,
            0,
            [[1 if i == j else 0 for j in range(dim)] for i in range(dim)],
            [[0] * dim for _ in range(dim)],
        )

    def entry(self, i: int, j: int) -> DyadicGaussian:
        return DyadicGaussian(self.re[i][j], self.im[i][j], self.log2_den)

    @property
    def entries(self) -> tuple[tuple[DyadicGaussian, ...], ...]:
        return tuple(
            tuple(self.entry(i, j) for j in range(self.dim)) for i in range(self.dim)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactUnitary):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.log2_den == other.log2_den
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.log2_den, self.re, self.im))

    def __matmul__(self, other: "ExactUnitary") -> "ExactUnitary":
        if self.dim != other.dim:
            raise StructuralError("dimension mismatch")
        n = self.dim
        re1, im1, re2, im2 = self.re, self.im, other.re, other.im
        cols_re = list(zip(*re2))
        cols_im = list(zip(*im2))
        out_re = [[0] * n for _ in range(n)]
        out_im = [[0] * n for _ in range(n)]
        for i in range(n):
            ar, ai = re1[i], im1[i]
            for j in range(n):
                br, bi = cols_re[j], cols_im[j]
                sre = 0
                sim = 0
                for k in range(n):
                    a, b, cc, d = ar[k], ai[k], br[k], bi[k]
                    if (a or b) and (cc or d):
                        sre += a * cc - b * d
                        sim += a * d + b * cc
                out_re[i][j] = sre
                out_im[i][j] = sim
        return ExactUnitary(n, self.log2_den + other.log2_den, out_re, out_im)

    def dagger(self) -> "ExactUnitary":
        n = self.dim
        return ExactUnitary(
            n,
            self.log2_den,
            [[self.re[j][i] for j in range(n)] for i in range(n)],
            [[-self.im[j][i] for j in range(n)] for i in range(n)],
        )

    @property
    def is_identity(self) -> bool:
        if self.log2_den != 0:
            return False
        n = self.dim
        return all(
            self.re[i][j] == (1 if i == j else 0) and self.im[i][j] == 0
            for i in range(n)
            for j in range(n)
        )

    def is_unitary(self) -> bool:
        """Exact check that U times its conjugate transpose is the identity."""
        return (self @ self.dagger()).is_identity


def _apply_gate_matrix(
    g: Gate, n: int, re: list[list[int]], im: list[list[int]], log2_den: int
) -> int:
    """Left-multiply the matrix by one gate in place; returns new denominator."""
    dim = 1 << n
    kind = g.kind
    if kind.is_classical:
        perm = [apply_gate_basis(g, s) for s in range(dim)]
        old_re = re[:]
        old_im = im[:]
        for s in range(dim):
            re[perm[s]] = old_re[s]
            im[perm[s]] = old_im[s]
        return log2_den

    if kind in (GateKind.V, GateKind.V_DAG):
        ctl_mask = 0
    else:
        ctl_mask = 1 << g.controls[0]
    tgt_bit = 1 << g.targets[0]
    plus_first = kind in (GateKind.V, GateKind.CV)  # row0' = (1+i)r0 + (1-i)r1
    for r0 in range(dim):
        if r0 & tgt_bit:
            continue
        if ctl_mask and not r0 & ctl_mask:
            continue
        r1 = r0 | tgt_bit
        a_re, a_im = re[r0], im[r0]
        b_re, b_im = re[r1], im[r1]
        n0_re = [0] * dim
        n0_im = [0] * dim
        n1_re = [0] * dim
        n1_im = [0] * dim
        if plus_first:
            for j in range(dim):
                a, b, c, d = a_re[j], a_im[j], b_re[j], b_im[j]
                n0_re[j] = a - b + c + d
                n0_im[j] = a + b - c + d
                n1_re[j] = a + b + c - d
                n1_im[j] = b - a + c + d
        else:
            for j in range(dim):
                a, b, c, d = a_re[j], a_im[j], b_re[j], b_im[j]
                n0_re[j] = a + b + c - d
                n0_im[j] = b - a + c + d
                n1_re[j] = a - b + c + d
                n1_im[j] = a + b - c + d
        re[r0], im[r0] = n0_re, n0_im
        re[r1], im[r1] = n1_re, n1_im
    if ctl_mask:
        # control-off rows must be rescaled to keep the shared denominator
        for r in range(dim):
            if not r & ctl_mask:
                re[r] = [val * 2 for val in re[r]]
                im[r] = [val * 2 for val in im[r]]
    return log2_den + 1


def unitary_of(c: Circuit, max_lines: int = DEFAULT_UNITARY_LINES) -> ExactUnitary:
    """Exact matrix of the whole circuit in application order."""
    if c.n_lines > max_lines:
        raise ResourceError(
            f"{c.n_lines} lines exceeds unitary bound {max_lines}"
        )
    dim = 1 << c.n_lines
    re = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    im = [[0] * dim for _ in range(dim)]
    k = 0
    for g in c.gates:
        k = _apply_gate_matrix(g, c.n_lines, re, im, k)
    return ExactUnitary(dim, k, re, im)


def gates_unitary(gates: Iterable[Gate], n_lines: int) -> ExactUnitary:
    """Exact matrix of a bare gate sequence over ``n_lines`` lines."""
    dim = 1 << n_lines
    re = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    im = [[0] * dim for _ in range(dim)]
    k = 0
    for g in gates:
        k = _apply_gate_matrix(g, n_lines, re, im, k)
    return ExactUnitary(dim, k, re, im)


def equivalent(
    c1: Circuit,
    c2: Circuit,
    max_unitary_lines: int = DEFAULT_UNITARY_LINES,
    max_perm_lines: int = DEFAULT_PERMUTATION_LINES,
) -> bool:
    """Exact equality of the two circuits' maps; no global-phase allowance."""
    if c1.n_lines != c2.n_lines:
        raise StructuralError(
            f"line counts differ: {c1.n_lines} vs {c2.n_lines}"
        )
    both_classical = all(g.kind.is_classical for g in c1.gates) and all(
        g.kind.is_classical for g in c2.gates
    )
    if both_classical:
        return permutation_of(c1, max_perm_lines) == permutation_of(c2, max_perm_lines)
    return unitary_of(c1, max_unitary_lines) == unitary_of(c2, max_unitary_lines)


@lru_cache(maxsize=65536)
def _commute_key(
    kind1: GateKind,
    lines1: tuple[int, ...],
    kind2: GateKind,
    lines2: tuple[int, ...],
) -> bool:
    n = len(set(lines1) | set(lines2))
    nc1 = kind1.n_controls
    nc2 = kind2.n_controls
    g1 = Gate(kind1, lines1[:nc1], lines1[nc1:])
    g2 = Gate(kind2, lines2[:nc2], lines2[nc2:])
    return gates_unitary((g1, g2), n) == gates_unitary((g2, g1), n)


def commute(g1: Gate, g2: Gate, n_lines: int) -> bool:
    """True iff the two gates' matrices commute exactly."""
    if max(g1.lines + g2.lines) >= n_lines:
        raise StructuralError("gate lines out of range")
    shared = g1.support & g2.support
    if not shared:
        return True
    # relabel the support union compactly so results memoize across circuits
    union = sorted(g1.support | g2.support)
    pos = {line: i for i, line in enumerate(union)}
    h1 = g1.relabel(pos)
    h2 = g2.relabel(pos)
    return _commute_key(h1.kind, h1.lines, h2.kind, h2.lines)
