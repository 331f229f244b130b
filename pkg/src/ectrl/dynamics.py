"""Individual-dynamics unit types and assembly of the mixed state matrix.

A d-th-order unit is specified by its d rational eigenvalues; the companion
coefficients a_0..a_{d-1} are derived from them (elementary symmetric
polynomials), so every candidate eigenvalue stays exactly rational and the
finite-field rank engine can evaluate shifted matrices exactly.

The assembled matrix is "mixed": companion blocks are fixed rational
constants, coupling entries are free parameters. An undirected edge
contributes two entries sharing one parameter id (symmetric coupling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .netgen import Topology


class InvalidAssignmentError(ValueError):
    pass


Rational = Union[Fraction, int]


@dataclass(frozen=True)
class UnitType:
    """A d-th-order dynamic unit x^(d) = a_0 x + a_1 x' + ... + a_{d-1} x^(d-1)."""

    order: int
    eigenvalues: tuple[Fraction, ...]
    coefficients: tuple[Fraction, ...]  # a_0 .. a_{d-1}
    type_id: int = 0

    def companion_block(self) -> list[list[Fraction]]:
        """The d x d block: superdiagonal ones, bottom row (a_0 .. a_{d-1})."""
        d = self.order
        blk = [[Fraction(0)] * d for _ in range(d)]
        for r in range(d - 1):
            blk[r][r + 1] = Fraction(1)
        for c in range(d):
            blk[d - 1][c] = self.coefficients[c]
        return blk

    def same_spectrum(self, other: "UnitType") -> bool:
        return sorted(self.eigenvalues) == sorted(other.eigenvalues)


def make_unit_type(order: int, eigenvalues: Sequence[Rational], type_id: int = 0) -> UnitType:
    """Build a unit type from its eigenvalues, deriving companion coefficients.

    The characteristic polynomial convention is
    lambda^d - a_{d-1} lambda^(d-1) - ... - a_0 = prod_j (lambda - lambda_j),
    so for d=1 the single coefficient a_0 equals the self-loop weight.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    eigs = tuple(Fraction(e) for e in eigenvalues)
    if len(eigs) != order:
        raise ValueError(f"need exactly {order} eigenvalues, got {len(eigs)}")
    # monic poly coefficients c_0..c_d of prod (x - lambda_j), low order first
    poly = [Fraction(1)]
    for lam in eigs:
        nxt = [Fraction(0)] * (len(poly) + 1)
        for k, c in enumerate(poly):
            nxt[k + 1] += c
            nxt[k] -= c * lam
        poly = nxt
    coeffs = tuple(-poly[k] for k in range(order))  # a_k = -c_k
    return UnitType(order, eigs, coeffs, type_id)


@dataclass(frozen=True)
class Assignment:
    """Map node -> unit type realizing prescribed densities."""

    types: tuple[UnitType, ...]
    densities: tuple[Fraction, ...]
    node_type: tuple[int, ...]
    seed: int

    @property
    def order(self) -> int:
        return self.types[0].order

    @property
    def n_nodes(self) -> int:
        return len(self.node_type)

    def counts(self) -> list[int]:
        cnt = [0] * len(self.types)
        for ti in self.node_type:
            cnt[ti] += 1
        return cnt


def largest_remainder_counts(densities: Sequence[Rational], n: int) -> list[int]:
    """Round density*n to integers summing to n; ties go to the lower index."""
    dens = [Fraction(d) for d in densities]
    floors = [int(d * n) for d in dens]
    rem = n - sum(floors)
    # sort by descending fractional remainder, lower index wins ties
    order = sorted(range(len(dens)), key=lambda i: (-(dens[i] * n - floors[i]), i))
    for i in order[:rem]:
        floors[i] += 1
    return floors


def assign_types(
    types: Sequence[UnitType],
    densities: Sequence[Rational],
    n_nodes: int,
    seed: int = 0,
) -> Assignment:
    dens = tuple(Fraction(d) for d in densities)
    if len(dens) != len(types):
        raise InvalidAssignmentError("one density per type required")
    if sum(dens) != 1:
        raise InvalidAssignmentError(f"densities sum to {sum(dens)}, expected 1")
    if any(d < 0 for d in dens):
        raise InvalidAssignmentError("densities must be nonnegative")
    orders = {t.order for t in types}
    if len(orders) != 1:
        raise InvalidAssignmentError(f"all types must share one order, got {orders}")
    counts = largest_remainder_counts(dens, n_nodes)
    labels = np.repeat(np.arange(len(types)), counts)
    rng = np.random.default_rng(seed)
    rng.shuffle(labels)
    return Assignment(tuple(types), dens, tuple(int(x) for x in labels), seed)


@dataclass(frozen=True)
class FreeParam:
    param_id: int


@dataclass(frozen=True)
class Const:
    value: Fraction


Entry = Union[FreeParam, Const]


@dataclass(frozen=True)
class StateMatrix:
    """Sparse mixed matrix: companion blocks (Const) plus couplings (FreeParam)."""

    dim: int
    order: int
    n_nodes: int
    entries: tuple[tuple[int, int, Entry], ...]
    unit_eigenvalues: tuple[Fraction, ...]  # deduplicated spectrum of all unit types
    n_params: int

    def to_triplet_text(self) -> str:
        """Debug dump: one ``row col {P<id>|C<num>/<den>}`` line per entry."""
        lines = []
        for r, c, e in self.entries:
            if isinstance(e, FreeParam):
                lines.append(f"{r} {c} P{e.param_id}")
            else:
                lines.append(f"{r} {c} C{e.value.numerator}/{e.value.denominator}")
        return "\n".join(lines) + ("\n" if lines else "")


def coupling_position(order: int, src: int, dst: int) -> tuple[int, int]:
    """Matrix position of the coupling from unit src into unit dst.

    The source unit's 0th-order state drives the target unit's highest-order
    equation: row d*dst + d-1, column d*src. Isolated here so an alternative
    off-block placement can be swapped in.
    """
    return order * dst + order - 1, order * src


def assemble(
    t: Topology,
    a: Assignment,
    fixed_edges: dict[int, Fraction] | None = None,
) -> StateMatrix:
    """Build the dN x dN mixed state matrix from a topology and an assignment.

    fixed_edges maps edge-list indices to constant weights: those couplings
    become Const entries instead of free parameters (used to probe link-weight
    similarity); an undirected fixed edge fixes both symmetric positions.
    """
    if len(a.node_type) != t.n_nodes:
        raise InvalidAssignmentError(
            f"assignment covers {len(a.node_type)} nodes, topology has {t.n_nodes}"
        )
    d = a.order
    dim = d * t.n_nodes
    entries: list[tuple[int, int, Entry]] = []
    for v, ti in enumerate(a.node_type):
        blk = a.types[ti].companion_block()
        for r in range(d):
            for c in range(d):
                if blk[r][c] != 0:
                    entries.append((d * v + r, d * v + c, Const(blk[r][c])))
    fixed = fixed_edges or {}
    pid = 0
    for idx, (s, dst) in enumerate(t.edges):
        pos = coupling_position(d, s, dst)
        if idx in fixed:
            entries.append((pos[0], pos[1], Const(Fraction(fixed[idx]))))
            if not t.directed:
                rpos = coupling_position(d, dst, s)
                entries.append((rpos[0], rpos[1], Const(Fraction(fixed[idx]))))
        else:
            entries.append((pos[0], pos[1], FreeParam(pid)))
            if not t.directed:
                rpos = coupling_position(d, dst, s)
                entries.append((rpos[0], rpos[1], FreeParam(pid)))
            pid += 1
    eigs = sorted({lam for ut in a.types for lam in ut.eigenvalues})
    return StateMatrix(dim, d, t.n_nodes, tuple(entries), tuple(eigs), pid)


def delta(arg: Union[Assignment, Sequence[Rational]]) -> float:
    """Density heterogeneity: sum_i |rho_i - 1/N_s|. Zero iff all equal."""
    dens = arg.densities if isinstance(arg, Assignment) else [Fraction(d) for d in arg]
    ns = len(dens)
    if ns < 1:
        raise ValueError("need at least one density")
    return float(sum(abs(Fraction(d) - Fraction(1, ns)) for d in dens))


def densities_on_simplex(grid_step: Rational) -> list[tuple[Fraction, Fraction, Fraction]]:
    """All nonnegative density triples summing to 1 on the lattice of the given step.

    Count is C(1/step + 2, 2); ordered lexicographically by (rho1, rho2).
    """
    step = Fraction(grid_step)
    if step <= 0:
        raise ValueError("grid_step must be positive")
    m = Fraction(1) / step
    if m.denominator != 1:
        raise ValueError(f"grid_step {step} does not divide 1")
    m = int(m)
    pts = []
    for i in range(m + 1):
        for j in range(m - i + 1):
            k = m - i - j
            pts.append((Fraction(i, m), Fraction(j, m), Fraction(k, m)))
    assert len(pts) == math.comb(m + 2, 2)
    return pts
