"""Degeneracy of matrices: anti-triviality by a column scan, triviality by a
Boolean term-consistency search.

A matrix is anti-trivial exactly when its right column already appears among
its left columns (the property then holds in every finitely complete
category).  Triviality is decided through the two-element Boolean algebra:
the property fails to force a preorder exactly when there is an m-ary Boolean
function p with p(row entries) = row conclusion under every 0/1 assignment of
the variables.  Over the two-element algebra every finitary function is a
term, so existence reduces to consistency of the constraints collected from
all 2^k assignments.  The brute-force relation scan in
:mod:`mclex.finite_models` cross-checks this reduction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .matrix import Matrix, validate


class Degeneracy(enum.Enum):
    TRIVIAL = "trivial"
    ANTI_TRIVIAL = "anti-trivial"
    NON_DEGENERATE = "non-degenerate"


@dataclass(frozen=True)
class TruthTable:
    """An m-ary Boolean function, packed LSB-first by input index.

    Input (b1..bm) has index sum(b_l << (l-1)); bit ``index`` of ``bits`` is
    the output.  ``constrained`` marks the cells forced by some assignment;
    free cells default to 0.
    """

    arity: int
    bits: int
    constrained: int

    def value(self, inputs: tuple[int, ...]) -> int:
        idx = 0
        for l, b in enumerate(inputs):
            idx |= (b & 1) << l
        return (self.bits >> idx) & 1

    def _hex(self, word: int) -> str:
        width = max(1, (1 << self.arity) // 4)
        return format(word, f"0{width}x")

    def to_hex(self) -> str:
        return self._hex(self.bits)

    def constrained_hex(self) -> str:
        return self._hex(self.constrained)


@dataclass(frozen=True)
class TermConstraint:
    """One cell constraint: under ``assignment`` (bit per variable x1..xk),
    row ``row`` forces table(``inputs``) = ``output``."""

    assignment: tuple[int, ...]
    row: int
    inputs: tuple[int, ...]
    output: int


@dataclass(frozen=True)
class DegeneracyVerdict:
    tag: Degeneracy
    witness: TruthTable | None
    conflict: tuple[TermConstraint, TermConstraint] | None


def is_anti_trivial(m: Matrix) -> bool:
    """True iff the right column equals some left column entrywise."""
    m = validate(m)
    return m.right in set(m.left)


def _term_search(m: Matrix) -> tuple[TruthTable | None,
                                     tuple[TermConstraint, TermConstraint] | None]:
    """Collect the cell constraints over all 2^k assignments.

    Returns (table, None) with free cells defaulted to 0 when consistent,
    or (None, conflicting pair) at the first conflict in scan order
    (assignments as ascending bit masks, rows top to bottom).
    """
    m = validate(m)
    cells: dict[int, TermConstraint] = {}
    for a in range(1 << m.k):
        sigma = tuple((a >> v) & 1 for v in range(m.k))
        for i in range(m.n):
            idx = 0
            for l in range(m.m):
                idx |= sigma[m.left[l][i] - 1] << l
            out = sigma[m.right[i] - 1]
            inputs = tuple((idx >> l) & 1 for l in range(m.m))
            cur = cells.get(idx)
            if cur is None:
                cells[idx] = TermConstraint(sigma, i + 1, inputs, out)
            elif cur.output != out:
                return None, (cur, TermConstraint(sigma, i + 1, inputs, out))
    bits = 0
    constrained = 0
    for idx, c in cells.items():
        constrained |= 1 << idx
        bits |= c.output << idx
    return TruthTable(m.m, bits, constrained), None


def boolean_term_witness(m: Matrix) -> TruthTable | None:
    """A Boolean function compatible with every row under every assignment,
    or ``None`` when two constraints conflict (the matrix is then trivial)."""
    table, _ = _term_search(m)
    return table


def is_trivial(m: Matrix) -> bool:
    return boolean_term_witness(m) is None


def degeneracy_class(m: Matrix) -> DegeneracyVerdict:
    """Anti-trivial first, then trivial, else non-degenerate with witness."""
    m = validate(m)
    table, conflict = _term_search(m)
    if is_anti_trivial(m):
        assert table is not None  # projection on the matching column always fits
        return DegeneracyVerdict(Degeneracy.ANTI_TRIVIAL, table, None)
    if table is None:
        return DegeneracyVerdict(Degeneracy.TRIVIAL, None, conflict)
    return DegeneracyVerdict(Degeneracy.NON_DEGENERATE, table, None)
