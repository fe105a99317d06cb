"""Brute-force semantic oracles over finite relations.

These are deliberately independent of the syntactic deciders: a relation is
checked for strict closedness under a matrix by scanning every row-wise
interpretation, and triviality is cross-checked by enumerating the compatible
relations of the two-element Boolean algebra (subalgebras of its finite
powers, distributed over the matrix rows by row duplication).  Disagreement
between the oracles and the fast deciders fails the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParseError, ResourceLimitError, ShapeError
from .kernels import BUDGET_EXCEEDED, EARLY_HIT, get_kernels
from .matrix import Matrix, select_rows, validate

DEFAULT_INTERP_CAP = 10**8


@dataclass(frozen=True)
class FiniteRelation:
    """A finite relation on a product of integer ranges.

    ``carriers[i]`` is the size of the i-th carrier {0..c-1}; ``tuples`` is
    the set of member tuples.
    """

    carriers: tuple[int, ...]
    tuples: frozenset[tuple[int, ...]]

    def __post_init__(self):
        carriers = tuple(int(c) for c in self.carriers)
        tuples = frozenset(tuple(int(e) for e in t) for t in self.tuples)
        object.__setattr__(self, "carriers", carriers)
        object.__setattr__(self, "tuples", tuples)
        if not carriers or any(c < 1 for c in carriers):
            raise ShapeError("carriers must be non-empty positive sizes")
        for t in tuples:
            if len(t) != len(carriers):
                raise ShapeError(f"tuple {t} has arity {len(t)}, expected {len(carriers)}")
            for e, c in zip(t, carriers):
                if not 0 <= e < c:
                    raise DomainError(f"entry {e} outside carrier range 0..{c - 1}")

    @property
    def arity(self) -> int:
        return len(self.carriers)


@dataclass(frozen=True)
class ClosednessReport:
    """Outcome of an exhaustive closedness scan.

    On failure, ``interpretations[i]`` maps the 1-based variable v to the
    carrier element ``interpretations[i][v-1]`` for row i, and ``violation``
    is the interpreted right column missing from the relation.
    """

    closed: bool
    interpretations: tuple[tuple[int, ...], ...] | None
    violation: tuple[int, ...] | None
    scanned: int


def interp_closed(rel: FiniteRelation, m: Matrix, *,
                  cap: int = DEFAULT_INTERP_CAP,
                  backend: str | None = None) -> ClosednessReport:
    """Scan all row-wise interpretations of ``m`` into the carriers of ``rel``.

    Deterministic lexicographic order (row 1's interpretation most
    significant, values ascending); the first violating interpretation is
    reported.  Raises :class:`ResourceLimitError` when the scan space
    ``prod |X_i|^k`` exceeds ``cap``.
    """
    m = validate(m)
    if rel.arity != m.n:
        raise ShapeError(f"relation arity {rel.arity} != matrix row count {m.n}")
    total = 1
    for c in rel.carriers:
        total *= c**m.k
    if total > cap:
        raise ResourceLimitError(
            f"interpretation scan of size {total} exceeds the cap {cap}",
            phase="interp-scan", used=total, limit=cap)
    ml, mr = _matrix_arrays(m)
    sizes = np.array(rel.carriers, dtype=np.int64)
    mult = np.ones(m.n, dtype=np.int64)
    for i in range(m.n - 2, -1, -1):
        mult[i] = mult[i + 1] * sizes[i + 1]
    space = int(mult[0] * sizes[0])
    table = np.zeros(space, dtype=np.bool_)
    for t in rel.tuples:
        idx = 0
        for i, e in enumerate(t):
            idx += e * int(mult[i])
        table[idx] = True
    kern = get_kernels(backend)
    status, f_flat, bad, scanned = kern.interp_scan(
        ml, mr, m.k, sizes, mult, table, np.int64(total))
    if status == BUDGET_EXCEEDED:  # unreachable given the upfront cap check
        raise ResourceLimitError("interpretation scan exceeded its budget",
                                 phase="interp-scan", used=int(scanned), limit=total)
    if status == EARLY_HIT:
        interps = tuple(
            tuple(int(f_flat[i * m.k + v]) for v in range(m.k))
            for i in range(m.n))
        violation = []
        rem = int(bad)
        for i in range(m.n):
            violation.append(rem // int(mult[i]))
            rem %= int(mult[i])
        return ClosednessReport(False, interps, tuple(violation), int(scanned))
    return ClosednessReport(True, None, None, int(scanned))


def replay_counterexample(rel: FiniteRelation, m: Matrix,
                          report: ClosednessReport) -> bool:
    """Check a failure report independently of how it was found: all
    interpreted left columns lie in the relation, the right column does not."""
    if report.closed or report.interpretations is None:
        return False
    m = validate(m)
    fs = report.interpretations
    for l in range(m.m):
        col = tuple(fs[i][m.left[l][i] - 1] for i in range(m.n))
        if col not in rel.tuples:
            return False
    right = tuple(fs[i][m.right[i] - 1] for i in range(m.n))
    return right == report.violation and right not in rel.tuples


def _matrix_arrays(m: Matrix) -> tuple[np.ndarray, np.ndarray]:
    ml = np.empty((m.n, m.m), dtype=np.int64)
    for l, col in enumerate(m.left):
        for r in range(m.n):
            ml[r, l] = col[r] - 1
    mr = np.array([e - 1 for e in m.right], dtype=np.int64)
    return ml, mr


# ---------------------------------------------------------------------------
# Compatible relations of the two-element Boolean algebra


def enumerate_bool_relations(n: int) -> tuple[FiniteRelation, ...]:
    """All n-ary compatible relations over the two-element Boolean algebra:
    subsets of {0,1}^n containing the constant tuples and closed under
    componentwise meet, join and complement.  Ascending bitmask order."""
    if not 1 <= n <= 3:
        raise DomainError(f"exhaustive enumeration supports arity 1..3, got {n}")
    size = 1 << n
    full = (1 << size) - 1
    out = []
    for mask in range(1, full + 1):
        if not (mask >> 0) & 1 or not (mask >> (size - 1)) & 1:
            continue
        members = [t for t in range(size) if (mask >> t) & 1]
        ok = True
        for a in members:
            if not (mask >> (~a & (size - 1))) & 1:
                ok = False
                break
            for b in members:
                if not (mask >> (a & b)) & 1 or not (mask >> (a | b)) & 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            tuples = frozenset(
                tuple((t >> (n - 1 - i)) & 1 for i in range(n)) for t in members)
            out.append(FiniteRelation((2,) * n, tuples))
    return tuple(out)


def _compositions(total: int, parts: int):
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def bool_has_closed_relations(m: Matrix, arity_cap: int = 3, *,
                              backend: str | None = None) -> bool:
    """Does every checked compatible Boolean relation stay closed under ``m``?

    The check ranges over subalgebras of the two-element algebra's powers up
    to total arity ``arity_cap``; a power's coordinates are distributed over
    the matrix rows by duplicating rows, so an n-row matrix is also tested
    against relations on products of larger Boolean algebras.  ``False`` is
    a definite refutation; ``True`` is exhaustive only at this desk scale.
    Cross-checks :func:`mclex.degeneracy.is_trivial` on the golden set.
    """
    m = validate(m)
    if not m.n <= arity_cap <= 3:
        raise ShapeError(
            f"exhaustive mode needs rows <= arity_cap <= 3, got rows={m.n}, "
            f"arity_cap={arity_cap}: relation unchecked")
    for total in range(m.n, arity_cap + 1):
        for parts in _compositions(total, m.n):
            pattern = [i + 1 for i, reps in enumerate(parts) for _ in range(reps)]
            inflated = select_rows(m, pattern)
            for rel in enumerate_bool_relations(total):
                if not interp_closed(rel, inflated, backend=backend).closed:
                    return False
    return True


# ---------------------------------------------------------------------------
# Relation file format


def parse_relation(text: str) -> FiniteRelation:
    """Parse the relation file format: a header line ``n c1 .. cn`` with the
    arity and carrier sizes, then one member tuple per line (0-based)."""
    lines = [(ln, line) for ln, line in enumerate(text.splitlines(), 1)
             if line.strip()]
    if not lines:
        raise ParseError("empty relation file", 1, 1)

    def ints(ln: int, line: str) -> list[int]:
        out = []
        pos = 0
        for tok in line.split():
            col = line.index(tok, pos)
            pos = col + len(tok)
            try:
                out.append(int(tok))
            except ValueError:
                raise ParseError(f"expected an integer, got {tok!r}", ln, col + 1) from None
        return out

    ln0, header = lines[0]
    head = ints(ln0, header)
    if len(head) < 2:
        raise ParseError("header must be: arity followed by carrier sizes", ln0, 1)
    arity, carriers = head[0], head[1:]
    if arity != len(carriers):
        raise ParseError(f"header announces arity {arity} but lists "
                         f"{len(carriers)} carrier sizes", ln0, 1)
    tuples = []
    for ln, line in lines[1:]:
        t = ints(ln, line)
        if len(t) != arity:
            raise ParseError(f"tuple has {len(t)} entries, expected {arity}", ln, 1)
        tuples.append(tuple(t))
    try:
        return FiniteRelation(tuple(carriers), frozenset(tuples))
    except (ShapeError, DomainError) as exc:
        raise ParseError(str(exc), ln0, 1) from None


def render_relation(rel: FiniteRelation) -> str:
    lines = [f"{rel.arity} " + " ".join(str(c) for c in rel.carriers)]
    for t in sorted(rel.tuples):
        lines.append(" ".join(str(e) for e in t))
    return "\n".join(lines)
