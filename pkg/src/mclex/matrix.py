"""Extended matrices of variables: data model, canonical forms, generators, parsing.

A matrix here is an n x (m+1) grid of variable indices: m "left" columns
(premises) and one "right" column (conclusion).  Entries are 1-based indices
into a variable alphabet x1..xk.  Matrices are stored column-major because
columns are the unit the closure engine works on.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, ParseError, ShapeError, VariableError

Column = tuple[int, ...]


@dataclass(frozen=True)
class Matrix:
    """An n-row matrix with ``m`` left columns and one right column.

    ``k`` is the size of the ambient variable alphabet.  Entries never exceed
    ``k``, but after row selection some alphabet variables may be unused;
    :func:`validate` re-indexes to a contiguous alphabet.
    """

    left: tuple[Column, ...]
    right: Column
    k: int

    def __post_init__(self):
        left = tuple(tuple(int(e) for e in col) for col in self.left)
        right = tuple(int(e) for e in self.right)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        n = len(right)
        if n == 0:
            raise ShapeError("a matrix needs at least one row")
        for col in left:
            if len(col) != n:
                raise ShapeError(
                    f"ragged columns: left column of length {len(col)}, expected {n}")
        for e in itertools.chain(right, *left):
            if e < 1:
                raise VariableError(f"variable index {e} out of range (must be >= 1)")
        k = int(self.k)
        object.__setattr__(self, "k", k)
        top = max(max((max(col) for col in left), default=1), max(right))
        if k < top:
            raise VariableError(f"k={k} smaller than the largest entry {top}")
        if k < 1:
            raise VariableError("k must be positive")

    @property
    def n(self) -> int:
        return len(self.right)

    @property
    def m(self) -> int:
        return len(self.left)

    def rows(self) -> tuple[tuple[int, ...], ...]:
        """The n full rows, each of length m+1 (left entries then right entry)."""
        return tuple(
            tuple(col[i] for col in self.left) + (self.right[i],)
            for i in range(self.n)
        )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], k: int | None = None) -> "Matrix":
        """Build a matrix from full rows; the last entry of each row is the right entry."""
        rows = [tuple(int(e) for e in r) for r in rows]
        if not rows:
            raise ShapeError("a matrix needs at least one row")
        width = len(rows[0])
        if width == 0:
            raise ShapeError("rows need at least the right entry")
        for r in rows:
            if len(r) != width:
                raise ShapeError(f"ragged rows: lengths {width} and {len(r)}")
        left = tuple(tuple(r[c] for r in rows) for c in range(width - 1))
        right = tuple(r[width - 1] for r in rows)
        if k is None:
            k = max(max(r) for r in rows)
        return cls(left, right, k)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Matrix({'; '.join(' '.join(map(str, r[:-1])) + ' | ' + str(r[-1]) for r in self.rows())})"


@dataclass(frozen=True, repr=False)
class CanonicalMatrix(Matrix):
    """A matrix in canonical form (see :func:`canonicalize`)."""


def validate(m: Matrix | Sequence[Sequence[int]]) -> Matrix:
    """Normalise a matrix: contiguous variable alphabet, ``k`` recomputed.

    Accepts a :class:`Matrix` or an array of full rows.  Gaps in the used
    variable indices are collapsed preserving index order (entries {1,3}
    become {1,2}).  Idempotent; an already-valid matrix is returned as-is.
    """
    if not isinstance(m, Matrix):
        m = Matrix.from_rows(m)
    occurring = sorted({e for col in m.left for e in col} | set(m.right))
    remap = {v: i + 1 for i, v in enumerate(occurring)}
    if m.k == len(occurring) and all(v == w for v, w in remap.items()):
        return m
    left = tuple(tuple(remap[e] for e in col) for col in m.left)
    right = tuple(remap[e] for e in m.right)
    return Matrix(left, right, len(occurring))


def canonicalize(m: Matrix) -> CanonicalMatrix:
    """Deterministic normal form, invariant under the matrix symmetries.

    Duplicate rows and duplicate left columns are removed (they do not change
    the property the matrix expresses), and the result is the lexicographically
    least presentation over all row orders and variable relabelings, with left
    columns sorted ascending.  The form is idempotent and unchanged by row
    permutation, left-column permutation, bijective renaming, and duplication.

    Cost grows with n! * k! of the deduplicated matrix; fine for the small
    shapes the enumerator visits, noticeable around n=5, k=7.
    """
    m = validate(m)
    seen_rows: list[tuple[int, ...]] = []
    for r in m.rows():
        if r not in seen_rows:
            seen_rows.append(r)
    width = len(seen_rows[0])
    left_cols: list[Column] = []
    for c in range(width - 1):
        col = tuple(r[c] for r in seen_rows)
        if col not in left_cols:
            left_cols.append(col)
    right_col = tuple(r[width - 1] for r in seen_rows)
    n = len(seen_rows)
    k = m.k

    best_r: Column | None = None
    best_l: tuple[Column, ...] | None = None
    for sigma in itertools.permutations(range(n)):
        for pi in itertools.permutations(range(1, k + 1)):
            key_r = tuple(pi[right_col[s] - 1] for s in sigma)
            if best_r is not None and key_r > best_r:
                continue
            key_l = tuple(sorted(
                tuple(pi[col[s] - 1] for s in sigma) for col in left_cols))
            if best_r is None or key_r < best_r or key_l < best_l:
                best_r, best_l = key_r, key_l
    assert best_r is not None and best_l is not None
    return CanonicalMatrix(best_l, best_r, k)


# ---------------------------------------------------------------------------
# Named generators


def maltsev() -> Matrix:
    """The two-row difunctionality matrix: from (a,c),(b,c),(b,d) derive (a,d)."""
    return Matrix.from_rows([
        [1, 2, 2, 1],
        [2, 2, 1, 1],
    ])


def majority() -> Matrix:
    """The three-row majority matrix."""
    return Matrix.from_rows([
        [1, 1, 2, 1],
        [1, 2, 1, 1],
        [2, 1, 1, 1],
    ])


def arithmetical() -> Matrix:
    """The three-row arithmetical (Pixley-style) matrix: Mal'tsev plus majority."""
    return Matrix.from_rows([
        [1, 2, 2, 1],
        [2, 2, 1, 1],
        [1, 2, 1, 1],
    ])


_NAMED = {
    "mal": maltsev,
    "maltsev": maltsev,
    "maj": majority,
    "majority": majority,
    "ari": arithmetical,
    "arithmetical": arithmetical,
}


def gen_named(name: str) -> Matrix:
    """Look up one of the named generator matrices (mal / maj / ari)."""
    try:
        return _NAMED[name.lower()]()
    except KeyError:
        raise DomainError(f"unknown matrix name {name!r}; expected one of "
                          f"{sorted(set(_NAMED))}") from None


def pair_projection_matrix(n: int) -> Matrix:
    """The n-row matrix forcing membership of a tuple whose two-coordinate
    projections all lie in the relation.

    It has C(n,2) left columns c_(i,j) in lexicographic (i,j) order, x1 at
    rows i and j of column c_(i,j), an all-x1 right column, and the remaining
    slots of each row filled left-to-right with x2..xk (k = C(n-1,2)+1), each
    exactly once per row.  For n=3 this is exactly the majority matrix.
    """
    if n < 3:
        raise DomainError(f"pair projection matrix needs n >= 3, got {n}")
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    m = len(pairs)
    k = (n - 1) * (n - 2) // 2 + 1
    grid: list[list[int]] = [[0] * m for _ in range(n)]
    for c, (i, j) in enumerate(pairs):
        grid[i - 1][c] = 1
        grid[j - 1][c] = 1
    for r in range(n):
        nxt = 2
        for c in range(m):
            if grid[r][c] == 0:
                grid[r][c] = nxt
                nxt += 1
        assert nxt == k + 1
    left = tuple(tuple(grid[r][c] for r in range(n)) for c in range(m))
    return Matrix(left, (1,) * n, k)


def select_rows(m: Matrix, idx: Sequence[int]) -> Matrix:
    """Matrix whose j-th row is row ``idx[j]`` (1-based) of ``m``.

    Repetition is allowed; the variable alphabet is kept as-is (no
    re-indexing), so two-row selections can be tested for anti-triviality on
    the original entries.
    """
    for j in idx:
        if not 1 <= j <= m.n:
            raise IndexError(f"row index {j} out of range 1..{m.n}")
    left = tuple(tuple(col[j - 1] for j in idx) for col in m.left)
    right = tuple(m.right[j - 1] for j in idx)
    return Matrix(left, right, m.k)


# ---------------------------------------------------------------------------
# Parsing and rendering


def parse_matrix(text: str) -> Matrix:
    """Parse the text format: one row per line, ``left entries | right entry``.

    Blank lines are skipped.  The result is validated (contiguous alphabet).
    """
    def parse_ints(ln: int, line: str, lo: int, hi: int) -> list[int]:
        out = []
        pos = lo
        for tok in line[lo:hi].split():
            col = line.index(tok, pos)
            pos = col + len(tok)
            try:
                val = int(tok)
            except ValueError:
                raise ParseError(f"expected an integer, got {tok!r}", ln, col + 1) from None
            if val < 1:
                raise ParseError(f"variable index must be >= 1, got {val}", ln, col + 1)
            out.append(val)
        return out

    rows: list[list[int]] = []
    width: int | None = None
    for ln, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if line.count("|") != 1:
            second = line.find("|", line.find("|") + 1)
            raise ParseError("expected exactly one '|' separator", ln,
                             second + 1 if second >= 0 else 1)
        bar = line.index("|")
        lefts = parse_ints(ln, line, 0, bar)
        rights = parse_ints(ln, line, bar + 1, len(line))
        if len(rights) != 1:
            raise ParseError(f"expected exactly one right entry, got {len(rights)}",
                             ln, bar + 2)
        entries = lefts + rights
        if width is None:
            width = len(entries)
        elif len(entries) != width:
            raise ParseError(f"row has {len(entries)} entries, previous rows had {width}",
                             ln, 1)
        rows.append(entries)
    if not rows:
        raise ParseError("no matrix rows found", 1, 1)
    return validate(Matrix.from_rows(rows))


def render_matrix(m: Matrix, fmt: str = "text") -> str:
    """Render a matrix as ``text`` (round-trips through :func:`parse_matrix`)
    or ``json``."""
    if fmt == "text":
        lines = []
        for r in m.rows():
            left = " ".join(str(e) for e in r[:-1])
            lines.append(f"{left} | {r[-1]}" if left else f"| {r[-1]}")
        return "\n".join(lines)
    if fmt == "json":
        return json.dumps(matrix_to_dict(m), sort_keys=True)
    raise DomainError(f"unknown format {fmt!r}; expected 'text' or 'json'")


def matrix_to_dict(m: Matrix) -> dict:
    return {
        "n": m.n,
        "k": m.k,
        "left": [list(col) for col in m.left],
        "right": list(m.right),
    }


def same_entries(a: Matrix, b: Matrix) -> bool:
    """Entrywise equality ignoring the canonical-form flag."""
    return a.left == b.left and a.right == b.right and a.k == b.k
