"""Theorem-backed classification of matrices.

Three exact facts drive everything here:

* a matrix fails to imply the Mal'tsev (difunctionality) property exactly
  when every selection of two of its rows is anti-trivial;
* a two-row matrix class is trivial, anti-trivial, or the Mal'tsev class;
* for n >= 3, either the matrix implies Mal'tsev, or the n-row pairwise
  projection matrix implies it -- never both -- and over regular categories
  the pairwise projection property collapses to the majority property.

The regular-context classifier is therefore a lookup on top of these
syntactic checks; no search over regular categories happens (no complete
procedure for regular implication is known, and none is attempted).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .degeneracy import Degeneracy, DegeneracyVerdict, degeneracy_class, is_anti_trivial, is_trivial
from .errors import ShapeError
from .matrix import Matrix, select_rows, validate


class TwoRowClass(enum.Enum):
    TRIVIAL = "trivial"
    ANTI_TRIVIAL = "anti-trivial"
    MAL_EQUIVALENT = "mal-equivalent"


class Side(enum.Enum):
    MALTSEV = "maltsev-side"          # the matrix implies the Mal'tsev property
    PAIR_PROJECTION = "mn-side"       # the n-row pairwise projection matrix implies it


class RegularTag(enum.Enum):
    TRIVIAL = "trivial"
    ANTI_TRIVIAL = "anti-trivial"
    IMPLIES_MAL = "implies-mal-reg"
    IMPLIED_BY_MAJ = "implied-by-maj-reg"


@dataclass(frozen=True)
class RegularClassification:
    tag: RegularTag
    # rows whose two-row selection is not anti-trivial (IMPLIES_MAL evidence)
    witness_pair: tuple[int, int] | None = None
    witness_matrix: Matrix | None = None
    # all row pairs confirmed anti-trivial (IMPLIED_BY_MAJ evidence)
    checked_pairs: tuple[tuple[int, int], ...] | None = None
    degeneracy: DegeneracyVerdict | None = None


def maltsev_witness_pair(m: Matrix) -> tuple[int, int] | None:
    """First row pair (i <= j, repetition allowed) whose selection is not
    anti-trivial, or ``None`` when all are."""
    m = validate(m)
    for i in range(1, m.n + 1):
        for j in range(i, m.n + 1):
            if not is_anti_trivial(select_rows(m, [i, j])):
                return (i, j)
    return None


def implies_maltsev(m: Matrix) -> bool:
    """Does the matrix property imply difunctionality (lex context)?

    Holds unless every selection of two rows (including repeated rows, whose
    anti-triviality equals that of the single row) forms an anti-trivial
    matrix.  Cross-validated against the saturation engine in the tests.
    """
    return maltsev_witness_pair(m) is not None


def two_row_class(m: Matrix) -> TwoRowClass:
    """Collapse for two-row matrices: trivial, anti-trivial, or Mal'tsev."""
    m = validate(m)
    if m.n != 2:
        raise ShapeError(f"two_row_class needs exactly 2 rows, got {m.n}")
    verdict = degeneracy_class(m)
    if verdict.tag is Degeneracy.TRIVIAL:
        return TwoRowClass.TRIVIAL
    if verdict.tag is Degeneracy.ANTI_TRIVIAL:
        return TwoRowClass.ANTI_TRIVIAL
    return TwoRowClass.MAL_EQUIVALENT


def dichotomy_side(m: Matrix) -> Side:
    """For n >= 3: either the matrix implies Mal'tsev, or the n-row pairwise
    projection matrix implies it (exclusively)."""
    m = validate(m)
    if m.n < 3:
        raise ShapeError(f"the alternative needs n >= 3 rows, got {m.n}")
    return Side.MALTSEV if implies_maltsev(m) else Side.PAIR_PROJECTION


def classify_regular(m: Matrix) -> RegularClassification:
    """Regular-context classification: trivial / anti-trivial matrices keep
    their tags; otherwise the matrix either implies the Mal'tsev property or
    is implied by the majority property, decided by the two-row scan."""
    m = validate(m)
    verdict = degeneracy_class(m)
    if verdict.tag is Degeneracy.TRIVIAL:
        return RegularClassification(RegularTag.TRIVIAL, degeneracy=verdict)
    if verdict.tag is Degeneracy.ANTI_TRIVIAL:
        return RegularClassification(RegularTag.ANTI_TRIVIAL, degeneracy=verdict)
    pair = maltsev_witness_pair(m)
    if m.n <= 2 or pair is not None:
        wm = select_rows(m, list(pair)) if pair is not None else None
        return RegularClassification(RegularTag.IMPLIES_MAL,
                                     witness_pair=pair, witness_matrix=wm,
                                     degeneracy=verdict)
    pairs = tuple((i, j) for i in range(1, m.n + 1) for j in range(i, m.n + 1))
    return RegularClassification(RegularTag.IMPLIED_BY_MAJ,
                                 checked_pairs=pairs, degeneracy=verdict)


def implied_by_arithmetical_reg(m: Matrix) -> bool:
    """Do regular arithmetical categories satisfy the property of ``m``?
    True exactly when the matrix is non-trivial."""
    return not is_trivial(m)
