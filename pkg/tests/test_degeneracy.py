import pytest
from hypothesis import given

from mclex import (Degeneracy, Matrix, boolean_term_witness, degeneracy_class,
                   is_anti_trivial, is_trivial, pair_projection_matrix)

from conftest import col_permuted, matrix_and_symmetry, renamed, row_permuted, with_dup_col

ANTI = Matrix.from_rows([[1, 1]])
TRIV = Matrix.from_rows([[1, 2]])


def _satisfies_all_rows(m, table):
    """Replay check: the table meets every row constraint of every assignment."""
    for a in range(1 << m.k):
        sigma = [(a >> v) & 1 for v in range(m.k)]
        for i in range(m.n):
            inputs = tuple(sigma[m.left[l][i] - 1] for l in range(m.m))
            if table.value(inputs) != sigma[m.right[i] - 1]:
                return False
    return True


# ---------------------------------------------------------------------------
# anti-triviality


def test_anti_trivial_single_row():
    assert is_anti_trivial(ANTI)


def test_mal_not_anti_trivial(mal):
    assert not is_anti_trivial(mal)


def test_projection_family_not_anti_trivial():
    for n in range(3, 7):
        assert not is_anti_trivial(pair_projection_matrix(n))


# ---------------------------------------------------------------------------
# Boolean term witness


def test_majority_witness_table(maj):
    t = boolean_term_witness(maj)
    assert t is not None
    assert (t.to_hex(), t.constrained_hex()) == ("e8", "ff")
    # the constrained cells are exactly the 3-ary majority function
    assert all(t.value((a, b, c)) == (a + b + c >= 2)
               for a in (0, 1) for b in (0, 1) for c in (0, 1))
    assert _satisfies_all_rows(maj, t)


def test_maltsev_witness_table(mal):
    t = boolean_term_witness(mal)
    assert (t.to_hex(), t.constrained_hex()) == ("92", "db")
    assert _satisfies_all_rows(mal, t)


def test_arithmetical_witness_table(ari):
    t = boolean_term_witness(ari)
    assert (t.to_hex(), t.constrained_hex()) == ("b2", "ff")
    assert _satisfies_all_rows(ari, t)


def test_single_row_fresh_conclusion_has_no_witness():
    # x1 |-> 0 with x2 |-> 0 forces p(0)=0; x2 |-> 1 forces p(0)=1
    assert boolean_term_witness(TRIV) is None


# ---------------------------------------------------------------------------
# triviality


def test_named_matrices_not_trivial(mal, maj, ari):
    assert not is_trivial(mal)
    assert not is_trivial(maj)
    assert not is_trivial(ari)


def test_fresh_conclusion_is_trivial():
    assert is_trivial(TRIV)


def test_projection_family_not_trivial():
    for n in (3, 4, 5):
        assert not is_trivial(pair_projection_matrix(n))


# ---------------------------------------------------------------------------
# degeneracy_class


def test_class_tags(mal, ari):
    assert degeneracy_class(ANTI).tag is Degeneracy.ANTI_TRIVIAL
    assert degeneracy_class(TRIV).tag is Degeneracy.TRIVIAL
    assert degeneracy_class(ari).tag is Degeneracy.NON_DEGENERATE
    assert degeneracy_class(mal).tag is Degeneracy.NON_DEGENERATE


def test_class_payloads():
    v = degeneracy_class(ANTI)
    assert v.witness is not None and v.conflict is None
    v = degeneracy_class(TRIV)
    assert v.witness is None and v.conflict is not None
    c1, c2 = v.conflict
    assert c1.inputs == c2.inputs and c1.output != c2.output


def test_mutually_exclusive_tags():
    # anti-trivial wins and never coincides with trivial
    v = degeneracy_class(ANTI)
    assert v.tag is not Degeneracy.TRIVIAL


# ---------------------------------------------------------------------------
# symmetry invariance


@given(matrix_and_symmetry())
def test_anti_trivial_invariance(data):
    m, rp, cp, vp = data
    base = is_anti_trivial(m)
    assert is_anti_trivial(row_permuted(m, rp)) == base
    assert is_anti_trivial(col_permuted(m, cp)) == base
    assert is_anti_trivial(renamed(m, vp)) == base
    assert is_anti_trivial(with_dup_col(m, 0)) == base


@given(matrix_and_symmetry())
def test_witness_existence_invariance(data):
    m, rp, cp, vp = data
    base = boolean_term_witness(m) is not None
    assert (boolean_term_witness(row_permuted(m, rp)) is not None) == base
    assert (boolean_term_witness(renamed(m, vp)) is not None) == base
    assert (boolean_term_witness(col_permuted(m, cp)) is not None) == base


@given(matrix_and_symmetry())
def test_anti_trivial_implies_witness(data):
    m = data[0]
    if is_anti_trivial(m):
        assert boolean_term_witness(m) is not None


@given(matrix_and_symmetry())
def test_witness_replays(data):
    m = data[0]
    t = boolean_term_witness(m)
    if t is not None:
        assert _satisfies_all_rows(m, t)
