import itertools

import pytest
from hypothesis import given, settings, strategies as st

from mclex import (DomainError, FiniteRelation, Matrix, ParseError,
                   ResourceLimitError, ShapeError, bool_has_closed_relations,
                   enumerate_bool_relations, interp_closed, is_trivial,
                   parse_relation, replay_counterexample)
from mclex.finite_models import render_relation

from conftest import matrices

DIAG = FiniteRelation((2, 2), {(0, 0), (1, 1)})
TRIANGLE = FiniteRelation((2, 2), {(0, 0), (0, 1), (1, 1)})
ANTI = Matrix.from_rows([[1, 1]])
TRIV = Matrix.from_rows([[1, 2]])


def test_relation_validation():
    with pytest.raises(ShapeError):
        FiniteRelation((2, 2), {(0,)})
    with pytest.raises(DomainError):
        FiniteRelation((2,), {(3,)})


# ---------------------------------------------------------------------------
# interp_closed


def test_diagonal_is_difunctional(mal):
    report = interp_closed(DIAG, mal)
    assert report.closed and report.scanned == 16


def test_triangle_fails_difunctionality(mal):
    report = interp_closed(TRIANGLE, mal)
    assert not report.closed
    assert replay_counterexample(TRIANGLE, mal, report)
    # first counterexample in scan order: (1,1),(0,1),(0,0) in R but (1,0) missing
    assert report.interpretations == ((1, 0), (0, 1))
    assert report.violation == (1, 0)


def test_arity_mismatch(maj):
    with pytest.raises(ShapeError):
        interp_closed(DIAG, maj)


def test_interp_cap():
    with pytest.raises(ResourceLimitError):
        interp_closed(DIAG, Matrix.from_rows([[1, 2, 3, 4, 1], [4, 3, 2, 1, 1]]),
                      cap=10)


def test_scan_is_deterministic(mal, backend):
    a = interp_closed(TRIANGLE, mal, backend=backend)
    b = interp_closed(TRIANGLE, mal, backend=backend)
    assert a == b


@given(matrices(max_n=2, max_m=2, max_k=2))
def test_anti_trivial_closed_for_any_relation(m):
    from mclex import is_anti_trivial
    if not is_anti_trivial(m):
        return
    rel = FiniteRelation((2,) * m.n, set(itertools.product((0, 1), repeat=m.n)) - {(0,) * m.n})
    assert interp_closed(rel, m).closed


@given(matrices(max_n=2, max_m=2, max_k=2),
       st.sets(st.tuples(st.integers(0, 1), st.integers(0, 1)), max_size=4))
def test_counterexamples_always_replay(m, tuples):
    if m.n != 2:
        return
    rel = FiniteRelation((2, 2), tuples)
    report = interp_closed(rel, m)
    if not report.closed:
        assert replay_counterexample(rel, m, report)


def test_brute_force_agreement(mal, backend):
    """The kernel scan agrees with straight itertools enumeration."""
    def slow_closed(rel, m):
        spaces = [list(itertools.product(range(c), repeat=m.k)) for c in rel.carriers]
        for fs in itertools.product(*spaces):
            if all(tuple(fs[i][m.left[l][i] - 1] for i in range(m.n)) in rel.tuples
                   for l in range(m.m)):
                if tuple(fs[i][m.right[i] - 1] for i in range(m.n)) not in rel.tuples:
                    return False
        return True

    for mask in range(16):
        tuples = {t for b, t in enumerate(itertools.product((0, 1), repeat=2))
                  if (mask >> b) & 1}
        rel = FiniteRelation((2, 2), tuples)
        assert interp_closed(rel, mal, backend=backend).closed == slow_closed(rel, mal)


# ---------------------------------------------------------------------------
# compatible Boolean relations


def test_bool_relations_arity_1():
    rels = enumerate_bool_relations(1)
    assert len(rels) == 1
    assert rels[0].tuples == frozenset({(0,), (1,)})


def test_bool_relations_arity_2():
    rels = enumerate_bool_relations(2)
    assert [sorted(r.tuples) for r in rels] == [
        [(0, 0), (1, 1)],
        [(0, 0), (0, 1), (1, 0), (1, 1)],
    ]


def test_bool_relations_arity_3():
    rels = enumerate_bool_relations(3)
    assert len(rels) == 5
    members = [frozenset(r.tuples) for r in rels]
    diag = frozenset({(0, 0, 0), (1, 1, 1)})
    full = frozenset(itertools.product((0, 1), repeat=3))
    assert diag in members and full in members
    # the other three are the cylinders gluing two coordinates
    for a, b in ((0, 1), (0, 2), (1, 2)):
        cyl = frozenset(t for t in full if t[a] == t[b])
        assert cyl in members
    # independently: each is a subalgebra under meet, join, complement
    for r in rels:
        ts = r.tuples
        for x in ts:
            assert tuple(1 - e for e in x) in ts
            for y in ts:
                assert tuple(a & b for a, b in zip(x, y)) in ts
                assert tuple(a | b for a, b in zip(x, y)) in ts


def test_bool_relations_arity_cap():
    with pytest.raises(DomainError):
        enumerate_bool_relations(4)


# ---------------------------------------------------------------------------
# bool_has_closed_relations


def test_bool_closed_named(mal, maj):
    assert bool_has_closed_relations(mal)
    assert bool_has_closed_relations(maj)
    assert bool_has_closed_relations(ANTI)
    assert not bool_has_closed_relations(TRIV)


def test_bool_closed_needs_small_rows(proj4):
    with pytest.raises(ShapeError):
        bool_has_closed_relations(proj4)


def test_oracle_agrees_with_term_solver_golden(mal, maj, ari, proj3):
    for m in (mal, maj, ari, proj3, ANTI, TRIV):
        assert is_trivial(m) == (not bool_has_closed_relations(m))


@settings(max_examples=40)
@given(matrices(max_n=2, max_m=3, max_k=2))
def test_oracle_agrees_with_term_solver_random(m):
    assert is_trivial(m) == (not bool_has_closed_relations(m))


@settings(max_examples=15)
@given(matrices(min_n=3, max_n=3, max_m=2, max_k=2))
def test_oracle_agrees_on_three_rows(m):
    assert is_trivial(m) == (not bool_has_closed_relations(m))


# ---------------------------------------------------------------------------
# relation files


def test_relation_roundtrip():
    text = render_relation(TRIANGLE)
    assert parse_relation(text) == TRIANGLE


def test_relation_parse_errors():
    with pytest.raises(ParseError):
        parse_relation("")
    with pytest.raises(ParseError):
        parse_relation("2 2\n0 0")          # header announces 2 carriers, lists 1
    with pytest.raises(ParseError):
        parse_relation("2 2 2\n0\n")        # short tuple
    with pytest.raises(ParseError):
        parse_relation("2 2 2\n0 x\n")      # bad token
    with pytest.raises(ParseError):
        parse_relation("2 2 2\n0 5\n")      # out of carrier range
