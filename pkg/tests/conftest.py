import itertools
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from mclex import (Matrix, arithmetical, majority, maltsev,
                   pair_projection_matrix, validate)
from mclex.kernels import available_backends

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


# ---------------------------------------------------------------------------
# Strategies


def matrices(max_n=3, max_m=3, max_k=3, min_n=1, min_m=0):
    """Validated random matrices in small shape classes."""

    @st.composite
    def build(draw):
        n = draw(st.integers(min_n, max_n))
        m = draw(st.integers(min_m, max_m))
        k = draw(st.integers(1, max_k))
        entry = st.integers(1, k)
        col = st.tuples(*([entry] * n))
        left = tuple(draw(col) for _ in range(m))
        right = draw(col)
        return validate(Matrix(left, right, k))

    return build()


def row_permuted(m: Matrix, perm) -> Matrix:
    rows = m.rows()
    return Matrix.from_rows([rows[i] for i in perm], k=m.k)


def col_permuted(m: Matrix, perm) -> Matrix:
    return Matrix(tuple(m.left[i] for i in perm), m.right, m.k)


def renamed(m: Matrix, perm) -> Matrix:
    """perm is a permutation of 1..k as a tuple; variable v becomes perm[v-1]."""
    left = tuple(tuple(perm[e - 1] for e in col) for col in m.left)
    right = tuple(perm[e - 1] for e in m.right)
    return Matrix(left, right, m.k)


def with_dup_row(m: Matrix, i: int) -> Matrix:
    rows = m.rows()
    return Matrix.from_rows(list(rows) + [rows[i % m.n]], k=m.k)


def with_dup_col(m: Matrix, i: int) -> Matrix:
    if m.m == 0:
        return m
    return Matrix(m.left + (m.left[i % m.m],), m.right, m.k)


@st.composite
def matrix_and_symmetry(draw, **kw):
    m = draw(matrices(**kw))
    row_perm = draw(st.permutations(range(m.n)))
    col_perm = draw(st.permutations(range(m.m)))
    var_perm = draw(st.permutations(range(1, m.k + 1)))
    return m, tuple(row_perm), tuple(col_perm), tuple(var_perm)


# ---------------------------------------------------------------------------
# Fixtures


@pytest.fixture(scope="session")
def mal():
    return maltsev()


@pytest.fixture(scope="session")
def maj():
    return majority()


@pytest.fixture(scope="session")
def ari():
    return arithmetical()


@pytest.fixture(scope="session")
def proj3():
    return pair_projection_matrix(3)


@pytest.fixture(scope="session")
def proj4():
    return pair_projection_matrix(4)


@pytest.fixture(scope="session")
def proj5():
    return pair_projection_matrix(5)


@pytest.fixture(scope="session", params=available_backends())
def backend(request):
    return request.param


def golden_matrices():
    """The named matrices plus the small members of the projection family."""
    return {
        "mal": maltsev(),
        "maj": majority(),
        "ari": arithmetical(),
        "proj3": pair_projection_matrix(3),
        "proj4": pair_projection_matrix(4),
        "anti": Matrix.from_rows([[1, 1]]),
        "triv": Matrix.from_rows([[1, 2]]),
    }


def brute_one_step(m: Matrix, columns, k_t: int, n_t: int):
    """Blind-enumeration twin of the engine's one-step rule (test oracle)."""
    S = set(columns)
    out = set()
    for rho in itertools.product(range(m.n), repeat=n_t):
        for fs in itertools.product(
                itertools.product(range(1, k_t + 1), repeat=m.k), repeat=n_t):
            if all(tuple(fs[i][m.left[l][rho[i]] - 1] for i in range(n_t)) in S
                   for l in range(m.m)):
                out.add(tuple(fs[i][m.right[rho[i]] - 1] for i in range(n_t)))
    return out - S


def brute_implies(m: Matrix, n: Matrix) -> bool:
    """Saturate with the blind rule; the independent implication oracle."""
    m = validate(m)
    n = validate(n)
    cols = set(n.left)
    target = n.right
    while target not in cols:
        new = brute_one_step(m, cols, n.k, n.n)
        if not new:
            return False
        cols |= new
    return True
