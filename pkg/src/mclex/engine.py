"""Lex-implication between matrix properties, decided by fixpoint saturation.

``M implies N`` (over finitely complete categories) is decided syntactically:
start from the set of N's left columns and repeatedly apply the one-step
derivation rule -- pick a row of M for each target row, pick a per-row
interpretation of M's variables into N's variable alphabet, and if every
interpreted left column of M already lies in the set, its interpreted right
column joins the set.  The implication holds exactly when N's right column is
reachable.  The column universe is finite (k^n for the target), so the least
fixpoint exists and the procedure terminates.

Positive answers carry a replayable derivation trace; negative answers carry
the saturated column set, which an independent audit can check to be closed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import ResourceLimitError, CertificateError, ShapeError
from .kernels import BUDGET_EXCEEDED, EARLY_HIT, get_kernels
from .matrix import Column, Matrix, validate

DEFAULT_MAX_NODES = 10**8

# Packed column values must stay well inside int64; k^n above this is refused.
_UNIVERSE_LIMIT = 2**60


@dataclass(frozen=True)
class DerivationStep:
    """One application of the derivation rule.

    ``rho`` maps each target row to a 1-based source row; ``interps[i]`` maps
    source variable v (1-based) to the target variable ``interps[i][v-1]``.
    ``premises[l][i] == interps[i][M.left[l][rho[i]-1] - 1]`` and likewise for
    the conclusion from the right column; slots of ``interps`` that the
    derivation never used are fixed to 1.
    """

    rho: tuple[int, ...]
    interps: tuple[tuple[int, ...], ...]
    premises: tuple[Column, ...]
    conclusion: Column


@dataclass
class EngineStats:
    rounds: int = 0
    derived: int = 0
    csp_nodes: int = 0
    wall_time: float = 0.0


@dataclass
class ClosureState:
    """Saturated (or in-progress) set of derivable columns with traces."""

    universe: int                       # target variable count k
    columns: frozenset[Column]
    seeds: tuple[Column, ...]
    trace: dict[Column, DerivationStep] = field(default_factory=dict)
    frontier: tuple[Column, ...] = ()


@dataclass
class ImplicationVerdict:
    holds: bool
    certificate: tuple[DerivationStep, ...] | ClosureState
    stats: EngineStats


# ---------------------------------------------------------------------------
# Packing helpers


def pack_column(col: Column, k: int) -> int:
    p = 0
    for e in col:
        p = p * k + (e - 1)
    return p


def unpack_column(p: int, k: int, n: int) -> Column:
    digits = []
    for _ in range(n):
        digits.append(p % k)
        p //= k
    return tuple(d + 1 for d in reversed(digits))


def _source_arrays(m: Matrix) -> tuple[np.ndarray, np.ndarray]:
    ml = np.empty((m.n, m.m), dtype=np.int64)
    for l, col in enumerate(m.left):
        for r in range(m.n):
            ml[r, l] = col[r] - 1
    mr = np.array([e - 1 for e in m.right], dtype=np.int64)
    return ml, mr


def _check_limits(m: Matrix, n_tgt: int, k_tgt: int) -> None:
    if k_tgt**n_tgt > _UNIVERSE_LIMIT:
        raise ResourceLimitError(
            f"target column universe {k_tgt}^{n_tgt} exceeds the packing limit",
            phase="saturation", used=k_tgt**n_tgt, limit=_UNIVERSE_LIMIT)
    if m.n**n_tgt > _UNIVERSE_LIMIT:
        raise ResourceLimitError(
            f"row-selection space {m.n}^{n_tgt} exceeds the enumeration limit",
            phase="saturation", used=m.n**n_tgt, limit=_UNIVERSE_LIMIT)


def _decode_step(m: Matrix, rho_row: np.ndarray, f_row: np.ndarray,
                 conclusion: Column) -> DerivationStep:
    n_tgt = len(rho_row)
    rho = tuple(int(r) + 1 for r in rho_row)
    interps = tuple(
        tuple(int(f_row[i * m.k + v]) + 1 if f_row[i * m.k + v] >= 0 else 1
              for v in range(m.k))
        for i in range(n_tgt))
    premises = tuple(
        tuple(interps[i][m.left[l][rho[i] - 1] - 1] for i in range(n_tgt))
        for l in range(m.m))
    return DerivationStep(rho, interps, premises, conclusion)


# ---------------------------------------------------------------------------
# Saturation


def _saturate(m: Matrix, seeds: Iterable[Column], n_tgt: int, k_tgt: int, *,
              max_nodes: int, backend: str | None,
              early_target: Column | None) -> tuple[ClosureState, bool, EngineStats]:
    kern = get_kernels(backend)
    ml, mr = _source_arrays(m)
    _check_limits(m, n_tgt, k_tgt)
    seeds = tuple(seeds)
    for col in seeds:
        if len(col) != n_tgt:
            raise ShapeError(f"seed column of length {len(col)}, expected {n_tgt}")
        if any(not 1 <= e <= k_tgt for e in col):
            raise ShapeError(f"seed column {col} outside the variable alphabet 1..{k_tgt}")
    S = np.unique(np.array([pack_column(c, k_tgt) for c in seeds], dtype=np.int64)) \
        if seeds else np.empty(0, dtype=np.int64)
    early = np.int64(pack_column(early_target, k_tgt)) if early_target is not None \
        else np.int64(-1)

    stats = EngineStats()
    trace: dict[Column, DerivationStep] = {}
    budget = max_nodes
    frontier: tuple[Column, ...] = seeds
    hit = False
    t0 = time.perf_counter()
    while True:
        stats.rounds += 1
        cols, rhos, fs, nodes, status = kern.one_step_round(
            ml, mr, m.k, n_tgt, k_tgt, S, budget, early)
        stats.csp_nodes += int(nodes)
        budget -= int(nodes)
        if status == BUDGET_EXCEEDED:
            stats.wall_time = time.perf_counter() - t0
            raise ResourceLimitError(
                f"implication query exceeded the CSP node budget of {max_nodes}",
                phase="saturation", used=stats.csp_nodes, limit=max_nodes)
        new_cols = []
        for idx in range(len(cols)):
            col = unpack_column(int(cols[idx]), k_tgt, n_tgt)
            trace[col] = _decode_step(m, rhos[idx], fs[idx], col)
            new_cols.append(col)
        if new_cols:
            S = np.union1d(S, cols)
            frontier = tuple(new_cols)
        if status == EARLY_HIT:
            hit = True
            break
        if not new_cols:
            frontier = ()
            break
    stats.derived = len(trace)
    stats.wall_time = time.perf_counter() - t0
    columns = frozenset(unpack_column(int(p), k_tgt, n_tgt) for p in S)
    state = ClosureState(universe=k_tgt, columns=columns, seeds=seeds,
                         trace=trace, frontier=frontier)
    return state, hit, stats


def one_step(m: Matrix, state: ClosureState, *, max_nodes: int = DEFAULT_MAX_NODES,
             backend: str | None = None) -> frozenset[Column]:
    """Columns derivable from ``state.columns`` in one rule application,
    minus the columns already present."""
    m = validate(m)
    if not state.columns:
        raise ShapeError("one_step needs a non-empty column set")
    n_tgt = len(next(iter(state.columns)))
    kern = get_kernels(backend)
    ml, mr = _source_arrays(m)
    _check_limits(m, n_tgt, state.universe)
    S = np.unique(np.array([pack_column(c, state.universe) for c in state.columns],
                           dtype=np.int64))
    cols, _rhos, _fs, nodes, status = kern.one_step_round(
        ml, mr, m.k, n_tgt, state.universe, S, max_nodes, np.int64(-1))
    if status == BUDGET_EXCEEDED:
        raise ResourceLimitError(
            f"one_step exceeded the CSP node budget of {max_nodes}",
            phase="saturation", used=int(nodes), limit=max_nodes)
    return frozenset(unpack_column(int(p), state.universe, n_tgt) for p in cols)


def derive_closure(m: Matrix, n: Matrix, *, max_nodes: int = DEFAULT_MAX_NODES,
                   backend: str | None = None) -> ClosureState:
    """Least fixpoint of the derivation rule containing ``n``'s left columns."""
    m = validate(m)
    n = validate(n)
    state, _hit, _stats = _saturate(m, n.left, n.n, n.k, max_nodes=max_nodes,
                                    backend=backend, early_target=None)
    return state


def implies_lex(m: Matrix, n: Matrix, *, max_nodes: int = DEFAULT_MAX_NODES,
                backend: str | None = None) -> ImplicationVerdict:
    """Does the matrix property of ``m`` entail the matrix property of ``n``?

    Positive verdicts carry the derivation chain of ``n``'s right column;
    negative verdicts carry the saturated closure, which is closed under the
    rule and excludes the right column.
    """
    m = validate(m)
    n = validate(n)
    target = n.right
    if target in set(n.left):
        # The conclusion is already a premise; every property entails this one.
        return ImplicationVerdict(True, (), EngineStats())
    state, hit, stats = _saturate(m, n.left, n.n, n.k, max_nodes=max_nodes,
                                  backend=backend, early_target=target)
    if hit:
        chain = _extract_chain(state, target)
        return ImplicationVerdict(True, chain, stats)
    return ImplicationVerdict(False, state, stats)


def equivalent_lex(m: Matrix, n: Matrix, *, max_nodes: int = DEFAULT_MAX_NODES,
                   backend: str | None = None) -> bool:
    """Mutual lex-implication."""
    return (implies_lex(m, n, max_nodes=max_nodes, backend=backend).holds
            and implies_lex(n, m, max_nodes=max_nodes, backend=backend).holds)


def _extract_chain(state: ClosureState,
                   target: Column) -> tuple[DerivationStep, ...]:
    """The ancestors of ``target`` in the trace, in derivation order."""
    seeds = set(state.seeds)
    needed: set[Column] = set()
    stack = [target]
    while stack:
        col = stack.pop()
        if col in needed or col in seeds:
            continue
        needed.add(col)
        step = state.trace[col]
        stack.extend(step.premises)
    # trace preserves insertion (= derivation) order
    return tuple(step for col, step in state.trace.items() if col in needed)


# ---------------------------------------------------------------------------
# Certificate checking


def replay_step(m: Matrix, step: DerivationStep) -> None:
    """Recompute a step's premises and conclusion from (rho, interps)."""
    n_tgt = len(step.rho)
    for r in step.rho:
        if not 1 <= r <= m.n:
            raise CertificateError(f"rho entry {r} outside 1..{m.n}")
    if len(step.interps) != n_tgt or any(len(fi) != m.k for fi in step.interps):
        raise CertificateError("interpretation shape does not match the source matrix")
    premises = tuple(
        tuple(step.interps[i][m.left[l][step.rho[i] - 1] - 1] for i in range(n_tgt))
        for l in range(m.m))
    conclusion = tuple(
        step.interps[i][m.right[step.rho[i] - 1] - 1] for i in range(n_tgt))
    if premises != step.premises:
        raise CertificateError(f"premises do not replay: {premises} != {step.premises}")
    if conclusion != step.conclusion:
        raise CertificateError(f"conclusion does not replay: {conclusion} != {step.conclusion}")


def check_certificate(m: Matrix, n: Matrix, verdict: ImplicationVerdict, *,
                      max_nodes: int = DEFAULT_MAX_NODES,
                      backend: str | None = None) -> bool:
    """Audit a verdict independently of how it was produced.

    A positive certificate must replay step by step from ``n``'s left columns
    to its right column.  A negative certificate must contain the seeds,
    exclude the right column, and admit no new column in one rule application.
    Raises :class:`CertificateError` on any discrepancy.
    """
    m = validate(m)
    n = validate(n)
    if verdict.holds:
        chain = verdict.certificate
        if not isinstance(chain, tuple):
            raise CertificateError("positive verdict without a derivation chain")
        available = set(n.left)
        if not chain:
            if n.right not in available:
                raise CertificateError("empty chain but the right column is not a seed")
            return True
        for step in chain:
            replay_step(m, step)
            for prem in step.premises:
                if prem not in available:
                    raise CertificateError(f"premise {prem} used before derivation")
            available.add(step.conclusion)
        if chain[-1].conclusion != n.right:
            raise CertificateError("chain does not end at the right column")
        return True
    state = verdict.certificate
    if not isinstance(state, ClosureState):
        raise CertificateError("negative verdict without a closure certificate")
    if not set(n.left) <= state.columns:
        raise CertificateError("closure does not contain the seed columns")
    if n.right in state.columns:
        raise CertificateError("closure contains the right column despite a negative verdict")
    extra = one_step(m, state, max_nodes=max_nodes, backend=backend)
    if extra:
        raise CertificateError(f"closure is not closed: derivable {sorted(extra)[:3]} ...")
    return True
