"""Enumeration of canonical matrices in a shape class and the implication
poset of their classes.

Matrices are enumerated up to canonical form by walking left-column subsets
(duplicates never matter) times right columns.  Equivalence is always decided
by mutual implication through the engine -- the canonical form is only a
dedup pre-filter, since distinct canonical matrices can generate the same
class.  Pairwise queries are memoized and pruned by the two sound entailment
rules: positive chains entail positives (a=>b, b=>c gives a=>c), and a=>b
with a=/=>c entails b=/=>c.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .degeneracy import Degeneracy, degeneracy_class
from .engine import DEFAULT_MAX_NODES, implies_lex
from .errors import DomainError, ResourceLimitError
from .matrix import CanonicalMatrix, Matrix, canonicalize, render_matrix

DEFAULT_ENUM_CEILING = 10**6


@dataclass(frozen=True)
class PosetClass:
    representative: CanonicalMatrix
    members: tuple[CanonicalMatrix, ...]
    degenerate: str | None  # None, "trivial" or "anti-trivial"


@dataclass
class ImplicationPoset:
    classes: tuple[PosetClass, ...]
    leq: np.ndarray  # bool (C, C); leq[a, b] iff class a implies class b
    hasse_edges: tuple[tuple[int, int], ...]


def _mat_key(m: Matrix):
    return (m.n, m.m, m.k, m.right, m.left)


def enumerate_canonical(n: int, m: int, k: int, *,
                        ceiling: int = DEFAULT_ENUM_CEILING) -> list[CanonicalMatrix]:
    """Every canonical form arising from the shape class (n rows, m left
    columns, entries in x1..xk), each exactly once, in sorted order.

    Left-column multisets collapse to subsets of the k^n possible columns of
    height n, so the raw stream is (sum over sizes <= m of C(k^n, s)) * k^n
    candidates before symmetry reduction.  Raises
    :class:`ResourceLimitError` when that exceeds ``ceiling``.
    """
    if n < 1 or k < 1 or m < 0:
        raise DomainError(f"shape class needs n,k >= 1 and m >= 0, got ({n},{m},{k})")
    universe = k**n
    sizes = range(1, min(m, universe) + 1) if m > 0 else (0,)
    raw = sum(math.comb(universe, s) for s in sizes) * universe
    if raw > ceiling:
        raise ResourceLimitError(
            f"enumeration of shape ({n},{m},{k}) needs {raw} candidates, "
            f"over the ceiling {ceiling}", phase="enumeration",
            used=raw, limit=ceiling)
    all_cols = list(itertools.product(range(1, k + 1), repeat=n))
    seen: set[CanonicalMatrix] = set()
    for s in sizes:
        for subset in itertools.combinations(all_cols, s):
            for right in all_cols:
                cand = Matrix(tuple(subset), right, k)
                seen.add(canonicalize(cand))
    return sorted(seen, key=_mat_key)


class _QueryLayer:
    """Memoized implication queries with transitivity pruning."""

    def __init__(self, *, backend, max_nodes, memo=None):
        self.backend = backend
        self.max_nodes = max_nodes
        self.memo: dict[tuple[Matrix, Matrix], bool] = memo if memo is not None else {}
        self.pos: dict[Matrix, set[Matrix]] = {}      # transitively closed
        self.pos_inv: dict[Matrix, set[Matrix]] = {}
        self.neg: dict[Matrix, set[Matrix]] = {}
        self.engine_calls = 0
        for (a, b), v in list(self.memo.items()):
            self._record(a, b, v)

    def _record(self, a: Matrix, b: Matrix, v: bool) -> None:
        self.memo[(a, b)] = v
        if v:
            succs = {b} | self.pos.get(b, set())
            preds = {a} | self.pos_inv.get(a, set())
            for x in preds:
                known = self.pos.setdefault(x, set())
                for y in succs:
                    if y is not x and y != x:
                        known.add(y)
                        self.pos_inv.setdefault(y, set()).add(x)
        else:
            self.neg.setdefault(a, set()).add(b)

    def _entailed(self, a: Matrix, b: Matrix) -> bool | None:
        if b in self.pos.get(a, ()):
            return True
        if b in self.neg.get(a, ()):
            return False
        # a=>b unknown; x=>a with x=/=>b forces a=/=>b
        for x in self.pos_inv.get(a, ()):
            if b in self.neg.get(x, ()):
                return False
        return None

    def query(self, a: Matrix, b: Matrix) -> bool:
        if a == b:
            return True
        hit = self.memo.get((a, b))
        if hit is not None:
            return hit
        ent = self._entailed(a, b)
        if ent is not None:
            self.memo[(a, b)] = ent
            return ent
        self.engine_calls += 1
        try:
            v = implies_lex(a, b, max_nodes=self.max_nodes,
                            backend=self.backend).holds
        except ResourceLimitError as exc:
            exc.context = (a, b)
            raise
        self._record(a, b, v)
        return v

    def prefetch(self, pairs: list[tuple[Matrix, Matrix]], workers: int) -> None:
        """Resolve engine verdicts for unresolved pairs in parallel.

        Verdicts are pure functions of the pair, so the merge order does not
        change any result; it only changes which later queries the pruning
        can skip.
        """
        todo = [(a, b) for a, b in pairs
                if a != b and (a, b) not in self.memo and self._entailed(a, b) is None]
        if not todo or workers <= 1:
            return
        def run(pair):
            a, b = pair
            return implies_lex(a, b, max_nodes=self.max_nodes,
                               backend=self.backend).holds
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, todo))
        self.engine_calls += len(todo)
        for (a, b), v in zip(todo, results):
            if (a, b) not in self.memo:
                self._record(a, b, v)


def build_poset(matrices, *, backend: str | None = None,
                max_nodes: int = DEFAULT_MAX_NODES,
                memo: dict | None = None,
                workers: int | None = None) -> ImplicationPoset:
    """Quotient the given canonical matrices by mutual implication and order
    the classes by implication.

    Deterministic regardless of input order and worker count: matrices are
    sorted first, representatives are the least members, and all verdicts are
    pure functions of the pairs.
    """
    mats = sorted(set(matrices), key=_mat_key)
    layer = _QueryLayer(backend=backend, max_nodes=max_nodes, memo=memo)
    workers = workers if workers is not None else 1

    groups: list[list[Matrix]] = []
    for mx in mats:
        if workers > 1:
            layer.prefetch([(mx, g[0]) for g in groups], workers)
        placed = False
        for g in groups:
            rep = g[0]
            if layer.query(mx, rep) and layer.query(rep, mx):
                g.append(mx)
                placed = True
                break
        if not placed:
            groups.append([mx])

    reps = [g[0] for g in groups]
    c = len(reps)
    leq = np.eye(c, dtype=np.bool_)
    for a in range(c):
        if workers > 1:
            layer.prefetch([(reps[a], reps[b]) for b in range(c) if b != a], workers)
        for b in range(c):
            if a != b:
                leq[a, b] = layer.query(reps[a], reps[b])
    for a in range(c):
        for b in range(a + 1, c):
            if leq[a, b] and leq[b, a]:
                raise AssertionError(
                    "mutually implying representatives survived grouping")

    classes = []
    for g in groups:
        verdict = degeneracy_class(g[0])
        flag = {Degeneracy.TRIVIAL: "trivial",
                Degeneracy.ANTI_TRIVIAL: "anti-trivial",
                Degeneracy.NON_DEGENERATE: None}[verdict.tag]
        classes.append(PosetClass(g[0], tuple(g), flag))
    edges = hasse(leq)
    return ImplicationPoset(tuple(classes), leq, edges)


def hasse(leq: np.ndarray | ImplicationPoset) -> tuple[tuple[int, int], ...]:
    """Covering pairs (a, b) of the order: a < b with nothing strictly between."""
    if isinstance(leq, ImplicationPoset):
        leq = leq.leq
    c = leq.shape[0]
    edges = []
    for a in range(c):
        for b in range(c):
            if a == b or not leq[a, b]:
                continue
            if any(leq[a, x] and leq[x, b] for x in range(c) if x != a and x != b):
                continue
            edges.append((a, b))
    return tuple(sorted(edges))


def subposet(p: ImplicationPoset, keep) -> ImplicationPoset:
    """Restriction to the classes selected by ``keep`` (indices or predicate),
    with the cover relation recomputed on the restriction."""
    if callable(keep):
        idx = [i for i, cls in enumerate(p.classes) if keep(cls)]
    else:
        idx = sorted(keep)
    leq = p.leq[np.ix_(idx, idx)].copy()
    classes = tuple(p.classes[i] for i in idx)
    return ImplicationPoset(classes, leq, hasse(leq))


def nondegenerate(p: ImplicationPoset) -> ImplicationPoset:
    return subposet(p, lambda cls: cls.degenerate is None)


def minima(p: ImplicationPoset) -> list[int]:
    """Indices of minimal classes (nothing below them)."""
    c = p.leq.shape[0]
    return [b for b in range(c)
            if not any(p.leq[a, b] for a in range(c) if a != b)]


def poset_to_dict(p: ImplicationPoset) -> dict:
    classes = []
    for i, cls in enumerate(p.classes):
        classes.append({
            "id": i,
            "representative": render_matrix(cls.representative),
            "rows": cls.representative.n,
            "members": len(cls.members),
            "degenerate": cls.degenerate,
        })
    leq_pairs = [[a, b] for a in range(len(p.classes))
                 for b in range(len(p.classes)) if a != b and bool(p.leq[a, b])]
    return {
        "classes": classes,
        "leq": leq_pairs,
        "hasse": [list(e) for e in p.hasse_edges],
    }


def emit_dot(p: ImplicationPoset, *, nondegenerate_only: bool = False) -> str:
    """Deterministic DOT text; an edge a -> b means class a implies class b."""
    q = nondegenerate(p) if nondegenerate_only else p
    lines = [
        "digraph implication_poset {",
        "  rankdir=LR;",
        '  node [shape=box fontname="Courier"];',
    ]
    for i, cls in enumerate(q.classes):
        label = render_matrix(cls.representative).replace("\n", "\\l") + "\\l"
        lines.append(f'  c{i} [label="{label}"];')
    for a, b in q.hasse_edges:
        lines.append(f"  c{a} -> c{b};")
    lines.append("}")
    return "\n".join(lines)
