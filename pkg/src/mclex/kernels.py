"""Hot numeric kernels, compiled twice: a numba fast path and a pure twin.

The two inner loops that dominate runtime live here:

* ``one_step_round`` -- one saturation round of the derivation rule behind
  lex-implication queries.  For every row-selection map and every row-wise
  interpretation whose interpreted left columns all lie in the current column
  set, the interpreted right column is a conclusion.  Columns are packed as
  base-k integers (big-endian in the row index) and kept sorted, so the
  backtracking search can reject a partial choice by a prefix range lookup
  instead of enumerating interpretation tuples blindly.

* ``interp_scan`` -- exhaustive closedness check of a finite relation under a
  matrix, scanning all row-wise interpretations in lexicographic order.

Both are written against plain numpy arrays and integer arithmetic only, so
the exact same source compiles under ``numba.njit`` and also runs unmodified
as interpreted Python.  Backend selection: explicit argument, else the
``MCLEX_BACKEND`` environment variable (``numba`` | ``python`` | ``auto``),
else auto-detection.  Both paths produce bit-identical results; the test
suite checks that, and ``bench/benchmark.py`` compares their speed.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

# Status codes shared by the kernels and their wrappers.
OK = 0
EARLY_HIT = 1
BUDGET_EXCEEDED = 2


def _build(jit):
    """Compile the kernel set under ``jit`` (numba.njit or identity)."""

    @jit
    def collect(ml, rho, f, lvl, S, powk, n_tgt, k_tgt, out):
        # Indices into sorted S of the columns compatible with the partial
        # interpretation f on premise column `lvl`, ascending.  Walks digits
        # row by row, narrowing to the S entries whose packed prefix matches;
        # a row whose interpretation value is already fixed contributes a
        # single forced digit.
        nS = S.shape[0]
        if nS == 0:
            return 0
        cnt = 0
        pref = np.zeros(n_tgt + 1, np.int64)
        nxt = np.zeros(n_tgt, np.int64)
        r = 0
        nxt[0] = 0
        while r >= 0:
            if r == n_tgt:
                out[cnt] = np.searchsorted(S, pref[n_tgt])
                cnt += 1
                r -= 1
                continue
            v = ml[rho[r], lvl]
            fd = f[r, v]
            w = powk[n_tgt - 1 - r]
            moved = False
            if fd >= 0:
                if nxt[r] == 0:
                    nxt[r] = k_tgt
                    p = pref[r] * k_tgt + fd
                    lo = np.searchsorted(S, p * w)
                    if lo < nS and S[lo] < (p + 1) * w:
                        pref[r + 1] = p
                        r += 1
                        if r < n_tgt:
                            nxt[r] = 0
                        moved = True
            else:
                d = nxt[r]
                hit = np.int64(-1)
                while d < k_tgt:
                    p = pref[r] * k_tgt + d
                    lo = np.searchsorted(S, p * w)
                    if lo < nS and S[lo] < (p + 1) * w:
                        hit = p
                        break
                    d += 1
                if hit >= 0:
                    nxt[r] = d + 1
                    pref[r + 1] = hit
                    r += 1
                    if r < n_tgt:
                        nxt[r] = 0
                    moved = True
                else:
                    nxt[r] = k_tgt
            if not moved:
                r -= 1
        return cnt

    @jit
    def _emit(f, rho, mr, k_src, n_tgt, k_tgt, S,
              out_col, out_rho, out_f, out_sorted, n_out, nodes, budget, early):
        # Emit every conclusion reachable from the current full premise
        # assignment.  Rows whose right-entry variable is unconstrained are
        # expanded over all k_tgt values (ascending, last row fastest).
        status = OK
        free_idx = np.empty(n_tgt, np.int64)
        nfree = 0
        for i in range(n_tgt):
            if f[i, mr[rho[i]]] < 0:
                free_idx[nfree] = i
                nfree += 1
        dig = np.zeros(max(nfree, 1), np.int64)
        while True:
            nodes += 1
            if nodes > budget:
                status = BUDGET_EXCEEDED
                break
            p = np.int64(0)
            t = 0
            for i in range(n_tgt):
                v = mr[rho[i]]
                if f[i, v] >= 0:
                    d = np.int64(f[i, v])
                else:
                    d = dig[t]
                    t += 1
                p = p * k_tgt + d
            j = np.searchsorted(S, p)
            if not (j < S.shape[0] and S[j] == p):
                j2 = np.searchsorted(out_sorted[:n_out], p)
                if j2 >= n_out or out_sorted[j2] != p:
                    cap = out_col.shape[0]
                    if n_out == cap:
                        nc = cap * 2
                        t1 = np.empty(nc, np.int64)
                        t1[:cap] = out_col
                        out_col = t1
                        t2 = np.empty(nc, np.int64)
                        t2[:cap] = out_sorted
                        out_sorted = t2
                        t3 = np.empty((nc, n_tgt), np.int64)
                        t3[:cap] = out_rho
                        out_rho = t3
                        t4 = np.empty((nc, n_tgt * k_src), np.int64)
                        t4[:cap] = out_f
                        out_f = t4
                    for q in range(n_out, j2, -1):
                        out_sorted[q] = out_sorted[q - 1]
                    out_sorted[j2] = p
                    out_col[n_out] = p
                    for i in range(n_tgt):
                        out_rho[n_out, i] = rho[i]
                        for v in range(k_src):
                            out_f[n_out, i * k_src + v] = f[i, v]
                    t = 0
                    for q in range(nfree):
                        i = free_idx[q]
                        out_f[n_out, i * k_src + mr[rho[i]]] = dig[t]
                        t += 1
                    n_out += 1
                    if p == early:
                        status = EARLY_HIT
                        break
            if nfree == 0:
                break
            pos = nfree - 1
            while pos >= 0:
                dig[pos] += 1
                if dig[pos] < k_tgt:
                    break
                dig[pos] = 0
                pos -= 1
            if pos < 0:
                break
        return out_col, out_rho, out_f, out_sorted, n_out, nodes, status

    @jit
    def one_step_round(ml, mr, k_src, n_tgt, k_tgt, S, budget, early):
        """All conclusions derivable in one step from the sorted packed set S.

        Returns (cols, rhos, fs, nodes, status): new packed columns in first-
        derivation order, the row-selection map and flattened interpretation
        of the first derivation of each, nodes consumed, and a status code.
        Deterministic: row-selection maps are scanned row-major, candidate
        premise columns and free values ascending.
        """
        n_src, m_src = ml.shape
        nS = S.shape[0]
        powk = np.ones(n_tgt + 1, np.int64)
        for e in range(1, n_tgt + 1):
            powk[e] = powk[e - 1] * k_tgt

        cap0 = 64
        out_col = np.empty(cap0, np.int64)
        out_sorted = np.empty(cap0, np.int64)
        out_rho = np.empty((cap0, n_tgt), np.int64)
        out_f = np.empty((cap0, n_tgt * k_src), np.int64)
        n_out = 0
        nodes = np.int64(0)
        status = OK

        f = np.full((n_tgt, k_src), -1, np.int64)
        rho = np.zeros(n_tgt, np.int64)
        mwidth = max(m_src, 1)
        cand = np.empty((mwidth, max(nS, 1)), np.int64)
        cand_n = np.zeros(mwidth, np.int64)
        cand_i = np.zeros(mwidth, np.int64)
        newrows = np.empty((mwidth, n_tgt), np.int64)
        newcnt = np.zeros(mwidth, np.int64)

        total_rho = np.int64(1)
        for _ in range(n_tgt):
            total_rho *= n_src

        for rc in range(total_rho):
            nodes += 1
            if nodes > budget:
                status = BUDGET_EXCEEDED
                break
            t = rc
            for i in range(n_tgt - 1, -1, -1):
                rho[i] = t % n_src
                t //= n_src
            if m_src == 0:
                out_col, out_rho, out_f, out_sorted, n_out, nodes, status = _emit(
                    f, rho, mr, k_src, n_tgt, k_tgt, S,
                    out_col, out_rho, out_f, out_sorted, n_out, nodes, budget, early)
                if status != OK:
                    break
                continue
            lvl = 0
            cand_n[0] = collect(ml, rho, f, 0, S, powk, n_tgt, k_tgt, cand[0])
            cand_i[0] = 0
            while lvl >= 0:
                if cand_i[lvl] < cand_n[lvl]:
                    sidx = cand[lvl, cand_i[lvl]]
                    cand_i[lvl] += 1
                    nodes += 1
                    if nodes > budget:
                        status = BUDGET_EXCEEDED
                        break
                    packed = S[sidx]
                    cnt = 0
                    for i in range(n_tgt):
                        v = ml[rho[i], lvl]
                        d = (packed // powk[n_tgt - 1 - i]) % k_tgt
                        if f[i, v] < 0:
                            f[i, v] = d
                            newrows[lvl, cnt] = i
                            cnt += 1
                    newcnt[lvl] = cnt
                    if lvl + 1 == m_src:
                        out_col, out_rho, out_f, out_sorted, n_out, nodes, status = _emit(
                            f, rho, mr, k_src, n_tgt, k_tgt, S,
                            out_col, out_rho, out_f, out_sorted, n_out, nodes, budget, early)
                        for q in range(cnt):
                            i = newrows[lvl, q]
                            f[i, ml[rho[i], lvl]] = -1
                        if status != OK:
                            break
                    else:
                        lvl += 1
                        cand_n[lvl] = collect(ml, rho, f, lvl, S, powk, n_tgt, k_tgt, cand[lvl])
                        cand_i[lvl] = 0
                else:
                    lvl -= 1
                    if lvl >= 0:
                        for q in range(newcnt[lvl]):
                            i = newrows[lvl, q]
                            f[i, ml[rho[i], lvl]] = -1
            if status != OK:
                break
        return (out_col[:n_out].copy(), out_rho[:n_out].copy(),
                out_f[:n_out].copy(), nodes, status)

    @jit
    def interp_scan(ml, mr, k_src, sizes, mult, rel, budget):
        """Exhaustively check strict closedness of a packed finite relation.

        ``rel`` is a boolean membership table over the mixed-radix-packed
        tuple space (row 0 most significant, multiplier ``mult``).  Scans all
        row-wise interpretations as an odometer over (row, variable) slots,
        last slot fastest, values ascending; returns the first interpretation
        whose premises all lie in the relation but whose conclusion does not.
        Returns (status, f_flat, bad_packed, scanned).
        """
        n, m = ml.shape
        f = np.zeros((n, k_src), np.int64)
        f_out = np.zeros(n * k_src, np.int64)
        scanned = np.int64(0)
        while True:
            scanned += 1
            if scanned > budget:
                return BUDGET_EXCEEDED, f_out, np.int64(-1), scanned
            ok = True
            for l in range(m):
                p = np.int64(0)
                for i in range(n):
                    p += f[i, ml[i, l]] * mult[i]
                if not rel[p]:
                    ok = False
                    break
            if ok:
                p = np.int64(0)
                for i in range(n):
                    p += f[i, mr[i]] * mult[i]
                if not rel[p]:
                    for i in range(n):
                        for v in range(k_src):
                            f_out[i * k_src + v] = f[i, v]
                    return EARLY_HIT, f_out, p, scanned
            pos = n * k_src - 1
            while pos >= 0:
                i = pos // k_src
                v = pos % k_src
                f[i, v] += 1
                if f[i, v] < sizes[i]:
                    break
                f[i, v] = 0
                pos -= 1
            if pos < 0:
                return OK, f_out, np.int64(-1), scanned

    return SimpleNamespace(
        collect=collect,
        one_step_round=one_step_round,
        interp_scan=interp_scan,
    )


_CACHE: dict[str, SimpleNamespace] = {}


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def available_backends() -> list[str]:
    names = ["python"]
    if numba_available():
        names.append("numba")
    return names


def resolve_backend(name: str | None = None) -> str:
    """Resolve a backend name: argument, then MCLEX_BACKEND, then auto."""
    if name is None:
        name = os.environ.get("MCLEX_BACKEND", "auto")
    name = name.lower()
    if name == "auto":
        return "numba" if numba_available() else "python"
    if name not in ("numba", "python"):
        raise ValueError(f"unknown backend {name!r}; expected numba, python or auto")
    if name == "numba" and not numba_available():
        raise RuntimeError("numba backend requested but numba is not importable")
    return name


def get_kernels(name: str | None = None) -> SimpleNamespace:
    name = resolve_backend(name)
    ns = _CACHE.get(name)
    if ns is None:
        if name == "numba":
            import numba
            ns = _build(numba.njit(cache=False, nogil=True))
        else:
            ns = _build(lambda fn: fn)
        ns.name = name
        _CACHE[name] = ns
    return ns
