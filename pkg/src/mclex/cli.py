"""Command-line interface.

Exit codes: 0 for positive/successful verdicts, 1 for definite negative
verdicts, 2 for resource limits, input problems and usage errors -- "fails"
and "could not decide" are never conflated.  Every flag with a MCLEX_*
environment variable counterpart uses the variable as its default.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .classify import classify_regular
from .degeneracy import Degeneracy, degeneracy_class
from .engine import DEFAULT_MAX_NODES, ClosureState, implies_lex
from .errors import MclexError, ResourceLimitError
from .finite_models import DEFAULT_INTERP_CAP, interp_closed, parse_relation
from .matrix import (gen_named, pair_projection_matrix, parse_matrix,
                     render_matrix)
from .poset import (DEFAULT_ENUM_CEILING, build_poset, emit_dot,
                    enumerate_canonical, nondegenerate, poset_to_dict)

_EXIT_OK = 0
_EXIT_NEGATIVE = 1
_EXIT_ERROR = 2


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(f"MCLEX_{name}")
    return int(raw) if raw else fallback


def _env_str(name: str, fallback: str | None) -> str | None:
    return os.environ.get(f"MCLEX_{name}", fallback)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="mclex",
        description="Matrix properties of finitely complete categories: "
                    "generators, degeneracy, lex-implication, regular-context "
                    "classification, relation checks and implication posets.")
    top.add_argument("--version", action="version", version=f"mclex {__version__}")
    top.add_argument("--backend", choices=("auto", "numba", "python"),
                     default=_env_str("BACKEND", "auto"),
                     help="kernel backend (env MCLEX_BACKEND)")
    top.add_argument("--max-nodes", type=int,
                     default=_env_int("MAX_NODES", DEFAULT_MAX_NODES),
                     help="CSP node budget per implication query (env MCLEX_MAX_NODES)")
    top.add_argument("--workers", type=int,
                     default=_env_int("WORKERS", os.cpu_count() or 1),
                     help="worker threads for independent queries (env MCLEX_WORKERS)")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="print a named matrix")
    p.add_argument("name", help="mal | maj | ari | mn")
    p.add_argument("n", nargs="?", type=int, help="row count for mn")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("implies", help="decide lex-implication between two matrix files")
    p.add_argument("source", type=Path)
    p.add_argument("target", type=Path)
    p.add_argument("--no-certificate", action="store_true",
                   help="omit the certificate from the JSON output")

    p = sub.add_parser("classify", help="degeneracy or regular-context class of a matrix")
    p.add_argument("matrix", type=Path)
    p.add_argument("--regular", action="store_true",
                   help="regular-context classification instead of degeneracy")

    p = sub.add_parser("bool-term", help="Boolean compatible-term witness search")
    p.add_argument("matrix", type=Path)

    p = sub.add_parser("check-relation", help="strict closedness of a finite relation")
    p.add_argument("relation", type=Path)
    p.add_argument("matrix", type=Path)
    p.add_argument("--interp-cap", type=int,
                   default=_env_int("INTERP_CAP", DEFAULT_INTERP_CAP),
                   help="interpretation scan cap (env MCLEX_INTERP_CAP)")

    p = sub.add_parser("poset", help="implication poset of a shape class")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--nondegenerate-only", action="store_true")
    p.add_argument("--dot", type=Path, help="write a DOT rendering here")
    p.add_argument("--json", type=Path, help="write the full poset JSON here")
    p.add_argument("--cache", type=Path, default=_env_str("CACHE", None),
                   help="JSON file of memoized pair verdicts (env MCLEX_CACHE)")
    p.add_argument("--enum-ceiling", type=int,
                   default=_env_int("ENUM_CEILING", DEFAULT_ENUM_CEILING),
                   help="raw enumeration ceiling (env MCLEX_ENUM_CEILING)")
    return top


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2))


def _backend(args) -> str | None:
    return None if args.backend == "auto" else args.backend


def _read_matrix(path: Path):
    return parse_matrix(path.read_text())


def _step_dict(step) -> dict:
    return {
        "rho": list(step.rho),
        "interps": [list(fi) for fi in step.interps],
        "premises": [list(c) for c in step.premises],
        "conclusion": list(step.conclusion),
    }


def _cmd_gen(args) -> int:
    if args.name.lower() == "mn":
        if args.n is None:
            print("gen mn requires a row count", file=sys.stderr)
            return _EXIT_ERROR
        mat = pair_projection_matrix(args.n)
    else:
        mat = gen_named(args.name)
    print(render_matrix(mat, args.format))
    return _EXIT_OK


def _cmd_implies(args) -> int:
    src = _read_matrix(args.source)
    tgt = _read_matrix(args.target)
    verdict = implies_lex(src, tgt, max_nodes=args.max_nodes,
                          backend=_backend(args))
    out = {
        "holds": verdict.holds,
        "stats": {
            "rounds": verdict.stats.rounds,
            "derived": verdict.stats.derived,
            "csp_nodes": verdict.stats.csp_nodes,
            "wall_time_s": round(verdict.stats.wall_time, 6),
        },
    }
    if not args.no_certificate:
        if verdict.holds:
            out["certificate"] = {"steps": [_step_dict(s) for s in verdict.certificate]}
        else:
            state = verdict.certificate
            assert isinstance(state, ClosureState)
            out["certificate"] = {
                "closure": sorted(list(c) for c in state.columns),
                "seeds": sorted(list(c) for c in set(state.seeds)),
            }
    _emit(out)
    return _EXIT_OK if verdict.holds else _EXIT_NEGATIVE


def _cmd_classify(args) -> int:
    mat = _read_matrix(args.matrix)
    if args.regular:
        res = classify_regular(mat)
        out = {"tag": res.tag.value}
        if res.witness_pair is not None:
            out["evidence"] = {
                "witness_pair": list(res.witness_pair),
                "witness_matrix": render_matrix(res.witness_matrix),
            }
        elif res.checked_pairs is not None:
            out["evidence"] = {"checked_pairs": [list(p) for p in res.checked_pairs]}
        else:
            out["evidence"] = None
        _emit(out)
        return _EXIT_OK
    verdict = degeneracy_class(mat)
    out = {
        "tag": verdict.tag.value,
        "witness": verdict.witness.to_hex() if verdict.witness else None,
        "conflict": None,
    }
    if verdict.conflict:
        out["conflict"] = [
            {"assignment": list(c.assignment), "row": c.row,
             "inputs": list(c.inputs), "output": c.output}
            for c in verdict.conflict
        ]
    _emit(out)
    return _EXIT_OK


def _cmd_bool_term(args) -> int:
    from .degeneracy import _term_search
    mat = _read_matrix(args.matrix)
    table, conflict = _term_search(mat)
    if table is not None:
        _emit({"witness": {"arity": table.arity, "bits_hex": table.to_hex(),
                           "constrained_hex": table.constrained_hex()}})
        return _EXIT_OK
    _emit({"witness": None, "conflict": [
        {"assignment": list(c.assignment), "row": c.row,
         "inputs": list(c.inputs), "output": c.output}
        for c in conflict
    ]})
    return _EXIT_NEGATIVE


def _cmd_check_relation(args) -> int:
    rel = parse_relation(args.relation.read_text())
    mat = _read_matrix(args.matrix)
    report = interp_closed(rel, mat, cap=args.interp_cap, backend=_backend(args))
    out = {"closed": report.closed, "scanned": report.scanned}
    if not report.closed:
        out["counterexample"] = {
            "interpretations": [list(fi) for fi in report.interpretations],
            "violation": list(report.violation),
        }
    _emit(out)
    return _EXIT_OK if report.closed else _EXIT_NEGATIVE


def _load_cache(path: Path | None) -> tuple[dict, dict]:
    """Memoized verdicts keyed by rendered matrix pairs."""
    raw = {}
    if path is not None and Path(path).exists():
        raw = json.loads(Path(path).read_text())
    memo = {}
    for key, val in raw.items():
        a_text, b_text = key.split(" => ")
        memo[(parse_matrix(a_text.replace(";", "\n")),
              parse_matrix(b_text.replace(";", "\n")))] = bool(val)
    return memo, raw


def _save_cache(path: Path, memo: dict) -> None:
    raw = {}
    for (a, b), v in memo.items():
        key = (render_matrix(a).replace("\n", ";") + " => "
               + render_matrix(b).replace("\n", ";"))
        raw[key] = v
    Path(path).write_text(json.dumps(raw, sort_keys=True))


def _cmd_poset(args) -> int:
    memo, _ = _load_cache(args.cache)
    mats = enumerate_canonical(args.n, args.m, args.k, ceiling=args.enum_ceiling)
    poset = build_poset(mats, backend=_backend(args), max_nodes=args.max_nodes,
                        memo=memo, workers=args.workers)
    if args.cache is not None:
        _save_cache(args.cache, memo)
    shown = nondegenerate(poset) if args.nondegenerate_only else poset
    if args.dot is not None:
        args.dot.write_text(emit_dot(poset, nondegenerate_only=args.nondegenerate_only) + "\n")
    if args.json is not None:
        args.json.write_text(json.dumps(poset_to_dict(shown), sort_keys=True, indent=2) + "\n")
    summary = poset_to_dict(shown)
    _emit({
        "shape": [args.n, args.m, args.k],
        "canonical_matrices": len(mats),
        "classes": len(shown.classes),
        "hasse_edges": summary["hasse"],
    })
    return _EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen,
    "implies": _cmd_implies,
    "classify": _cmd_classify,
    "bool-term": _cmd_bool_term,
    "check-relation": _cmd_check_relation,
    "poset": _cmd_poset,
}


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and _EXIT_ERROR
    try:
        return _COMMANDS[args.command](args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc} (phase={exc.phase}, used={exc.used}, "
              f"limit={exc.limit})", file=sys.stderr)
        return _EXIT_ERROR
    except (MclexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_ERROR


def main() -> None:
    sys.exit(run())
