"""Command line entry point: ``repst <command> ...``.

Results go to stdout as deterministic JSON wrapped in a run manifest.  Wall
time is written to stderr only, so reruns give byte-identical stdout.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from math import factorial
from pathlib import Path
from typing import Any, Optional

from . import __version__
from .algebras import AlgebraObject, build_induced_algebra, certify_simple, check_axioms
from .config import LIMITS
from .diagrams import Morphism, closure_trace, compose
from .errors import BoundaryMismatch, DeciderDisagreement, LimitExceeded, NotASubgroup, PreconditionError
from .fiber import specialize_algebra
from .scalars import format_scalar, scalar_to_json
from .selftest import CRITERIA, run_suite
from .symgroup import (
    alternating_group,
    coset_algebra,
    group_from_string,
    is_simple_equivariant,
    match_fiber_algebra,
    sign_multiplicity,
    subgroups_up_to_conjugacy,
    symmetric_group,
    verify_contains_times,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def _subgroup(text: str, k: int):
    try:
        return group_from_string(text, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# commands ------------------------------------------------------------------------------------
# each returns (result, passed)

def cmd_compose(args) -> tuple[dict, bool]:
    lhs = Morphism.from_json(_read_json(args.lhs))
    rhs = Morphism.from_json(_read_json(args.rhs))
    return {"result": compose(lhs, rhs).to_json()}, True


def cmd_dim_poly(args) -> tuple[dict, bool]:
    H = _subgroup(args.subgroup, args.k)
    poly = closure_trace(build_induced_algebra(args.k, H).idem)
    return {"k": args.k, "subgroup": H.generator_string(), "order": H.order,
            "poly": format_scalar(poly), "poly_json": scalar_to_json(poly)}, True


def cmd_build_algebra(args) -> tuple[dict, bool]:
    H = _subgroup(args.subgroup, args.k)
    A = build_induced_algebra(args.k, H)
    data = A.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(data, sort_keys=True, indent=1) + "\n")
    return {"k": args.k, "subgroup": H.generator_string(), "out": args.out,
            "mult_terms": len(A.mult), "idem_terms": len(A.idem),
            "algebra": None if args.out else data}, True


def cmd_check_algebra(args) -> tuple[dict, bool]:
    A = AlgebraObject.from_json(_read_json(args.algebra))
    laws = check_axioms(A)
    result = {"laws": [r.to_json() for r in laws]}
    passed = all(r.holds for r in laws)
    if passed:
        verdict = certify_simple(A)
        body = verdict.to_json()
        if body["pairing"] is not None:
            body["pairing"].pop("inverse")  # large; the verdict already records it was re-verified
        result.update(body)
        passed = verdict.verdict != "inconclusive"
    return result, passed


def _classify_one(job: tuple[int, tuple, int]) -> dict:
    n, gens, seed = job
    H = group_from_string(gens, n)
    rep = is_simple_equivariant(coset_algebra(n, H), random.Random(seed))
    return {"order": H.order, "generators": H.generator_string(), "index": factorial(n) // H.order,
            **rep.to_json()}


def _pool_map(fn, jobs: list, workers: int) -> list:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


def cmd_classify(args) -> tuple[dict, bool]:
    classes = subgroups_up_to_conjugacy(args.n)
    rows = _pool_map(_classify_one, [(args.n, H.generator_string(), args.seed) for H in classes], args.jobs)
    return {"n": args.n, "classes": len(rows), "rows": rows}, all(r["simple"] for r in rows)


def cmd_contains_times(args) -> tuple[dict, bool]:
    rep = verify_contains_times(args.n, args.k)
    return rep, rep["status"] == "pass"


def cmd_sign_obstruction(args) -> tuple[dict, bool]:
    n = args.n
    An = alternating_group(n)
    rows = []
    for H in subgroups_up_to_conjugacy(n):
        inside = H <= An
        m = sign_multiplicity(n, H)
        rows.append({"order": H.order, "generators": H.generator_string(), "in_alternating": inside,
                     "sign_multiplicity": m, "ok": m >= 1 if inside else True})
    stab = sign_multiplicity(n, symmetric_group(n - 1, degree=n)) if n >= 3 else None
    passed = all(r["ok"] for r in rows) and not stab
    return {"status": "pass" if passed else "fail", "n": n, "rows": rows,
            "point_stabiliser_multiplicity": stab}, passed


def cmd_fiber(args) -> tuple[dict, bool]:
    A = AlgebraObject.from_json(_read_json(args.algebra))
    fiber = specialize_algebra(A, args.n)
    result = {"n": args.n, "dim": fiber.dim, "law_failures": fiber.check_laws()}
    passed = not result["law_failures"]
    if args.match:
        if A.subgroup is None:
            raise UsageError("--match needs an algebra file that records its subgroup")
        images = match_fiber_algebra(fiber, args.n, A.k, A.subgroup, random.Random(args.seed))
        result["matched"] = images is not None
        if images is not None:
            result["isomorphism"] = [{str(i): str(c) for i, c in sorted(v.items())} for v in images]
        passed = passed and images is not None
    return result, passed


def cmd_selftest(args) -> tuple[dict, bool]:
    results, timings = run_suite(seed=args.seed, jobs=args.jobs, only=args.only)
    for r in results:
        mark = "PASS" if r["passed"] else "FAIL"
        print(f"criterion {r['criterion']:>2} {mark} ({timings.get(r['criterion'], 0.0):.1f}s) {r['name']}",
              file=sys.stderr)
    return {"criteria": results}, all(r["passed"] for r in results)


# argument parsing ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized searches (default 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent cases")
    common.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")

    parser = argparse.ArgumentParser(prog="repst", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compose", parents=[common], help="compose two morphism files (lhs after rhs)")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("dim-poly", parents=[common], help="dimension polynomial of an induced carrier")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--subgroup", default="()", help='generators in cycle notation, e.g. "(0 1),(1 2)"')
    p.set_defaults(func=cmd_dim_poly)

    p = sub.add_parser("build-algebra", parents=[common], help="construct an induced algebra")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--subgroup", default="()")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_algebra)

    p = sub.add_parser("check-algebra", parents=[common], help="axioms, connectedness, pairing, verdict")
    p.add_argument("algebra")
    p.set_defaults(func=cmd_check_algebra)

    p = sub.add_parser("classify-repsn", parents=[common], help="simplicity of every C[S_n/H]")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify-lemma", help="symmetric-group lemma checks")
    lem = p.add_subparsers(dest="lemma", required=True)
    q = lem.add_parser("contains-times", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q.set_defaults(func=cmd_contains_times)
    q = lem.add_parser("sign-obstruction", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(func=cmd_sign_obstruction)

    p = sub.add_parser("fiber", parents=[common], help="specialize an algebra file at t = n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--algebra", required=True)
    p.add_argument("--match", action="store_true", help="match against the coset algebra")
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", type=int, nargs="+", choices=sorted(CRITERIA))
    p.set_defaults(func=cmd_selftest)
    return parser


def _parameters(args) -> dict:
    skip = {"func", "pretty", "jobs"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _pretty(result: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(result, dict):
        lines = []
        for k, v in result.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(result, list):
        if all(isinstance(r, dict) for r in result):
            return "\n".join(pad + "  ".join(f"{k}={v}" for k, v in r.items() if not isinstance(v, (dict, list)))
                             for r in result)
        return pad + ", ".join(map(str, result))
    return f"{pad}{result}"


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    start = time.perf_counter()
    code = EXIT_OK
    try:
        result, passed = args.func(args)
        code = EXIT_OK if passed else EXIT_FAIL
    except LimitExceeded as exc:
        result, code = {"error": "limit", "message": str(exc)}, EXIT_LIMIT
    except (UsageError, BoundaryMismatch, NotASubgroup, PreconditionError, KeyError) as exc:
        result, code = {"error": "usage", "message": str(exc)}, EXIT_USAGE
    except DeciderDisagreement as exc:
        result, code = {"error": "decider-disagreement", "message": str(exc)}, EXIT_FAIL
    manifest = {
        "command": args.command if args.command != "verify-lemma" else f"verify-lemma {args.lemma}",
        "parameters": _parameters(args),
        "version": __version__,
        "limits": LIMITS.as_dict(),
        "verdict": {EXIT_OK: "pass", EXIT_FAIL: "fail", EXIT_USAGE: "usage-error", EXIT_LIMIT: "limit"}[code],
    }
    if args.pretty:
        print(_pretty({"manifest": manifest, "result": result}))
    else:
        print(json.dumps({"manifest": manifest, "result": result}, sort_keys=True, indent=1))
    print(f"wall time {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
