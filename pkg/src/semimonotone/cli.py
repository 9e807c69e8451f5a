"""Command-line front end.

Commands: ``check``, ``verify-helly``, ``generate``, ``nerve`` and ``suite``.
Reports are JSON on standard output with sorted keys and no floating-point
values; diagnostics go to standard error.

Exit codes: 0 success or true verdict, 1 false verdict or failed
hypotheses, 2 input error, 3 THEOREM-VIOLATION.
"""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .cell_complex import PiecewiseAffineGraph
from .documents import DocumentError, dumps, family_json, loads, parse_family, single_member
from .generators import KINDS, generate
from .helly import THEOREM_VIOLATION, NotApplicable, verify
from .nerve import homology, minimal_empty_audit, nerve
from .predicates import InconsistencyError, is_monotone_graph, is_quasi_affine, is_semi_monotone

TOOL = "semimonotone"

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2, 3

CHECK_KINDS = ("semi-monotone", "quasi-affine", "monotone")

GENERATOR_PARAMS = {
    "nested_boxes": ("s", "dim"),
    "random_staircase_semimonotone": ("s", "dim", "max_pieces"),
    "random_affine_graphs": ("s", "dim"),
    "disconnected_pair": ("m",),
    "minimal_empty_triple": (),
}


class InputError(Exception):
    pass


def plain(obj):
    """JSON-ready copy: rationals become ``"p/q"`` strings, tuples become lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        raise TypeError("reports never carry floating-point values")
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if hasattr(obj, "to_json"):
        return plain(obj.to_json())
    return str(obj)


def report(args, argv: Sequence[str], **body) -> dict:
    doc = {"tool": {"name": TOOL, "version": __version__}, "command": list(argv),
           "seed": getattr(args, "seed", None)}
    doc.update(body)
    return plain(doc)


def _read_family(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_family(loads(text))
    except DocumentError as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        # json syntax errors
        raise InputError(f"malformed document: {exc}") from None


# ---------------------------------------------------------------------------

def cmd_check(args, argv) -> tuple:
    fam = _read_family(args.file)
    try:
        member: PiecewiseAffineGraph = single_member(fam)
    except DocumentError as exc:
        raise InputError(str(exc)) from None
    if args.kind == "semi-monotone":
        if member.range_dim or member.domain_dim != member.ambient_dim:
            raise InputError("semi-monotone needs an open set: a member with an empty map")
        v = is_semi_monotone(member.domain)
    elif args.kind == "quasi-affine":
        v = is_quasi_affine(member)
    else:
        v = is_monotone_graph(member)
    body = {"verdicts": {args.kind: v.verdict},
            "witnesses": {args.kind: v.witness} if v.witness is not None else {},
            "member": fam.ids[0]}
    if v.reason:
        body["reason"] = v.reason
    return report(args, argv, **body), EXIT_OK if v.verdict else EXIT_FALSE


def cmd_verify_helly(args, argv) -> tuple:
    fam = _read_family(args.file)
    try:
        rep = verify(fam, d=args.dim_clause, min_dim=args.min_dim_formula, witness_p=args.witness)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    records = sorted((r.to_json() for r in rep.records), key=lambda r: r["J"])
    verdicts = {"hypotheses": rep.hypothesis_ok, "conclusion": rep.conclusion_ok}
    if rep.dim_clause is not None:
        verdicts["dim_clause"] = rep.dim_clause
    if args.min_dim_formula and rep.hypothesis_ok:
        verdicts["min_dim_formula"] = rep.details.get("min_dim_formula")
    witnesses = {}
    if rep.counterexample is not None:
        witnesses["failing_J"] = rep.counterexample
    if "dim_witness" in rep.details:
        witnesses["dim_witness"] = rep.details["dim_witness"]
    body = {"ids": list(fam.ids), "records": records, "verdicts": verdicts,
            "witnesses": witnesses, "violations": list(rep.violations)}
    if "full" in rep.details:
        body["full_intersection"] = rep.details["full"]
    if rep.violations:
        code = EXIT_VIOLATION
    elif not rep.hypothesis_ok:
        code = EXIT_FALSE
    else:
        code = EXIT_OK
    return report(args, argv, **body), code


def _parse_params(kind: str, pairs: Sequence[str]) -> dict:
    if kind not in GENERATOR_PARAMS:
        raise InputError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    out = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise InputError(f"parameters are key=value, got {pair!r}")
        if key not in GENERATOR_PARAMS[kind]:
            allowed = ", ".join(GENERATOR_PARAMS[kind]) or "none"
            raise InputError(f"{kind} takes parameters: {allowed}; got {key!r}")
        try:
            out[key] = int(value)
        except ValueError:
            raise InputError(f"parameter {key} must be an integer, got {value!r}") from None
    if "m" in out and not 1 <= out["m"] <= 12:
        raise InputError("m must lie in 1..12")
    if "max_pieces" in out and not 1 <= out["max_pieces"] <= 6:
        raise InputError("max_pieces must lie in 1..6")
    return out


def cmd_generate(args, argv) -> tuple:
    params = _parse_params(args.kind, args.params)
    try:
        fam = generate(args.kind, params, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return family_json(fam), EXIT_OK


def cmd_nerve(args, argv) -> tuple:
    fam = _read_family(args.file)
    K = nerve(fam)
    body = {"ids": list(fam.ids),
            "faces": [[j + 1 for j in f] for f in K.to_json()],
            "f_vector": list(K.f_vector()),
            "homology": homology(K)}
    try:
        body["minimal_empty"] = minimal_empty_audit(fam)
    except NotApplicable:
        pass
    return report(args, argv, **body), EXIT_OK


def cmd_suite(args, argv) -> tuple:
    from .suite import MUTATIONS, run_acceptance, summary_table

    if not args.acceptance:
        raise InputError("suite needs --acceptance")
    if args.mutate is not None and args.mutate not in MUTATIONS:
        raise InputError(f"unknown mutation {args.mutate!r}")
    only = None
    if args.only:
        try:
            only = sorted({int(x) for x in args.only.split(",")})
        except ValueError:
            raise InputError("--only takes a comma-separated list of criterion numbers") from None
        if any(not 1 <= n <= 10 for n in only):
            raise InputError("criteria are numbered 1..10")
    try:
        results = run_acceptance(args.seed, mutate=args.mutate, only=only)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(summary_table(results, timing=args.timing))
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(f"FAILED: criterion {r.number} ({r.name})", file=sys.stderr)
        for line in r.failures[:5]:
            print(f"  {line}", file=sys.stderr)
    doc = report(args, argv, mutation=args.mutate, passed=not failed,
                 criteria=[r.to_json(timing=args.timing) for r in results])
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc))
    return None, EXIT_OK if not failed else EXIT_FALSE


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=fn)
        p.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
        return p

    p = add("check", cmd_check, "classify a single-member document")
    p.add_argument("kind", choices=CHECK_KINDS)
    p.add_argument("file", help="family document, or - for standard input")

    p = add("verify-helly", cmd_verify_helly, "check the Helly-type hypotheses and conclusion")
    p.add_argument("file")
    p.add_argument("--dim-clause", type=int, metavar="D", dest="dim_clause")
    p.add_argument("--min-dim-formula", action="store_true", dest="min_dim_formula")
    p.add_argument("--witness", type=int, metavar="P", help="find J with dim F_J = P")

    p = add("generate", cmd_generate, "emit a generated family document")
    p.add_argument("kind", help=", ".join(KINDS))
    p.add_argument("params", nargs="*", metavar="KEY=VALUE")
    p.add_argument("--seed", type=int, default=0)

    p = add("nerve", cmd_nerve, "nerve complex and its homology")
    p.add_argument("file")

    p = add("suite", cmd_suite, "run the acceptance matrix")
    p.add_argument("--acceptance", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--mutate", help="deliberately break an engine (connectivity)")
    p.add_argument("--report", metavar="PATH", help="write the JSON report here")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors already; keep 0 for --help
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        doc, code = args.handler(args, [TOOL] + argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InconsistencyError as exc:
        print(f"{THEOREM_VIOLATION}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    if doc is not None:
        if args.timing and "tool" in doc:
            doc["timing"] = {"milliseconds": int((time.perf_counter() - start) * 1000)}
        sys.stdout.write(dumps(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
