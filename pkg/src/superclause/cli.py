"""Command-line interface.

Exit codes: 0 success, 2 parse or usage error, 3 resource cap reached,
4 cross-check disagreement or failed verification, 5 fix failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Callable

from . import __version__, report
from .cnf import Formula, parse, serialize
from .errors import ParseError, PreconditionError, ResourceLimitError, TautologyError
from .limits import limits
from .minimality import certify_minimal, minimal_equivalent_formulas
from .redundancy import METHODS, CrossCheckError, check
from .reduction import ReductionError, ReductionInstance, build_reduction, verify_fixed_superirredundant, verify_reduction
from .resolution import forget_variables, resolution_closure
from .splitting import NoViablePartitionError, make_superirredundant

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_RESOURCE = 3
EXIT_DISAGREEMENT = 4
EXIT_FIX = 5


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from None


def detect_format(text: str) -> str:
    """``dimacs`` when the first significant line is a ``p cnf`` header or a DIMACS comment."""
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("p ") or stripped == "c" or stripped.startswith("c "):
            return "dimacs"
        return "named"
    return "named"


def _load(args) -> tuple[Formula, str, str]:
    data = _read(args.input)
    text = data.decode("utf-8")
    fmt = args.input_format or detect_format(text)
    return parse(text, fmt), fmt, report.digest(data)


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    elif not args.json:
        sys.stdout.write(text)


def _finish(args, command: str, digest: str, params: dict, results: Any, human: list[str], warnings=()) -> None:
    if args.json:
        sys.stdout.write(report.dumps(report.make_report(command, digest, params, results, warnings)))
    else:
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
        for line in human:
            print(line)


def _select(f: Formula, indices: list[int] | None) -> list[int]:
    if indices is None:
        return list(range(len(f)))
    for i in indices:
        if not 0 <= i < len(f):
            raise _Exit(EXIT_PARSE, f"clause index {i} out of range (formula has {len(f)} clauses)")
    return sorted(set(indices))


def _index_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated indices, got {text!r}") from None


# -- commands ---------------------------------------------------------------------

def cmd_closure(args) -> int:
    f, fmt, digest = _load(args)
    result = resolution_closure(f, args.budget)
    out_fmt = args.format or fmt
    warnings = [f"closure truncated at {result.budget} clauses"] if result.truncated else []
    _emit(args, serialize(result.clauses, out_fmt))
    results = {
        "input_size": len(f),
        "closure_size": len(result.clauses),
        "generation_count": result.generation_count,
        "truncated": result.truncated,
        "closure": report.formula_json(result.clauses),
    }
    human = [] if not args.out else [f"closure: {len(result.clauses)} clauses written to {args.out}"]
    _finish(args, "closure", digest, {"budget": result.budget, "format": out_fmt}, results, human, warnings)
    return EXIT_RESOURCE if result.truncated else EXIT_OK


def cmd_check(args) -> int:
    f, _, digest = _load(args)
    indices = _select(f, None if args.all or args.clause is None else args.clause)
    verdicts = []
    human = []
    for i in indices:
        c = f[i]
        v = check(f, c, args.method)
        verdicts.append(report.verdict_json(v, i))
        status = "superredundant" if v.superredundant else "superirredundant"
        human.append(f"{i}: {c}  {status}  [{', '.join(v.methods_used)}]")
    warnings = ["degenerate input: the formula is unsatisfiable"] if any(v["flags"] for v in verdicts) else []
    _finish(args, "check", digest, {"method": args.method, "clauses": indices}, {"verdicts": verdicts}, human, warnings)
    return EXIT_OK


def cmd_fix(args) -> int:
    f, fmt, digest = _load(args)
    indices = _select(f, None if args.all or args.targets is None else args.targets)
    targets = [f[i] for i in indices]
    params = {"targets": indices, "max_iterations": args.max_iterations}
    try:
        result = make_superirredundant(f, targets, max_iterations=args.max_iterations)
    except NoViablePartitionError as exc:
        partial = exc.partial
        results = {
            "success": False,
            "failed_clause": str(exc.clause),
            "plans": [report.plan_json(p) for p in partial.plans] if partial else [],
            "formula": report.formula_json(partial.formula) if partial else None,
        }
        _finish(args, "fix", digest, params, results, [f"no viable partition for clause {exc.clause}"])
        return EXIT_FIX
    out_fmt = args.format or fmt
    _emit(args, serialize(result.formula, out_fmt))
    results = {
        "success": True,
        "plans": [report.plan_json(p) for p in result.plans],
        "formula": report.formula_json(result.formula),
    }
    human = [f"split {p.original} into {p.half_a} and {p.half_b}" for p in result.plans]
    if not result.plans:
        human.append("all targets already superirredundant")
    _finish(args, "fix", digest, params, results, human if args.out or args.json else [], [])
    return EXIT_OK


def cmd_minimize(args) -> int:
    f, _, digest = _load(args)
    result = minimal_equivalent_formulas(f)
    results = report.minimization_json(result)
    results["input_size"] = f.size
    results["certify_minimal"] = certify_minimal(f)
    human = [f"minimum size {result.min_size}; {len(result.minimal_formulas)} minimal formula(s)"]
    human += ["  " + str(g) for g in result.minimal_formulas]
    warnings = ["degenerate input: the formula is unsatisfiable"] if result.flags else []
    _finish(args, "minimize", digest, {"oracle_cap": args.oracle_cap}, results, human, warnings)
    return EXIT_OK


def cmd_forget(args) -> int:
    f, fmt, digest = _load(args)
    g = forget_variables(f, args.var)
    out_fmt = args.format or fmt
    _emit(args, serialize(g, out_fmt))
    results = {"variables": list(args.var), "formula": report.formula_json(g)}
    _finish(args, "forget", digest, {"variables": list(args.var)}, results, [])
    return EXIT_OK


def cmd_reduce(args) -> int:
    f, fmt, digest = _load(args)
    inst = build_reduction(f)
    if args.out:
        Path(args.out).write_text(inst.dumps(), encoding="utf-8")
    if args.formula_out:
        out_fmt = args.format or fmt
        comments = [f"k = {inst.k}", f"n = {inst.n}", f"m = {inst.m}"]
        Path(args.formula_out).write_text(serialize(inst.full, out_fmt, comments), encoding="utf-8")
    human = [f"n = {inst.n}, m = {inst.m}, k = {inst.k}, {len(inst.full)} clauses"]
    if not args.out and not args.json:
        sys.stdout.write(inst.dumps())
        human = []
    _finish(args, "reduce", digest, {}, report.instance_json(inst), human)
    return EXIT_OK


def cmd_verify_reduction(args) -> int:
    data = _read(args.input)
    try:
        inst = ReductionInstance.loads(data.decode("utf-8"))
    except (ValueError, KeyError) as exc:
        raise _Exit(EXIT_PARSE, f"malformed instance file: {exc}") from None
    fixed = verify_fixed_superirredundant(inst)
    verdict = verify_reduction(inst)
    results = {
        "fixed_superirredundant": report.fixed_report_json(fixed),
        "verification": report.verification_json(verdict),
        "consistent": verdict.consistent and fixed.certified,
    }
    state = "consistent" if results["consistent"] else f"violation: {verdict.violation}"
    human = [f"{len(fixed.checks)} fixed clauses certified superirredundant", state]
    _finish(args, "verify-reduction", report.digest(data), {}, results, human)
    return EXIT_OK if results["consistent"] else EXIT_DISAGREEMENT


# -- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report to stdout")
    common.add_argument("--input-format", choices=("named", "dimacs"), help="input format (default: detected)")
    common.add_argument("--max-vars", type=int, help="truth-table variable cap (default 24 or $SUPERCLAUSE_MAX_VARS)")
    common.add_argument("--budget", type=int, help="closure clause budget (default 100000)")
    common.add_argument("--oracle-cap", type=int, help="closure size cap of the minimization oracle (default 18)")
    common.add_argument("--prover-nodes", type=int, help="node budget of the substitution prover (default 20000)")

    parser = argparse.ArgumentParser(prog="superclause", description="Superredundancy analysis of CNF formulae.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, func: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.add_argument("input", help="input file, or - for stdin")
        p.set_defaults(func=func)
        return p

    p = command("closure", cmd_closure, "resolution closure")
    p.add_argument("--format", choices=("named", "dimacs"), help="output format (default: input format)")
    p.add_argument("--out", help="write the closure here")

    p = command("check", cmd_check, "superredundancy verdicts")
    p.add_argument("--clause", type=int, action="append", help="zero-based clause index (repeatable)")
    p.add_argument("--all", action="store_true", help="check every clause (default)")
    p.add_argument("--method", choices=METHODS, default="auto")

    p = command("fix", cmd_fix, "split clauses until they are superirredundant")
    p.add_argument("--targets", type=_index_list, help="comma-separated clause indices")
    p.add_argument("--all", action="store_true", help="target every clause")
    p.add_argument("--out", help="write the resulting formula here")
    p.add_argument("--format", choices=("named", "dimacs"))
    p.add_argument("--max-iterations", type=int, help="split limit (default 4 x number of targets)")

    command("minimize", cmd_minimize, "all minimum-size equivalent formulae")

    p = command("forget", cmd_forget, "forget variables by resolution")
    p.add_argument("--var", action="append", required=True, help="variable to forget (repeatable)")
    p.add_argument("--out", help="write the resulting formula here")
    p.add_argument("--format", choices=("named", "dimacs"))

    p = command("reduce", cmd_reduce, "build the Horn-minimization instance of a CNF")
    p.add_argument("--out", help="write the instance (JSON) here")
    p.add_argument("--formula-out", help="also write the instance formula here")
    p.add_argument("--format", choices=("named", "dimacs"))

    command("verify-reduction", cmd_verify_reduction, "verify an instance written by reduce")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with limits(max_vars=args.max_vars, closure_budget=args.budget,
                    oracle_cap=args.oracle_cap, prover_nodes=args.prover_nodes):
            return args.func(args)
    except _Exit as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.code
    except (ParseError, TautologyError, UnicodeDecodeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (CrossCheckError, ReductionError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_DISAGREEMENT
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
