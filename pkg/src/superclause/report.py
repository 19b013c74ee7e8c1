"""JSON rendering of results; every report is deterministic for identical input."""

from __future__ import annotations

import hashlib
import json
from typing import Any, Iterable

from .cnf import Clause, Formula
from .minimality import MinimizationResult
from .redundancy import Certificate, SuperredundancyVerdict
from .reduction import FixedReport, ReductionInstance, ReductionVerification
from .splitting import SplitPlan

SCHEMA_VERSION = 1


def digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def clause_json(c: Clause) -> str:
    return str(c)


def formula_json(f: Formula | Iterable[Clause]) -> list[str]:
    clauses = f.clauses if isinstance(f, Formula) else sorted(f, key=lambda c: c.sort_key)
    return [str(c) for c in clauses]


def _step_json(step: tuple) -> dict[str, Any]:
    kind = step[0]
    if kind == "set":
        return {"step": "set", "variable": step[1], "value": step[2]}
    if kind == "drop-pure":
        return {"step": "drop-pure", "literal": str(step[1]), "clause": str(step[2])}
    return {"step": "drop-separate", "clauses": formula_json(step[1])}


def certificate_json(cert: Certificate | None) -> dict[str, Any] | None:
    if cert is None:
        return None
    data = cert.data
    if cert.kind == "subset-clause":
        body = {"clause": str(data["clause"])}
    elif cert.kind == "last-step-pair":
        body = {"positive": str(data["positive"]), "negative": str(data["negative"]), "pivot": str(data["pivot"])}
    elif cert.kind == "entailing-set":
        body = {"clauses": formula_json(data["clauses"])}
    else:
        body = {"steps": [_step_json(s) for s in data["steps"]], "residual": formula_json(data["residual"])}
    return {"kind": cert.kind, **body}


def verdict_json(v: SuperredundancyVerdict, index: int | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "clause": str(v.clause),
        "status": "superredundant" if v.superredundant else "superirredundant",
        "superredundant": v.superredundant,
        "methods": list(v.methods_used),
        "certificate": certificate_json(v.certificate),
        "flags": list(v.flags),
    }
    if index is not None:
        out["index"] = index
    return out


def plan_json(p: SplitPlan) -> dict[str, Any]:
    c1, c2 = p.parts
    return {
        "original": str(p.original),
        "partition": [str(c1), str(c2)],
        "half_a": str(p.half_a),
        "half_b": str(p.half_b),
        "fresh": p.fresh,
        "collateral": formula_json(p.collateral),
        "precheck": list(p.precheck) if p.precheck is not None else None,
    }


def minimization_json(r: MinimizationResult) -> dict[str, Any]:
    return {
        "min_size": r.min_size,
        "minimal_formulas": [formula_json(g) for g in r.minimal_formulas],
        "search_space": r.search_space,
        "closure_size": r.closure_size,
        "flags": list(r.flags),
    }


def instance_json(inst: ReductionInstance) -> dict[str, Any]:
    return inst.to_json()


def fixed_report_json(r: FixedReport) -> dict[str, Any]:
    return {
        "certified": r.certified,
        "clauses": [
            {
                "clause": str(c.clause),
                "family": c.family,
                "substitution": c.substitution,
                "certificate": certificate_json(c.certificate),
                "first_step_superredundant": c.first_step_superredundant,
            }
            for c in r.checks
        ],
    }


def verification_json(v: ReductionVerification) -> dict[str, Any]:
    return {
        "consistent": v.consistent,
        "input_satisfiable": v.satisfiable,
        "branch": "witness" if v.satisfiable else "candidate-refutation",
        "witness_models": [{k: val for k, val in model} for model in v.witnesses],
        "candidates_checked": v.candidates_checked,
        "violation": v.violation,
        "offending": formula_json(v.offending) if v.offending is not None else None,
    }


def make_report(command: str, input_digest: str, parameters: dict[str, Any], results: Any, warnings: Iterable[str] = ()) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input_digest": input_digest,
        "parameters": parameters,
        "results": results,
        "warnings": list(warnings),
    }


def dumps(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


__all__ = [
    "certificate_json",
    "digest",
    "dumps",
    "fixed_report_json",
    "formula_json",
    "instance_json",
    "make_report",
    "minimization_json",
    "plan_json",
    "verdict_json",
    "verification_json",
]
