"""Superredundancy checkers and a substitution-based superirredundancy prover.

A clause ``c`` of ``F`` is superredundant when the resolution closure of ``F``
minus ``c`` itself still entails ``c``.  Several procedures decide this:

* ``definition``: build the closure and test entailment directly;
* ``first-step``: only ``F \\ {c}`` plus the resolvents of ``c`` with ``F`` are needed;
* ``last-step``: the closure contains a strict subclause of ``c``, or two
  clauses ``c1 | a`` and ``c2 | -a`` with ``c = c1 | c2`` and ``a`` outside ``c``;
* ``unit``: for a single-literal clause, a reduced formula must entail it;
* ``horn-krom``: the first-step test on the polynomial entailment paths.

All of them agree (the test suite checks this on random formulae).
"""

from __future__ import annotations

import dataclasses
from collections import defaultdict
from typing import Any, Iterable

from . import limits, semantics
from .cnf import Clause, Formula, Literal, substitute
from .errors import PreconditionError, ResourceLimitError, SuperclauseError
from .resolution import _resolve_raw, resolution_closure, resolve_sets

METHODS = ("auto", "definition", "first-step", "last-step", "unit", "horn-krom", "cross")
DEGENERATE = "degenerate"


class CrossCheckError(SuperclauseError):
    """Two checking methods disagreed on the same clause."""

    def __init__(self, clause: Clause, verdicts: dict[str, bool]):
        self.clause = clause
        self.verdicts = dict(verdicts)
        detail = ", ".join(f"{k}={v}" for k, v in sorted(verdicts.items()))
        super().__init__(f"checkers disagree on clause {clause}: {detail}")


@dataclasses.dataclass(frozen=True, eq=True)
class Certificate:
    """Witness for a verdict.

    ``kind`` is one of ``subset-clause``, ``last-step-pair``, ``entailing-set``
    or ``substitution-chain``; ``data`` holds the witnessing clauses or steps.
    """

    kind: str
    data: dict[str, Any]


@dataclasses.dataclass(frozen=True)
class SuperredundancyVerdict:
    clause: Clause
    superredundant: bool
    methods_used: tuple[str, ...]
    certificate: Certificate | None = None
    flags: tuple[str, ...] = ()

    @property
    def superirredundant(self) -> bool:
        return not self.superredundant


def _as_clause(c: Clause | Literal) -> Clause:
    return Clause([c]) if isinstance(c, Literal) else c


def _require_member(f: Formula, c: Clause) -> None:
    if c not in f:
        raise PreconditionError(f"clause {c} is not in the formula")


def _flags(f: Formula) -> tuple[str, ...]:
    if f.has_empty_clause():
        return (DEGENERATE,)
    try:
        return () if semantics.satisfiable(f) else (DEGENERATE,)
    except ResourceLimitError:
        return ()


def _shrink(g: Iterable[Clause], c: Clause, method: str = "auto") -> Formula:
    """Greedily drop clauses of ``g`` while it still entails ``c``."""
    kept = sorted(g, key=lambda d: d.sort_key, reverse=True)
    i = 0
    while i < len(kept):
        trial = kept[:i] + kept[i + 1:]
        if semantics.entails_clause(trial, c, method):
            kept = trial
        else:
            i += 1
    return Formula(kept)


def is_redundant(f: Formula, c: Clause) -> bool:
    """Whether ``c`` follows from the other clauses of ``f``."""
    _require_member(f, c)
    return semantics.entails_clause(f.without(c), c)


# -- last-step search shared by two methods -------------------------------------

def _one_two_witness(closure: Iterable[Clause], c: Clause) -> Certificate | None:
    target = c.literal_set
    names = c.variables
    pieces = defaultdict(list)  # pivot literal -> remainders that are subsets of c
    for d in closure:
        lits = d.literal_set
        if lits < target:
            return Certificate("subset-clause", {"clause": d})
        outside = [l for l in lits if l.name not in names]
        if len(outside) == 1 and lits - {outside[0]} <= target:
            pieces[outside[0]].append(d)
    for pivot in sorted(pieces):
        if not pivot.positive:
            continue
        negatives = pieces.get(-pivot)
        if not negatives:
            continue
        for d1 in sorted(pieces[pivot], key=lambda d: d.sort_key):
            r1 = d1.literal_set - {pivot}
            for d2 in sorted(negatives, key=lambda d: d.sort_key):
                if r1 | (d2.literal_set - {-pivot}) == target:
                    return Certificate("last-step-pair", {"positive": d1, "negative": d2, "pivot": pivot})
    return None


def _closure(f: Formula) -> Formula:
    return resolution_closure(f).require_complete()


# -- deciding procedures ---------------------------------------------------------

def check_super_definition(f: Formula, c: Clause) -> SuperredundancyVerdict:
    """Entailment of ``c`` by the closure of ``f`` with ``c`` removed."""
    _require_member(f, c)
    closure = _closure(f)
    rest = closure.without(c)
    verdict = semantics.entails_clause(rest, c)
    cert = None
    if verdict:
        witness = _one_two_witness(rest.clause_set, c)
        if witness is None:
            g = _shrink(rest.clause_set, c)
        elif witness.kind == "subset-clause":
            g = Formula([witness.data["clause"]])
        else:
            g = Formula([witness.data["positive"], witness.data["negative"]])
        cert = Certificate("entailing-set", {"clauses": g})
    return SuperredundancyVerdict(c, verdict, ("definition",), cert, _flags(f))


def _first_step_set(f: Formula, c: Clause) -> Formula:
    return f.without(c) | resolve_sets([c], f)


def _first_step(f: Formula, c: Clause, method: str, tag: str) -> SuperredundancyVerdict:
    _require_member(f, c)
    rest = _first_step_set(f, c)
    verdict = semantics.entails_clause(rest, c, method)
    cert = None
    if verdict:
        cert = Certificate("entailing-set", {"clauses": _shrink(rest.clause_set, c, method)})
    return SuperredundancyVerdict(c, verdict, (tag,), cert, _flags(f))


def check_super_first_step(f: Formula, c: Clause) -> SuperredundancyVerdict:
    """Entailment of ``c`` by ``f \\ {c}`` plus the resolvents of ``c`` with ``f``."""
    return _first_step(f, c, "auto", "first-step")


def check_super_last_step(f: Formula, c: Clause) -> SuperredundancyVerdict:
    """Search the closure for a strict subclause of ``c`` or a pair resolving into ``c``."""
    _require_member(f, c)
    witness = _one_two_witness(_closure(f).clause_set, c)
    return SuperredundancyVerdict(c, witness is not None, ("last-step",), witness, _flags(f))


def unit_residual(f: Formula, l: Literal) -> Formula:
    """Clauses without ``-l`` (other than ``l`` itself) plus those with ``-l`` removed."""
    unit = Clause([l])
    neg = -l
    out = []
    for d in f.clause_set:
        lits = d.literal_set
        if neg in lits:
            out.append(Clause._trusted(lits - {neg}))
        elif d != unit:
            out.append(d)
    return Formula(out)


def check_super_unit(f: Formula, l: Literal | Clause) -> SuperredundancyVerdict:
    """Single-literal clause test."""
    unit = _as_clause(l)
    if len(unit) != 1:
        raise PreconditionError(f"clause {unit} is not a single literal")
    _require_member(f, unit)
    (lit,) = unit.literal_set
    residual = unit_residual(f, lit)
    verdict = semantics.entails_clause(residual, unit)
    cert = Certificate("entailing-set", {"clauses": _shrink(residual.clause_set, unit)}) if verdict else None
    return SuperredundancyVerdict(unit, verdict, ("unit",), cert, _flags(f))


def check_super_pure_unit(f: Formula, l: Literal | Clause) -> SuperredundancyVerdict:
    """Single-literal clause whose negation occurs nowhere: plain entailment from the rest."""
    unit = _as_clause(l)
    if len(unit) != 1:
        raise PreconditionError(f"clause {unit} is not a single literal")
    _require_member(f, unit)
    (lit,) = unit.literal_set
    if -lit in f.literals():
        raise PreconditionError(f"literal {-lit} occurs in the formula")
    rest = f.without(unit)
    verdict = semantics.entails_clause(rest, unit)
    cert = Certificate("entailing-set", {"clauses": _shrink(rest.clause_set, unit)}) if verdict else None
    return SuperredundancyVerdict(unit, verdict, ("pure-unit",), cert, _flags(f))


def check_super_horn_krom(f: Formula, c: Clause) -> SuperredundancyVerdict:
    """First-step test restricted to unit propagation or the implication graph."""
    if f.is_horn():
        method = "horn"
    elif f.is_krom():
        method = "krom"
    else:
        raise PreconditionError("formula is neither Horn nor Krom")
    return _first_step(f, c, method, "horn-krom")


def check_unit_no_positive(f: Formula, l: Literal) -> bool | None:
    """True when ``l`` is provably superirredundant in ``f | {l}``; None when this test does not apply.

    ``l`` itself must not occur in ``f``.  The test applies only when
    ``f | {l}`` is satisfiable.
    """
    if l in f.literals():
        raise PreconditionError(f"literal {l} occurs in the formula")
    extended = f.with_clause(Clause([l]))
    return True if semantics.satisfiable(extended) else None


def check_monotone_superset(f: Formula, c: Clause, extra: Clause) -> bool:
    """Re-check ``c`` after adding ``extra``; ``c`` must be superredundant in ``f``."""
    if not check_super_first_step(f, c).superredundant:
        raise PreconditionError(f"clause {c} is not superredundant in the formula")
    return check_super_first_step(f.with_clause(extra), c).superredundant


def applicable_methods(f: Formula, c: Clause) -> list[str]:
    out = ["definition", "first-step", "last-step"]
    if len(c) == 1:
        out.append("unit")
    if f.is_horn() or f.is_krom():
        out.append("horn-krom")
    return out


_DISPATCH = {
    "definition": check_super_definition,
    "first-step": check_super_first_step,
    "last-step": check_super_last_step,
    "unit": check_super_unit,
    "horn-krom": check_super_horn_krom,
}


def check(f: Formula, c: Clause, method: str = "auto") -> SuperredundancyVerdict:
    """Run one method, or with ``cross`` every applicable one, raising on disagreement."""
    if method == "auto":
        method = "first-step"
    if method in _DISPATCH:
        return _DISPATCH[method](f, c)
    if method != "cross":
        raise ValueError(f"unknown method {method!r}")
    verdicts = {m: _DISPATCH[m](f, c) for m in applicable_methods(f, c)}
    answers = {m: v.superredundant for m, v in verdicts.items()}
    if len(set(answers.values())) != 1:
        raise CrossCheckError(c, answers)
    base = verdicts["last-step"]
    return dataclasses.replace(base, methods_used=tuple(verdicts))


# -- substitution prover ---------------------------------------------------------

def _has_resolving_pair(f: Formula) -> bool:
    seen: dict[Literal, list[frozenset]] = defaultdict(list)
    for d in f.clause_set:
        lits = d.literal_set
        for lit in lits:
            for other in seen.get(-lit, ()):
                if _resolve_raw(lits, other) is not None:
                    return True
        for lit in lits:
            seen[lit].append(lits)
    return False


def _has_strict_subclause(f: Formula, c: Clause) -> bool:
    target = c.literal_set
    return any(d.literal_set < target for d in f.clause_set)


def is_terminal(f: Formula, c: Clause) -> bool:
    """No two clauses resolve and no strict subclause of ``c`` is present."""
    return not _has_strict_subclause(f, c) and not _has_resolving_pair(f)


def substitution_allowed(f: Formula, c: Clause, name: str, value: bool) -> bool:
    """Value-substitution precondition: ``c`` avoids ``name`` and ``c | -lit`` is not in ``f``."""
    if name in c.variables:
        return False
    blocker = Clause._trusted(c.literal_set | {Literal(name, not value)})
    return blocker not in f


def _components(f: Formula) -> list[list[Clause]]:
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d in f.clause_set:
        names = sorted(d.variables)
        for n in names:
            parent.setdefault(n, n)
        for n in names[1:]:
            a, b = find(names[0]), find(n)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[Any, list[Clause]] = defaultdict(list)
    for i, d in enumerate(f.clauses):
        key = find(next(iter(d.variables))) if d.literal_set else ("empty", i)
        groups[key].append(d)
    return [groups[k] for k in sorted(groups, key=str)]


def separate_step(f: Formula, c: Clause) -> Formula | None:
    """Clauses in components not linked to ``c`` when they may be dropped, else None."""
    if not c.literal_set:
        return None
    anchor = next(iter(c.variables))
    drop: list[Clause] = []
    for comp in _components(f):
        if any(anchor in d.variables for d in comp):
            continue
        drop.extend(comp)
    if not drop:
        return None
    try:
        if not semantics.satisfiable(drop):
            return None
    except ResourceLimitError:
        return None
    return Formula(drop)


def pure_step(f: Formula, c: Clause) -> tuple[Literal, Clause] | None:
    """A clause containing a pure literal absent from ``c``, if any."""
    lits = f.literals()
    for d in f.clauses:
        if d == c:
            continue
        for lit in d.literals:
            if -lit not in lits and lit not in c.literal_set:
                return lit, d
    return None


def apply_step(f: Formula, c: Clause, step: tuple) -> Formula:
    """Apply one certificate step after validating its precondition."""
    kind = step[0]
    if kind == "set":
        _, name, value = step
        if not substitution_allowed(f, c, name, value):
            raise PreconditionError(f"substitution {name}={value} is not allowed for clause {c}")
        return substitute(f, name, value)
    if kind == "drop-pure":
        _, lit, d = step
        if d not in f or lit not in d.literal_set or lit in c.literal_set or -lit in f.literals():
            raise PreconditionError(f"pure-literal drop of {d} on {lit} is not allowed")
        return f.without(d)
    if kind == "drop-separate":
        _, part = step
        if not part <= f or c in part or part.variables & (f - part).variables:
            raise PreconditionError("dropped part is not variable-disjoint from the rest")
        if not semantics.satisfiable(part):
            raise PreconditionError("dropped part is unsatisfiable")
        return f - part
    raise ValueError(f"unknown step kind {kind!r}")


def check_certificate(f: Formula, c: Clause, cert: Certificate) -> bool:
    """Replay a substitution chain and confirm it ends in a terminal formula."""
    if cert.kind != "substitution-chain" or c not in f:
        return False
    current = f
    try:
        for step in cert.data["steps"]:
            current = apply_step(current, c, step)
    except PreconditionError:
        return False
    if c not in current:
        return False
    if current != cert.data["residual"]:
        return False
    return is_terminal(current, c)


class _Budget:
    def __init__(self, nodes: int):
        self.left = nodes


def _candidates(f: Formula, c: Clause) -> list[tuple[str, bool]]:
    target = c.literal_set
    linked = []
    sharing = []
    for d in f.clause_set:
        if d == c:
            continue
        if _resolve_raw(target, d.literal_set) is not None:
            linked.append(d.literal_set)
        if d.variables & c.variables:
            sharing.append(d.literal_set)
    scored = []
    for name in sorted(f.variables - c.variables):
        for value in (True, False):
            if not substitution_allowed(f, c, name, value):
                continue
            lit = Literal(name, value)
            score = (sum(lit in d for d in linked), sum(lit in d for d in sharing))
            scored.append((-score[0], -score[1], name, not value))
    scored.sort()
    return [(name, not neg_value) for _, _, name, neg_value in scored]


def _simplify(f: Formula, c: Clause, use_pure: bool, steps: list) -> Formula:
    while True:
        if is_terminal(f, c):
            return f
        if use_pure:
            hit = pure_step(f, c)
            if hit is not None:
                step = ("drop-pure", hit[0], hit[1])
                f = f.without(hit[1])
                steps.append(step)
                continue
        part = separate_step(f, c)
        if part is not None:
            steps.append(("drop-separate", part))
            f = f - part
            continue
        return f


def _search(f: Formula, c: Clause, depth: int, use_pure: bool, budget: _Budget, failed: dict) -> list | None:
    budget.left -= 1
    if budget.left < 0:
        return None
    steps: list = []
    f = _simplify(f, c, use_pure, steps)
    if _has_strict_subclause(f, c):
        return None
    if not _has_resolving_pair(f):
        return steps
    if depth == 0 or failed.get(f, -1) >= depth:
        return None
    for name, value in _candidates(f, c):
        sub = _search(substitute(f, name, value), c, depth - 1, use_pure, budget, failed)
        if sub is not None:
            return steps + [("set", name, value)] + sub
        if budget.left < 0:
            return None
    failed[f] = max(failed.get(f, -1), depth)
    return None


def _replay(f: Formula, c: Clause, steps: list) -> Formula:
    for step in steps:
        f = apply_step(f, c, step)
    return f


def prove_superirredundant_by_substitution(
    f: Formula, c: Clause, max_depth: int | None = None, use_pure: bool | None = None
) -> Certificate | None:
    """Look for value substitutions (plus component and pure-literal drops) isolating ``c``.

    A returned certificate proves ``c`` superirredundant in ``f``; None proves
    nothing.  Without ``use_pure`` the search first runs with substitutions
    and component drops only, then again with pure-literal drops.
    """
    _require_member(f, c)
    if max_depth is None:
        max_depth = len(f.variables - c.variables)
    phases = (False, True) if use_pure is None else (use_pure,)
    for pure in phases:
        budget = _Budget(limits.current().prover_nodes)
        steps = _search(f, c, max_depth, pure, budget, {})
        if steps is not None:
            residual = _replay(f, c, steps)
            return Certificate("substitution-chain", {"steps": tuple(steps), "residual": residual})
    return None


def chain_certificate(f: Formula, c: Clause, assignment: dict[str, bool], use_pure: bool = True) -> Certificate | None:
    """Certificate for a given substitution, completed by component and pure-literal drops.

    Substitutions are applied in sorted variable order; None when a step is not
    allowed or the result is not terminal.
    """
    steps: list = []
    current = f
    for name in sorted(assignment):
        value = assignment[name]
        if not substitution_allowed(current, c, name, value):
            return None
        current = substitute(current, name, value)
        steps.append(("set", name, value))
    current = _simplify(current, c, use_pure, steps)
    if c not in current or not is_terminal(current, c):
        return None
    return Certificate("substitution-chain", {"steps": tuple(steps), "residual": current})
