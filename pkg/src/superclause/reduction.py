"""SAT to Horn-minimization reduction: instance generator and small-scale verifier.

For a CNF ``F`` over ``x1..xn`` with clauses ``f1..fm`` the Horn formula is::

    A_F  = { xi | -q,  ei | -q }
    A_T  = { -xi | ti, -ei | ti }
    A_C  = { -xi | cj  if xi in fj,   -ei | cj  if -xi in fj }
    A_B' = { -T | -C | xi | -ri,  ri | -q,  -T | -C | ei | -si,  si | -q }

where ``-T | -C`` abbreviates ``-t1 | ... | -tn | -c1 | ... | -cm``, and the bound
is ``k = 2n + ||A_T|| + ||A_C|| + ||A_B'||``.  ``F`` is satisfiable exactly when
``A`` has an equivalent formula of size at most ``k``.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
import threading
from typing import Any, Mapping

from . import semantics
from .cnf import Clause, Formula, Literal, formula_size
from .errors import Cancelled, PreconditionError, SuperclauseError
from .redundancy import (
    Certificate,
    chain_certificate,
    check_certificate,
    check_super_horn_krom,
    prove_superirredundant_by_substitution,
)
from .resolution import forget_variables


class ReductionError(SuperclauseError):
    """A verification step of the reduction failed."""

    def __init__(self, message: str, offending: Any = None):
        self.offending = offending
        super().__init__(message)


def _pos(name: str) -> Literal:
    return Literal(name, True)


def _neg(name: str) -> Literal:
    return Literal(name, False)


def _cl(*lits: Literal) -> Clause:
    return Clause(lits)


@dataclasses.dataclass(frozen=True)
class ReductionInstance:
    input_cnf: Formula
    n: int
    m: int
    a_f: Formula
    a_t: Formula
    a_c: Formula
    a_b_prime: Formula
    k: int
    renaming: tuple[tuple[str, str], ...] = ()

    @property
    def fixed(self) -> Formula:
        return self.a_t | self.a_c | self.a_b_prime

    @property
    def full(self) -> Formula:
        return self.a_f | self.fixed

    @property
    def input_clauses(self) -> tuple[Clause, ...]:
        """``f1..fm`` in order."""
        return tuple(sorted(self.input_cnf.clause_set, key=_numbering_key))

    def family(self, c: Clause) -> str:
        for label, part in (("A_F", self.a_f), ("A_T", self.a_t), ("A_C", self.a_c), ("A_B'", self.a_b_prime)):
            if c in part:
                return label
        raise KeyError(str(c))

    def to_json(self) -> dict[str, Any]:
        return {
            "input": [str(c) for c in self.input_clauses],
            "renaming": dict(self.renaming),
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "A_F": [str(c) for c in self.a_f.clauses],
            "A_T": [str(c) for c in self.a_t.clauses],
            "A_C": [str(c) for c in self.a_c.clauses],
            "A_B'": [str(c) for c in self.a_b_prime.clauses],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> ReductionInstance:
        def parts(key: str) -> Formula:
            return Formula(Clause.parse(t) for t in data[key])

        return cls(
            input_cnf=parts("input"),
            n=int(data["n"]),
            m=int(data["m"]),
            a_f=parts("A_F"),
            a_t=parts("A_T"),
            a_c=parts("A_C"),
            a_b_prime=parts("A_B'"),
            k=int(data["k"]),
            renaming=tuple(sorted(dict(data.get("renaming", {})).items())),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def loads(cls, text: str) -> ReductionInstance:
        return cls.from_json(json.loads(text))


def _numbering_key(c: Clause):
    # clause numbering puts positive literals first on ties, unlike the formula order
    lits = c.literals
    return tuple(l.name for l in lits), tuple(not l.positive for l in lits)


def _renaming(f: Formula) -> dict[str, str]:
    order: dict[str, str] = {}
    for c in sorted(f.clause_set, key=_numbering_key):
        for lit in c.literals:
            if lit.name not in order:
                order[lit.name] = f"x{len(order) + 1}"
    return order


def _body(n: int, m: int) -> list[Literal]:
    return [_neg(f"t{i}") for i in range(1, n + 1)] + [_neg(f"c{j}") for j in range(1, m + 1)]


def build_reduction(f: Formula) -> ReductionInstance:
    """The Horn instance and bound for ``f`` (split variant of the blocking clauses)."""
    if not len(f):
        raise PreconditionError("the input formula has no clauses")
    if f.has_empty_clause():
        raise PreconditionError("the input formula contains the empty clause")
    mapping = _renaming(f)
    renamed = Formula(Clause._trusted(frozenset(Literal(mapping[l.name], l.positive) for l in c.literal_set)) for c in f.clause_set)
    n = len(mapping)
    clauses = sorted(renamed.clause_set, key=_numbering_key)
    m = len(clauses)
    q = _neg("q")
    a_f, a_t, a_c, a_b = [], [], [], []
    body = _body(n, m)
    for i in range(1, n + 1):
        x, e, t, r, s = f"x{i}", f"e{i}", f"t{i}", f"r{i}", f"s{i}"
        a_f += [_cl(_pos(x), q), _cl(_pos(e), q)]
        a_t += [_cl(_neg(x), _pos(t)), _cl(_neg(e), _pos(t))]
        a_b += [
            Clause(body + [_pos(x), _neg(r)]), _cl(_pos(r), q),
            Clause(body + [_pos(e), _neg(s)]), _cl(_pos(s), q),
        ]
        for j, fj in enumerate(clauses, start=1):
            if _pos(x) in fj.literal_set:
                a_c.append(_cl(_neg(x), _pos(f"c{j}")))
            if _neg(x) in fj.literal_set:
                a_c.append(_cl(_neg(e), _pos(f"c{j}")))
    a_t_f, a_c_f, a_b_f = Formula(a_t), Formula(a_c), Formula(a_b)
    k = 2 * n + formula_size(a_t_f) + formula_size(a_c_f) + formula_size(a_b_f)
    return ReductionInstance(
        input_cnf=renamed, n=n, m=m,
        a_f=Formula(a_f), a_t=a_t_f, a_c=a_c_f, a_b_prime=a_b_f, k=k,
        renaming=tuple(sorted(mapping.items())),
    )


def unsplit_blocking(inst: ReductionInstance) -> Formula:
    """The blocking clauses ``-T | -C | xi | -q`` and ``-T | -C | ei | -q`` before splitting."""
    body = _body(inst.n, inst.m)
    out = []
    for i in range(1, inst.n + 1):
        out.append(Clause(body + [_pos(f"x{i}"), _neg("q")]))
        out.append(Clause(body + [_pos(f"e{i}"), _neg("q")]))
    return Formula(out)


def forget_split_variables(inst: ReductionInstance) -> Formula:
    """Forget every ``ri`` and ``si`` from ``A_B'``."""
    names = [f"{p}{i}" for i in range(1, inst.n + 1) for p in ("r", "s")]
    return forget_variables(inst.a_b_prime, names)


# -- superirredundancy of the fixed part -----------------------------------------

@dataclasses.dataclass(frozen=True)
class FixedClauseCheck:
    clause: Clause
    family: str
    substitution: str
    certificate: Certificate
    first_step_superredundant: bool


@dataclasses.dataclass(frozen=True)
class FixedReport:
    checks: tuple[FixedClauseCheck, ...]

    @property
    def certified(self) -> bool:
        return all(not c.first_step_superredundant for c in self.checks)


def _substitution_for(inst: ReductionInstance, c: Clause, names: frozenset[str]) -> tuple[str, dict[str, bool]] | None:
    n, m = inst.n, inst.m
    xs = [f"x{i}" for i in range(1, n + 1)]
    es = [f"e{i}" for i in range(1, n + 1)]
    ts = [f"t{i}" for i in range(1, n + 1)]
    cs = [f"c{j}" for j in range(1, m + 1)]
    rs = [f"r{i}" for i in range(1, n + 1)]
    ss = [f"s{i}" for i in range(1, n + 1)]
    if c in inst.a_t or c in inst.a_c:
        return "q,r,s=false", {v: False for v in ["q"] + rs + ss}
    if c in inst.a_b_prime and len(c) == 2:
        return "x,e,t,c=true", {v: True for v in xs + es + ts + cs}
    if c in inst.a_b_prime:
        return "all others=false", {v: False for v in sorted(names - c.variables)}
    return None


def verify_fixed_superirredundant(inst: ReductionInstance, clauses: Formula | None = None) -> FixedReport:
    """Certify every clause of ``A_T | A_C | A_B'`` superirredundant in the full instance.

    Each clause gets an explicit substitution chain (validated step by step and
    ending in a formula with no resolving pairs) and is also checked with the
    polynomial first-step test.  Raises ``ReductionError`` on the first failure.
    """
    full = inst.full
    names = full.variables
    checks = []
    for c in (clauses if clauses is not None else inst.fixed).clauses:
        if c not in full:
            raise ReductionError(f"clause {c} is not in the instance", c)
        rule = _substitution_for(inst, c, names)
        cert = None
        label = "search"
        if rule is not None:
            label, assignment = rule
            cert = chain_certificate(full, c, {v: val for v, val in assignment.items() if v in names}, use_pure=False)
        if cert is None:
            cert = prove_superirredundant_by_substitution(full, c)
        if cert is None or not check_certificate(full, c, cert):
            raise ReductionError(f"no superirredundancy certificate for fixed clause {c}", c)
        verdict = check_super_horn_krom(full, c) if full.is_horn() else None
        sr = verdict.superredundant if verdict is not None else False
        if sr:
            raise ReductionError(f"fixed clause {c} is superredundant", c)
        checks.append(FixedClauseCheck(c, inst.family(c), label, cert, sr))
    return FixedReport(tuple(checks))


# -- witnesses and the two-sided check -------------------------------------------

def _normalize_assignment(inst: ReductionInstance, assignment: Mapping[str, bool]) -> dict[str, bool]:
    mapping = dict(inst.renaming)
    out = {}
    for name, value in assignment.items():
        out[mapping.get(name, name)] = bool(value)
    missing = [f"x{i}" for i in range(1, inst.n + 1) if f"x{i}" not in out]
    if missing:
        raise PreconditionError(f"assignment leaves {missing} unassigned")
    return out


def witness_formula(inst: ReductionInstance, assignment: Mapping[str, bool]) -> Formula | None:
    """``A_R' | fixed`` for a satisfying assignment of the input, None otherwise.

    ``A_R'`` holds ``xi | -q`` where the assignment makes ``xi`` true and
    ``ei | -q`` where it makes it false.
    """
    values = _normalize_assignment(inst, assignment)
    if not semantics.evaluate(inst.input_cnf, values):
        return None
    chosen = [
        _cl(_pos(f"x{i}" if values[f"x{i}"] else f"e{i}"), _neg("q"))
        for i in range(1, inst.n + 1)
    ]
    return Formula(chosen) | inst.fixed


def candidate_sets(inst: ReductionInstance) -> list[Formula]:
    """Every ``A_N`` taking one of ``xh | -q``, ``eh | -q``, ``th | -q`` for each index."""
    options = [
        [_cl(_pos(f"{p}{h}"), _neg("q")) for p in ("x", "e", "t")]
        for h in range(1, inst.n + 1)
    ]
    return [Formula(choice) for choice in itertools.product(*options)]


@dataclasses.dataclass(frozen=True)
class ReductionVerification:
    consistent: bool
    satisfiable: bool
    witnesses: tuple[tuple[tuple[str, bool], ...], ...] = ()
    candidates_checked: int = 0
    violation: str | None = None
    offending: Formula | None = None


def verify_reduction(
    inst: ReductionInstance,
    cancel: threading.Event | None = None,
    max_n: int = 3,
    max_m: int = 3,
) -> ReductionVerification:
    """Check both directions of the reduction on a small input.

    Satisfiable input: every satisfying assignment yields a witness of size
    ``k`` equivalent to the instance.  Unsatisfiable input: no candidate
    ``A_N | fixed`` is equivalent to the instance.
    """
    if inst.n > max_n or inst.m > max_m:
        raise PreconditionError(f"instance too large for exhaustive verification (n={inst.n}, m={inst.m})")
    full = inst.full
    xs = [f"x{i}" for i in range(1, inst.n + 1)]
    models = list(semantics.iter_models(inst.input_cnf, xs))
    if models:
        witnesses = []
        for model in models:
            if cancel is not None and cancel.is_set():
                raise Cancelled("verification cancelled")
            w = witness_formula(inst, model)
            key = tuple(sorted(model.items()))
            if w is None:
                return ReductionVerification(False, True, violation=f"no witness for model {dict(key)}")
            if formula_size(w) != inst.k:
                return ReductionVerification(False, True, violation=f"witness size {formula_size(w)} differs from k={inst.k}", offending=w)
            if not semantics.equivalent(w, full):
                return ReductionVerification(False, True, violation="witness is not equivalent to the instance", offending=w)
            witnesses.append(key)
        return ReductionVerification(True, True, witnesses=tuple(witnesses))
    checked = 0
    for a_n in candidate_sets(inst):
        if cancel is not None and cancel.is_set():
            raise Cancelled("verification cancelled")
        checked += 1
        candidate = a_n | inst.fixed
        if semantics.equivalent(candidate, full):
            return ReductionVerification(False, False, candidates_checked=checked,
                                         violation="a candidate of size k is equivalent to the instance", offending=candidate)
    return ReductionVerification(True, False, candidates_checked=checked)
