"""Resolution: single steps, set resolution, closure, prime implicates, forgetting."""

from __future__ import annotations

import dataclasses
from collections import defaultdict
from functools import lru_cache
from typing import Iterable

from . import limits
from .cnf import Clause, Formula, Literal
from .errors import TruncatedClosureError


def _resolve_raw(a: frozenset, b: frozenset) -> frozenset | None:
    pivot = None
    for lit in a:
        if (lit[0], not lit[1]) in b:
            if pivot is not None:
                return None
            pivot = lit
    if pivot is None:
        return None
    return (a - {pivot}) | (b - {Literal(pivot[0], not pivot[1])})


def resolve_pair(c1: Clause, c2: Clause) -> Clause | None:
    """Resolvent of two clauses, or None.

    Pairs with no clashing literal, or with two or more (whose resolvent would
    be a tautology), do not resolve.
    """
    out = _resolve_raw(c1.literal_set, c2.literal_set)
    return None if out is None else Clause._trusted(out)


def resolve_sets(a: Formula | Iterable[Clause], b: Formula | Iterable[Clause]) -> Formula:
    """All resolvents of one clause of ``a`` with one clause of ``b``."""
    left = a.clause_set if isinstance(a, Formula) else list(a)
    right = b.clause_set if isinstance(b, Formula) else list(b)
    by_literal = defaultdict(list)
    for c in right:
        for lit in c.literal_set:
            by_literal[lit].append(c.literal_set)
    out = set()
    for c in left:
        lits = c.literal_set
        for lit in lits:
            for other in by_literal.get(-lit, ()):
                r = _resolve_raw(lits, other)
                if r is not None:
                    out.add(r)
    return Formula(Clause._trusted(r) for r in out)


@dataclasses.dataclass(frozen=True)
class ClosureResult:
    clauses: Formula
    generation_count: int
    truncated: bool
    budget: int

    def require_complete(self) -> Formula:
        if self.truncated:
            raise TruncatedClosureError(self.budget)
        return self.clauses


def resolution_closure(f: Formula, budget: int | None = None) -> ClosureResult:
    """Every clause derivable from ``f`` by zero or more resolution steps.

    Subsumed clauses are kept; only exact duplicates are merged.  When more
    than ``budget`` clauses would be stored the computation stops and the
    partial result is flagged as truncated.
    """
    if budget is None:
        budget = limits.current().closure_budget
    return _closure_cached(f, budget)


@lru_cache(maxsize=64)
def _closure_cached(f: Formula, budget: int) -> ClosureResult:
    if len(f) > budget:
        return ClosureResult(f, 0, True, budget)
    # clauses become (positive mask, negative mask) pairs over an indexed alphabet
    names = sorted(f.variables)
    bit = {n: 1 << i for i, n in enumerate(names)}
    level: dict[tuple[int, int], int] = {}
    for c in f.clauses:
        pos = neg = 0
        for lit in c.literal_set:
            if lit.positive:
                pos |= bit[lit.name]
            else:
                neg |= bit[lit.name]
        level[(pos, neg)] = 0
    queue = list(level)
    # watchers[i]: processed clauses containing variable i positively / negatively
    with_pos: list[list[tuple[int, int]]] = [[] for _ in names]
    with_neg: list[list[tuple[int, int]]] = [[] for _ in names]
    head = 0
    generations = 0
    truncated = False
    while head < len(queue) and not truncated:
        given = queue[head]
        head += 1
        gp, gn = given
        depth = level[given]
        candidates: list[tuple[int, int]] = []
        for i in range(len(names)):
            b = 1 << i
            if gp & b:
                candidates.extend(with_neg[i])
            elif gn & b:
                candidates.extend(with_pos[i])
        for other in candidates:
            op, on = other
            clash = (gp & on) | (gn & op)
            if clash & (clash - 1):
                continue
            r = ((gp | op) & ~clash, (gn | on) & ~clash)
            if r in level:
                continue
            if len(level) >= budget:
                truncated = True
                break
            d = max(depth, level[other]) + 1
            level[r] = d
            generations = max(generations, d)
            queue.append(r)
        for i in range(len(names)):
            b = 1 << i
            if gp & b:
                with_pos[i].append(given)
            elif gn & b:
                with_neg[i].append(given)
    lits = [(Literal(n, True), Literal(n, False)) for n in names]
    clauses = []
    for pos, neg in level:
        out = []
        for i, (p, q) in enumerate(lits):
            if pos >> i & 1:
                out.append(p)
            elif neg >> i & 1:
                out.append(q)
        clauses.append(Clause._trusted(frozenset(out)))
    return ClosureResult(Formula(clauses), generations, truncated, budget)


def derives(f: Formula, c: Clause, budget: int | None = None) -> bool:
    """Whether ``c`` itself (not merely a subclause) is obtained by resolution from ``f``."""
    if c in f:
        return True
    return c in resolution_closure(f, budget).require_complete()


def subsumption_minimal(clauses: Iterable[Clause]) -> Formula:
    ordered = sorted(set(clauses), key=len)
    kept: list[Clause] = []
    for c in ordered:
        lits = c.literal_set
        if not any(k.literal_set <= lits for k in kept):
            kept.append(c)
    return Formula(kept)


def prime_implicates(f: Formula, budget: int | None = None) -> Formula:
    """Subsumption-minimal clauses of the resolution closure."""
    return subsumption_minimal(resolution_closure(f, budget).require_complete())


def forget_variable(a: Formula, name: str) -> Formula:
    """Eliminate ``name`` by resolving its positive occurrences against its negative ones."""
    pos = Literal(name, True)
    neg = Literal(name, False)
    with_pos = [c for c in a.clause_set if pos in c.literal_set]
    with_neg = [c for c in a.clause_set if neg in c.literal_set]
    rest = [c for c in a.clause_set if pos not in c.literal_set and neg not in c.literal_set]
    return Formula(rest) | resolve_sets(with_pos, with_neg)


def forget_variables(a: Formula, names: Iterable[str]) -> Formula:
    for name in names:
        a = forget_variable(a, name)
    return a
