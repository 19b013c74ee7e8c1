"""Semantic oracle: evaluation, satisfiability, entailment and equivalence.

Three decision paths are available:

* truth tables, computed bit-parallel in Python integers (one bit per
  assignment), limited to ``limits.current().max_vars`` variables;
* unit propagation, complete for Horn clause sets;
* implication-graph strongly connected components, complete for Krom
  (at most two literals per clause) clause sets.

``entails(f, g)`` checks each clause ``c`` of ``g`` by refuting ``f`` under the
assignment that falsifies ``c``; the reduced set stays Horn (resp. Krom) when
``f`` is, so the polynomial paths apply directly.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from . import limits
from .cnf import Clause, Formula, Literal
from .errors import PreconditionError, VariableCapError

METHODS = ("auto", "truth-table", "horn", "krom")


def evaluate(f: Formula | Clause, assignment: Mapping[str, bool]) -> bool:
    clauses = [f] if isinstance(f, Clause) else f.clause_set
    try:
        return all(any(assignment[l.name] == l.positive for l in c.literal_set) for c in clauses)
    except KeyError as exc:
        raise PreconditionError(f"variable {exc.args[0]!r} is not assigned") from None


# -- truth tables ---------------------------------------------------------------

@lru_cache(maxsize=64)
def _variable_masks(count: int) -> tuple[int, ...]:
    """Bit ``a`` of mask ``i`` is set when assignment number ``a`` makes variable ``i`` true."""
    total = 1 << count
    masks = []
    for i in range(count):
        width = 1 << i
        block = ((1 << width) - 1) << width
        span = width << 1
        while span < total:
            block |= block << span
            span <<= 1
        masks.append(block)
    return tuple(masks)


def truth_table(clauses: Iterable[Clause], variables: list[str]) -> int:
    """Bitmask of the assignments (indexed over ``variables``) satisfying every clause."""
    count = len(variables)
    cap = limits.current().max_vars
    if count > cap:
        raise VariableCapError(count, cap)
    masks = _variable_masks(count)
    full = (1 << (1 << count)) - 1
    position = {name: i for i, name in enumerate(variables)}
    table = full
    for c in clauses:
        cmask = 0
        for lit in c.literal_set:
            m = masks[position[lit.name]]
            cmask |= m if lit.positive else full ^ m
        table &= cmask
        if not table:
            break
    return table


def _tt_satisfiable(clauses: list[frozenset]) -> bool:
    names = sorted({l.name for c in clauses for l in c})
    return truth_table((Clause._trusted(c) for c in clauses), names) != 0


# -- Horn: unit propagation -----------------------------------------------------

def _horn_satisfiable(clauses: list[frozenset]) -> bool:
    remaining = []
    heads = []
    watchers = defaultdict(list)
    queue = []
    for idx, c in enumerate(clauses):
        head = None
        negs = 0
        for lit in c:
            if lit.positive:
                if head is not None:
                    raise PreconditionError("unit propagation needs Horn clauses")
                head = lit.name
            else:
                negs += 1
                watchers[lit.name].append(idx)
        heads.append(head)
        remaining.append(negs)
        if negs == 0:
            if head is None:
                return False
            queue.append(head)
    true = set()
    while queue:
        name = queue.pop()
        if name in true:
            continue
        true.add(name)
        for idx in watchers.get(name, ()):
            remaining[idx] -= 1
            if remaining[idx] == 0:
                if heads[idx] is None:
                    return False
                queue.append(heads[idx])
    return True


# -- Krom: implication graph ----------------------------------------------------

def _krom_satisfiable(clauses: list[frozenset]) -> bool:
    graph = defaultdict(list)
    nodes = set()
    for c in clauses:
        lits = list(c)
        if len(lits) > 2:
            raise PreconditionError("implication graph needs clauses of at most two literals")
        if not lits:
            return False
        a = lits[0]
        b = lits[1] if len(lits) == 2 else lits[0]
        graph[-a].append(b)
        graph[-b].append(a)
        nodes.update((a, -a, b, -b))
    component = _strongly_connected(nodes, graph)
    return all(component[lit] != component[-lit] for lit in nodes)


def _strongly_connected(nodes, graph) -> dict:
    """Iterative Tarjan; returns node -> component id."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comp = {}
    counter = itertools.count()
    comp_id = itertools.count()
    for root in sorted(nodes):
        if root in index:
            continue
        work = [(root, iter(graph.get(root, ())))]
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = next(counter)
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(graph.get(child, ()))))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                cid = next(comp_id)
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    comp[member] = cid
                    if member == node:
                        break
    return comp


# -- public API -----------------------------------------------------------------

def _pick(clauses: list[frozenset], method: str):
    if method == "truth-table":
        return _tt_satisfiable
    if method == "horn":
        return _horn_satisfiable
    if method == "krom":
        return _krom_satisfiable
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if all(sum(1 for l in c if l.positive) <= 1 for c in clauses):
        return _horn_satisfiable
    if all(len(c) <= 2 for c in clauses):
        return _krom_satisfiable
    return _tt_satisfiable


def _raw(f: Formula | Iterable[Clause]) -> list[frozenset]:
    clauses = f.clause_set if isinstance(f, Formula) else f
    return [c.literal_set for c in clauses]


def satisfiable(f: Formula | Iterable[Clause], method: str = "auto") -> bool:
    clauses = _raw(f)
    return _pick(clauses, method)(clauses)


def _reduce_under(clauses: list[frozenset], falsified: frozenset) -> list[frozenset] | None:
    """Simplify ``clauses`` by making every literal in ``falsified`` false."""
    out = []
    for c in clauses:
        if any(-lit in falsified for lit in c):
            continue
        out.append(c - falsified if c & falsified else c)
    return out


def entails_clause(f: Formula | Iterable[Clause], c: Clause, method: str = "auto") -> bool:
    clauses = _raw(f)
    decide = _pick(clauses, method)
    reduced = _reduce_under(clauses, c.literal_set)
    return not decide(reduced)


def entails(f: Formula | Iterable[Clause], g: Formula | Iterable[Clause] | Clause, method: str = "auto") -> bool:
    """True when every model of ``f`` satisfies ``g``."""
    clauses = _raw(f)
    decide = _pick(clauses, method)
    targets = [g] if isinstance(g, Clause) else (g.clause_set if isinstance(g, Formula) else g)
    for c in targets:
        if decide(_reduce_under(clauses, c.literal_set)):
            return False
    return True


def equivalent(f: Formula, g: Formula, method: str = "auto") -> bool:
    return entails(f, g, method) and entails(g, f, method)


def iter_models(f: Formula, variables: Iterable[str] | None = None) -> Iterator[dict[str, bool]]:
    """Enumerate the models of ``f`` over ``variables`` (default: the variables of ``f``)."""
    names = sorted(set(variables) if variables is not None else f.variables)
    missing = f.variables - set(names)
    if missing:
        raise PreconditionError(f"variables {sorted(missing)} are not in the enumeration universe")
    table = truth_table(f.clause_set, names)
    while table:
        low = table & -table
        index = low.bit_length() - 1
        yield {name: bool(index >> i & 1) for i, name in enumerate(names)}
        table ^= low


def model_set(f: Formula, variables: Iterable[str]) -> frozenset[tuple[bool, ...]]:
    names = sorted(variables)
    return frozenset(tuple(m[n] for n in names) for m in iter_models(f, names))
