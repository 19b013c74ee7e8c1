"""Brute-force oracle for minimum-size equivalent CNF formulae.

A minimum formula only contains prime implicates: a non-prime clause could be
replaced by a strictly shorter entailed subclause.  The oracle therefore
treats minimization as weighted set cover: every falsifying assignment of the
input must be falsified by some chosen prime implicate, and the weight of a
clause is its length.  All optimal covers are enumerated, each exactly once.
"""

from __future__ import annotations

import dataclasses
import threading
from typing import Literal as TypingLiteral

from . import limits, semantics
from .cnf import Clause, Formula
from .errors import Cancelled, OracleCapError
from .redundancy import DEGENERATE, check_super_first_step
from .resolution import resolution_closure, subsumption_minimal


@dataclasses.dataclass(frozen=True)
class MinimizationResult:
    min_size: int
    minimal_formulas: tuple[Formula, ...]
    search_space: int
    closure_size: int = 0
    flags: tuple[str, ...] = ()


def _popcount(x: int) -> int:
    return bin(x).count("1")


def minimal_equivalent_formulas(f: Formula, cancel: threading.Event | None = None) -> MinimizationResult:
    """Every minimum-size formula equivalent to ``f``, in canonical order."""
    closure = resolution_closure(f).require_complete()
    cap = limits.current().oracle_cap
    if len(closure) > cap:
        raise OracleCapError(len(closure), cap)
    primes = list(subsumption_minimal(closure.clause_set).clauses)
    names = sorted(f.variables)
    full = (1 << (1 << len(names))) - 1
    countermodels = full ^ semantics.truth_table(f.clause_set, names)
    covers = [full ^ semantics.truth_table([p], names) for p in primes]
    weights = [len(p) for p in primes]

    best = [None]
    found: list[tuple[int, ...]] = []
    nodes = [0]

    def search(uncovered: int, start_excluded: frozenset, chosen: tuple[int, ...], size: int) -> None:
        nodes[0] += 1
        if cancel is not None and cancel.is_set():
            raise Cancelled("minimization cancelled")
        if best[0] is not None and size > best[0]:
            return
        if not uncovered:
            if best[0] is None or size < best[0]:
                best[0] = size
                found.clear()
            found.append(chosen)
            return
        # branch on the uncovered countermodel with the fewest candidate clauses
        pick = None
        options: list[int] = []
        rest = uncovered
        while rest:
            low = rest & -rest
            rest ^= low
            opts = [i for i in range(len(primes)) if i not in start_excluded and covers[i] & low]
            if pick is None or len(opts) < len(options):
                pick, options = low, opts
                if len(opts) <= 1:
                    break
        excluded = set(start_excluded)
        for i in options:
            search(uncovered & ~covers[i], frozenset(excluded), chosen + (i,), size + weights[i])
            excluded.add(i)

    search(countermodels, frozenset(), (), 0)
    minima = sorted(
        (Formula(primes[i] for i in choice) for choice in found),
        key=lambda g: [c.sort_key for c in g.clauses],
    )
    flags = (DEGENERATE,) if closure.has_empty_clause() else ()
    return MinimizationResult(best[0] or 0, tuple(minima), nodes[0], len(closure), flags)


def in_all_minimal(f: Formula, c: Clause, cancel: threading.Event | None = None) -> bool:
    return all(c in g for g in minimal_equivalent_formulas(f, cancel).minimal_formulas)


def certify_minimal(f: Formula) -> TypingLiteral["certified", "unknown"]:
    """``certified`` when every clause is superirredundant; ``unknown`` otherwise."""
    if all(not check_super_first_step(f, c).superredundant for c in f.clause_set):
        return "certified"
    return "unknown"
