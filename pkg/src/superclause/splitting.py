"""Clause splitting on fresh variables.

Splitting ``c1 | c2`` into ``c1 | x`` and ``c2 | -x`` keeps the meaning of the
formula up to forgetting ``x``.  Each half ends up superirredundant unless
``ci`` alone is superredundant in ``F | {ci}``, which ``precheck_make_irredundant``
tests beforehand.  The only other clauses whose superirredundancy the split may
destroy are those resolving with both ``c1`` and ``c2``.
"""

from __future__ import annotations

import dataclasses
import itertools
from typing import Iterable, Iterator, Mapping, Sequence

from .cnf import Clause, Formula, Literal
from .errors import IterationCapError, PreconditionError, SuperclauseError
from .redundancy import check_super_first_step
from .resolution import _resolve_raw

Partition = tuple[Clause, Clause]


class FreshNames:
    """Deterministic supply of variable names: ``_s0``, ``_s1``, ... by default.

    An explicit ``names`` sequence replaces the numbered scheme.  Names
    already used by the formula at hand are skipped.
    """

    def __init__(self, prefix: str = "_s", names: Sequence[str] | None = None):
        self.prefix = prefix
        self._names = list(names) if names is not None else None
        self._next = 0

    def _stream(self) -> Iterator[str]:
        if self._names is not None:
            while self._next < len(self._names):
                yield self._names[self._next]
                self._next += 1
            raise PreconditionError("fresh name supply exhausted")
        while True:
            yield f"{self.prefix}{self._next}"
            self._next += 1

    def take(self, used: Iterable[str] = ()) -> str:
        used = set(used)
        for name in self._stream():
            if name not in used:
                self._next += 1
                return name
        raise AssertionError("unreachable")


@dataclasses.dataclass(frozen=True)
class SplitPlan:
    original: Clause
    half_a: Clause
    half_b: Clause
    fresh: str
    collateral: Formula
    precheck: tuple[bool, bool] | None = None

    @property
    def parts(self) -> Partition:
        x = Literal(self.fresh, True)
        return self.half_a.without(x), self.half_b.without(-x)


class NoViablePartitionError(SuperclauseError):
    def __init__(self, clause: Clause, partial: "FixResult | None" = None):
        self.clause = clause
        self.partial = partial
        super().__init__(f"no viable partition for clause {clause}: every split leaves a superredundant half")


@dataclasses.dataclass(frozen=True)
class FixResult:
    original: Formula
    formula: Formula
    plans: tuple[SplitPlan, ...]
    targets: Formula

    @property
    def fresh(self) -> tuple[str, ...]:
        return tuple(p.fresh for p in self.plans)


def _check_partition(c: Clause, partition: Partition) -> Partition:
    c1, c2 = partition
    if not c1.literal_set or not c2.literal_set:
        raise PreconditionError("both halves of a partition must be nonempty")
    if c1.literal_set & c2.literal_set or c1.literal_set | c2.literal_set != c.literal_set:
        raise PreconditionError(f"partition {c1} / {c2} does not split clause {c} exactly")
    return c1, c2


def _joined(partition: Partition) -> Clause:
    c1, c2 = partition
    return Clause._trusted(c1.literal_set | c2.literal_set)


def collateral_risk(f: Formula, partition: Partition) -> Formula:
    """Clauses other than ``c1 | c2`` resolving with both ``c1`` and ``c2``."""
    whole = _joined(partition)
    if whole not in f:
        raise PreconditionError(f"clause {whole} is not in the formula")
    a, b = partition[0].literal_set, partition[1].literal_set
    return Formula(
        d for d in f.clause_set
        if d != whole and _resolve_raw(d.literal_set, a) is not None and _resolve_raw(d.literal_set, b) is not None
    )


def precheck_make_irredundant(f: Formula, partition: Partition) -> tuple[bool, bool]:
    """For each half ``ci``, whether it is superredundant in ``f | {ci}``.

    A False entry guarantees the corresponding half of the split clause is
    superirredundant after splitting on a fresh variable.
    """
    c1, c2 = partition
    whole = _joined(partition)
    if whole not in f:
        raise PreconditionError(f"the joined clause {whole} is not in the formula")
    for half in (c1, c2):
        if half in f:
            raise PreconditionError(f"the half {half} is already in the formula")
    return tuple(check_super_first_step(f.with_clause(h), h).superredundant for h in (c1, c2))


def split_clause(f: Formula, c: Clause, partition: Partition, fresh: str | FreshNames | None = None) -> tuple[Formula, SplitPlan]:
    """Replace ``c`` by ``c1 | x`` and ``c2 | -x`` on a variable ``x`` not in ``f``."""
    if c not in f:
        raise PreconditionError(f"clause {c} is not in the formula")
    c1, c2 = _check_partition(c, partition)
    if fresh is None:
        fresh = FreshNames()
    name = fresh.take(f.variables) if isinstance(fresh, FreshNames) else fresh
    if name in f.variables:
        raise PreconditionError(f"variable {name} already occurs in the formula")
    x = Literal(name, True)
    half_a = Clause._trusted(c1.literal_set | {x})
    half_b = Clause._trusted(c2.literal_set | {-x})
    plan = SplitPlan(c, half_a, half_b, name, collateral_risk(f, (c1, c2)))
    return f.without(c).with_clause(half_a, half_b), plan


def bipartitions(c: Clause) -> list[Partition]:
    """Nonempty bipartitions with the first literal in the first half.

    Ordered by the size of the first half, then by its literals; the first
    entry is the first literal alone against the rest.
    """
    lits = c.literals
    if len(lits) < 2:
        return []
    head, rest = lits[0], lits[1:]
    out = []
    for size in range(0, len(rest)):
        for extra in itertools.combinations(rest, size):
            first = frozenset((head,) + extra)
            out.append((Clause._trusted(first), Clause._trusted(c.literal_set - first)))
    return out


def choose_partition(f: Formula, c: Clause, hint: Partition | None = None) -> tuple[Partition, tuple[bool, bool]] | None:
    candidates = bipartitions(c)
    if hint is not None:
        hint = _check_partition(c, hint)
        candidates = [hint] + [p for p in candidates if set(p) != set(hint)]
    for c1, c2 in candidates:
        if c1 in f or c2 in f:
            continue
        verdict = precheck_make_irredundant(f, (c1, c2))
        if not any(verdict):
            return (c1, c2), verdict
    return None


def make_superirredundant(
    f: Formula,
    targets: Formula | Iterable[Clause],
    fresh_names: FreshNames | None = None,
    partition_hints: Mapping[Clause, Partition] | None = None,
    max_iterations: int | None = None,
) -> FixResult:
    """Split superredundant targets until every target, or its split halves, is superirredundant.

    Each round re-checks every tracked clause (targets still present plus the
    halves of earlier splits) and splits the first superredundant one in
    canonical order.  Splits may break clauses that resolve with both halves;
    the re-check catches those.  Raises ``NoViablePartitionError`` when no
    bipartition of a clause passes the precheck and ``IterationCapError`` after
    ``4 * len(targets)`` splits.
    """
    targets = Formula(targets)
    for t in targets:
        if t not in f:
            raise PreconditionError(f"target {t} is not in the formula")
    fresh_names = fresh_names or FreshNames()
    hints = dict(partition_hints or {})
    cap = max_iterations if max_iterations is not None else 4 * len(targets)
    tracked = set(targets.clause_set)
    current = f
    plans: list[SplitPlan] = []
    while True:
        pending = [c for c in sorted(tracked, key=lambda d: d.sort_key)
                   if check_super_first_step(current, c).superredundant]
        if not pending:
            return FixResult(f, current, tuple(plans), targets)
        c = pending[0]
        if len(plans) >= cap:
            raise IterationCapError(f"split limit of {cap} reached with clause {c} still superredundant")
        choice = choose_partition(current, c, hints.get(c))
        if choice is None:
            raise NoViablePartitionError(c, FixResult(f, current, tuple(plans), targets))
        partition, verdict = choice
        current, plan = split_clause(current, c, partition, fresh_names)
        plans.append(dataclasses.replace(plan, precheck=verdict))
        tracked.discard(c)
        tracked.update((plan.half_a, plan.half_b))
