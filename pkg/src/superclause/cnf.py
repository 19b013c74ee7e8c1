"""Propositional CNF data model: literals, clauses, formulae and their file formats.

Variables are plain strings.  Clauses are immutable literal sets that never
contain a literal together with its negation; formulae are immutable clause
sets.  Both iterate in a canonical order, so structural equality is set
equality and output is deterministic.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, NamedTuple

from .errors import ParseError, TautologyError


class Literal(NamedTuple):
    name: str
    positive: bool = True

    def __neg__(self) -> Literal:
        return Literal(self.name, not self.positive)

    negate = __neg__

    def __str__(self) -> str:
        return self.name if self.positive else "-" + self.name

    @classmethod
    def parse(cls, token: str) -> Literal:
        if token[:1] in ("-", "!"):
            return cls(_check_name(token[1:]), False)
        return cls(_check_name(token), True)


EMPTY_CLAUSE_TOKEN = "[]"


def _check_name(name: str) -> str:
    if not name or name[0] in "-!" or any(ch.isspace() for ch in name) or name == EMPTY_CLAUSE_TOKEN:
        raise ValueError(f"invalid variable name {name!r}")
    return name


def _negation(lit: Literal) -> Literal:
    return Literal(lit[0], not lit[1])


class Clause:
    """A non-tautological disjunction of literals, stored as a set."""

    __slots__ = ("_lits", "_ordered", "_hash", "_key")

    def __init__(self, literals: Iterable[Literal | str] = ()):
        lits = frozenset(lit if isinstance(lit, Literal) else Literal.parse(lit) for lit in literals)
        for lit in lits:
            if _negation(lit) in lits:
                raise TautologyError(sorted(lits))
        self._set(lits)

    @classmethod
    def _trusted(cls, lits: frozenset) -> Clause:
        # caller guarantees ``lits`` is a tautology-free frozenset of Literal
        obj = cls.__new__(cls)
        obj._set(lits)
        return obj

    def _set(self, lits: frozenset) -> None:
        self._lits = lits
        self._ordered = None
        self._hash = hash(lits)
        self._key = None

    @classmethod
    def parse(cls, text: str) -> Clause:
        """Clause from named-format text such as ``"a -b c"`` (``"[]"`` is the empty clause)."""
        tokens = text.split()
        if tokens == [EMPTY_CLAUSE_TOKEN]:
            return cls()
        return cls(Literal.parse(tok) for tok in tokens)

    @property
    def literal_set(self) -> frozenset:
        return self._lits

    @property
    def literals(self) -> tuple[Literal, ...]:
        if self._ordered is None:
            self._ordered = tuple(sorted(self._lits))
        return self._ordered

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(lit.name for lit in self._lits)

    @property
    def sort_key(self):
        # formula order: by the tuple of variable names, negative literals first on ties
        if self._key is None:
            lits = self.literals
            self._key = (tuple(l.name for l in lits), tuple(l.positive for l in lits))
        return self._key

    def is_horn(self) -> bool:
        return sum(1 for lit in self._lits if lit.positive) <= 1

    def is_krom(self) -> bool:
        return len(self._lits) <= 2

    def is_empty(self) -> bool:
        return not self._lits

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self._lits)

    def __contains__(self, lit) -> bool:
        if isinstance(lit, str):
            lit = Literal.parse(lit)
        return lit in self._lits

    def __eq__(self, other) -> bool:
        if not isinstance(other, Clause):
            return NotImplemented
        return self._hash == other._hash and self._lits == other._lits

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: Clause) -> bool:
        return self.sort_key < other.sort_key

    def __le__(self, other: Clause) -> bool:
        return self.sort_key <= other.sort_key

    def issubset(self, other: Clause) -> bool:
        return self._lits <= other._lits

    def union(self, *others: Clause | Iterable[Literal]) -> Clause:
        lits = set(self._lits)
        for other in others:
            lits.update(other.literal_set if isinstance(other, Clause) else other)
        return Clause(lits)

    def without(self, *lits: Literal) -> Clause:
        return Clause._trusted(self._lits.difference(lits))

    def __str__(self) -> str:
        if not self._lits:
            return EMPTY_CLAUSE_TOKEN
        return " ".join(str(lit) for lit in self.literals)

    def __repr__(self) -> str:
        return f"Clause({str(self)!r})"


def subsumes(c1: Clause, c2: Clause) -> bool:
    """True when every literal of ``c1`` occurs in ``c2``."""
    return c1.literal_set <= c2.literal_set


class Formula:
    """A finite set of clauses, read conjunctively."""

    __slots__ = ("_clauses", "_ordered", "_hash")

    def __init__(self, clauses: Iterable[Clause | str] = ()):
        self._clauses = frozenset(c if isinstance(c, Clause) else Clause.parse(c) for c in clauses)
        self._ordered = None
        self._hash = hash(self._clauses)

    @classmethod
    def of(cls, *clauses: Clause | str) -> Formula:
        return cls(clauses)

    @property
    def clause_set(self) -> frozenset[Clause]:
        return self._clauses

    @property
    def clauses(self) -> tuple[Clause, ...]:
        if self._ordered is None:
            self._ordered = tuple(sorted(self._clauses, key=lambda c: c.sort_key))
        return self._ordered

    @property
    def variables(self) -> frozenset[str]:
        names = set()
        for c in self._clauses:
            names.update(lit.name for lit in c.literal_set)
        return frozenset(names)

    @property
    def size(self) -> int:
        return formula_size(self)

    def is_horn(self) -> bool:
        return all(c.is_horn() for c in self._clauses)

    def is_krom(self) -> bool:
        return all(c.is_krom() for c in self._clauses)

    def has_empty_clause(self) -> bool:
        return any(not c.literal_set for c in self._clauses)

    def literals(self) -> frozenset[Literal]:
        out = set()
        for c in self._clauses:
            out.update(c.literal_set)
        return frozenset(out)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self._clauses)

    def __getitem__(self, index: int) -> Clause:
        return self.clauses[index]

    def index(self, clause: Clause) -> int:
        return self.clauses.index(clause)

    def __contains__(self, clause) -> bool:
        if isinstance(clause, str):
            clause = Clause.parse(clause)
        return clause in self._clauses

    def __eq__(self, other) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return self._hash == other._hash and self._clauses == other._clauses

    def __hash__(self) -> int:
        return self._hash

    def __or__(self, other: Formula | Iterable[Clause]) -> Formula:
        extra = other.clause_set if isinstance(other, Formula) else frozenset(other)
        return Formula(self._clauses | extra)

    def __sub__(self, other: Formula | Iterable[Clause]) -> Formula:
        extra = other.clause_set if isinstance(other, Formula) else frozenset(other)
        return Formula(self._clauses - extra)

    def __le__(self, other: Formula) -> bool:
        return self._clauses <= other._clauses

    def with_clause(self, *clauses: Clause) -> Formula:
        return Formula(self._clauses.union(clauses))

    def without(self, *clauses: Clause) -> Formula:
        return Formula(self._clauses.difference(clauses))

    def __str__(self) -> str:
        return "{" + ", ".join(str(c) for c in self.clauses) + "}"

    def __repr__(self) -> str:
        return f"Formula({[str(c) for c in self.clauses]!r})"


def clause(text: str) -> Clause:
    """Shorthand for :meth:`Clause.parse`."""
    return Clause.parse(text)


def formula(*clauses: str | Clause) -> Formula:
    """Shorthand: ``formula("a", "-a b")``."""
    return Formula(clauses)


def formula_size(f: Formula) -> int:
    """Number of literal occurrences."""
    return sum(len(c) for c in f.clause_set)


def clauses_with_literal(f: Formula, lit: Literal) -> Formula:
    return Formula(c for c in f.clause_set if lit in c.literal_set)


def substitute(f: Formula, name: str, value: bool) -> Formula:
    """Replace variable ``name`` by a truth value and simplify.

    Satisfied clauses are dropped and the falsified literal is deleted from the
    rest; a clause may shrink to the empty clause.
    """
    sat = Literal(name, value)
    unsat = Literal(name, not value)
    out = []
    for c in f.clause_set:
        lits = c.literal_set
        if sat in lits:
            continue
        out.append(Clause._trusted(lits - {unsat}) if unsat in lits else c)
    return Formula(out)


def rename(f: Formula, mapping: dict[str, str]) -> Formula:
    return Formula(
        Clause._trusted(frozenset(Literal(mapping.get(l.name, l.name), l.positive) for l in c.literal_set))
        for c in f.clause_set
    )


# -- file formats -------------------------------------------------------------

FORMATS = ("named", "dimacs")
_DIMACS_NAME = re.compile(r"x([1-9][0-9]*)")


def parse(text: str, format: str = "named") -> Formula:
    if format == "named":
        return _parse_named(text)
    if format == "dimacs":
        return _parse_dimacs(text)
    raise ValueError(f"unknown format {format!r}")


def _parse_named(text: str) -> Formula:
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = list(re.finditer(r"\S+", line))
        if len(tokens) == 1 and tokens[0].group() == EMPTY_CLAUSE_TOKEN:
            clauses.append(Clause())
            continue
        lits = []
        for match in tokens:
            try:
                lits.append(Literal.parse(match.group()))
            except ValueError as exc:
                raise ParseError(str(exc), lineno, match.start() + 1) from None
        try:
            clauses.append(Clause(lits))
        except TautologyError as exc:
            raise TautologyError(exc.literals, line=lineno) from None
    return Formula(clauses)


def _parse_dimacs(text: str) -> Formula:
    header = None
    numbered: list[tuple[list[int], int]] = []
    names: dict[int, str] = {}
    current: list[int] = []
    start_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("%"):
            break
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 4 and parts[:2] == ["c", "map"]:
                try:
                    names[int(parts[2])] = _check_name(parts[3])
                except ValueError:
                    raise ParseError("malformed variable map comment", lineno) from None
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise ParseError("duplicate problem line", lineno, 1)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("expected 'p cnf <vars> <clauses>'", lineno, 1)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError("non-integer counts in problem line", lineno, 1) from None
            continue
        if header is None:
            raise ParseError("clause before 'p cnf' header", lineno, 1)
        for match in re.finditer(r"\S+", raw):
            try:
                value = int(match.group())
            except ValueError:
                raise ParseError(f"invalid literal {match.group()!r}", lineno, match.start() + 1) from None
            if abs(value) > header[0]:
                raise ParseError(f"variable {abs(value)} exceeds declared count {header[0]}", lineno, match.start() + 1)
            if value == 0:
                numbered.append((current, start_line or lineno))
                current, start_line = [], None
            else:
                if start_line is None:
                    start_line = lineno
                current.append(value)
    if header is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        numbered.append((current, start_line))
    clauses = []
    for values, lineno in numbered:
        lits = [Literal(names.get(abs(v), f"x{abs(v)}"), v > 0) for v in values]
        try:
            clauses.append(Clause(lits))
        except TautologyError as exc:
            raise TautologyError(exc.literals, line=lineno) from None
    return Formula(clauses)


def dimacs_numbering(f: Formula) -> dict[str, int]:
    """Variable numbering used for DIMACS output.

    Names of the form ``x<k>`` keep their number; any other name set is
    numbered lexicographically from 1.
    """
    names = sorted(f.variables)
    matches = [_DIMACS_NAME.fullmatch(n) for n in names]
    if all(matches):
        return {n: int(m.group(1)) for n, m in zip(names, matches)}
    return {n: i for i, n in enumerate(names, start=1)}


def serialize(f: Formula, format: str = "named", comments: Iterable[str] = ()) -> str:
    if format == "named":
        lines = [f"# {c}" for c in comments]
        lines += [str(c) for c in f.clauses]
        return "".join(line + "\n" for line in lines)
    if format == "dimacs":
        numbering = dimacs_numbering(f)
        lines = [f"c {c}" for c in comments]
        if any(not _DIMACS_NAME.fullmatch(n) for n in numbering):
            lines += [f"c map {i} {n}" for n, i in sorted(numbering.items(), key=lambda kv: kv[1])]
        top = max(numbering.values(), default=0)
        lines.append(f"p cnf {top} {len(f)}")
        for c in f.clauses:
            nums = [str(numbering[l.name] if l.positive else -numbering[l.name]) for l in c]
            lines.append(" ".join(nums + ["0"]))
        return "".join(line + "\n" for line in lines)
    raise ValueError(f"unknown format {format!r}")
