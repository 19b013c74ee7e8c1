import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from superclause.cnf import (
    Clause,
    Formula,
    Literal,
    clause,
    clauses_with_literal,
    formula,
    formula_size,
    parse,
    serialize,
    subsumes,
    substitute,
)
from superclause.errors import ParseError, TautologyError

lit_st = st.tuples(st.sampled_from("abcdef"), st.booleans())


@st.composite
def formulas(draw, names="abcdef", max_clauses=8):
    out = []
    for _ in range(draw(st.integers(0, max_clauses))):
        vs = draw(st.lists(st.sampled_from(names), min_size=1, max_size=4, unique=True))
        out.append(Clause(Literal(v, draw(st.booleans())) for v in vs))
    return Formula(out)


class TestParse:
    def test_named(self):
        assert parse("a\n-a b\n-b a\n") == formula("a", "-a b", "-b a")

    def test_dimacs(self):
        f = parse("p cnf 2 2\n1 2 0\n-1 -2 0\n", "dimacs")
        assert f == formula("x1 x2", "-x1 -x2")

    def test_tautology_rejected(self):
        with pytest.raises(TautologyError) as info:
            parse("b\na -a\n")
        assert info.value.line == 2

    def test_syntax_error_position(self):
        with pytest.raises(ParseError) as info:
            parse("a b\nc -\n")
        assert (info.value.line, info.value.column) == (2, 3)

    def test_bang_negation_and_comments(self):
        assert parse("# header\n!a b  # trailing\n\n") == formula("-a b")

    def test_empty_clause_token(self):
        f = parse("[]\na\n")
        assert Clause() in f and f.has_empty_clause()

    def test_dimacs_percent_tail(self):
        f = parse("c hi\np cnf 2 1\n1 -2 0\n%\n0\n", "dimacs")
        assert f == formula("x1 -x2")

    def test_dimacs_missing_header(self):
        with pytest.raises(ParseError):
            parse("1 2 0\n", "dimacs")

    def test_dimacs_variable_out_of_range(self):
        with pytest.raises(ParseError):
            parse("p cnf 1 1\n1 2 0\n", "dimacs")


class TestSerialize:
    def test_named(self):
        assert serialize(formula("a b")) == "a b\n"

    def test_dimacs_empty_formula(self):
        assert serialize(Formula(), "dimacs") == "p cnf 0 0\n"

    def test_dimacs_unit(self):
        assert serialize(formula("-x1"), "dimacs") == "p cnf 1 1\n-1 0\n"

    def test_dimacs_names_are_mapped(self):
        text = serialize(formula("b -a", "c"), "dimacs")
        assert "c map 1 a" in text
        assert parse(text, "dimacs") == formula("b -a", "c")

    @settings(max_examples=200, deadline=None)
    @given(formulas(), st.sampled_from(["named", "dimacs"]))
    def test_round_trip(self, f, fmt):
        assert parse(serialize(f, fmt), fmt) == f


def test_size():
    assert formula_size(formula("a", "-a b", "a -b")) == 5
    assert formula_size(Formula()) == 0
    assert formula_size(formula("a", "b")) == 2


def test_clauses_with_literal():
    f = formula("a x", "b -x", "c")
    assert clauses_with_literal(f, Literal("x")) == formula("a x")
    assert clauses_with_literal(f, Literal("x", False)) == formula("b -x")
    assert clauses_with_literal(formula("a"), Literal("b")) == Formula()


class TestSubstitute:
    def test_first_chain(self):
        f = formula("a b", "b c", "-b -d", "-c d e")
        g = substitute(substitute(f, "c", True), "d", False)
        assert g == formula("a b", "e")

    def test_second_chain(self):
        f = formula("a b", "-a c d", "-b -c -f", "-d f g", "d h")
        g = substitute(substitute(f, "c", True), "f", False)
        assert g == formula("a b", "-d g", "d h")

    def test_unit_becomes_empty_formula(self):
        assert substitute(formula("x"), "x", True) == Formula()

    def test_falsified_unit_leaves_empty_clause(self):
        assert substitute(formula("x"), "x", False) == Formula([Clause()])

    @settings(max_examples=200, deadline=None)
    @given(formulas(), st.sampled_from("abcdef"), st.booleans())
    def test_never_mentions_variable(self, f, x, v):
        g = substitute(f, x, v)
        assert x not in g.variables
        assert formula_size(g) <= formula_size(f)


def test_subsumes():
    assert subsumes(clause("a b"), clause("a b c"))
    assert not subsumes(clause("a b"), clause("a c"))
    assert subsumes(clause("c"), clause("c"))


def test_canonical_order_negative_first_on_ties():
    f = formula("x1 x2", "-x1 -x2", "a")
    assert [str(c) for c in f.clauses] == ["a", "-x1 -x2", "x1 x2"]


def test_formula_is_a_set():
    assert formula("a b", "b a") == formula("a b")
    assert len(formula("a b", "b a")) == 1


def test_oracle_conversion_round_trip():
    rng = random.Random(3)
    for _ in range(50):
        raw = oracles.random_formula(rng)
        assert oracles.raw(oracles.cooked(raw)) == raw
