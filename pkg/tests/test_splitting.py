import random

import pytest

import oracles
from superclause.cnf import Clause, Formula, clause, formula
from superclause.errors import IterationCapError, PreconditionError
from superclause.redundancy import check, check_super_definition, check_super_first_step
from superclause.resolution import forget_variable, forget_variables
from superclause.splitting import (
    FreshNames,
    NoViablePartitionError,
    bipartitions,
    collateral_risk,
    make_superirredundant,
    precheck_make_irredundant,
    split_clause,
)

SPLIT1 = formula("a b c", "-a d", "-c d", "-d a c")
BLOCKED = formula("a b", "-a c", "a -c")
# two long clauses sharing the "a or e" context
DOUBLE = formula("a b d e", "-a b -d e", "a e", "-e -a -d")
DOUBLE_SPLIT = formula("a b y", "-y d e", "-a b x", "-x -d e", "a e", "-e -a -d")


def _p(a, b):
    return clause(a), clause(b)


class TestSplitClause:
    def test_first_literal_split(self):
        g, plan = split_clause(SPLIT1, clause("a b c"), _p("a", "b c"), "x")
        assert g == formula("a x", "-x b c", "-a d", "-c d", "-d a c")
        assert plan.fresh == "x"
        assert plan.half_a == clause("a x") and plan.half_b == clause("-x b c")
        assert forget_variable(g, "x") == SPLIT1

    def test_two_literal_clause(self):
        g, _ = split_clause(formula("a b"), clause("a b"), _p("a", "b"), "x")
        assert g == formula("a x", "b -x")
        assert forget_variable(g, "x") == formula("a b")

    def test_empty_half(self):
        with pytest.raises(PreconditionError):
            split_clause(SPLIT1, clause("a b c"), (clause("a b c"), Clause()))

    def test_mismatched_partition(self):
        with pytest.raises(PreconditionError):
            split_clause(SPLIT1, clause("a b c"), _p("a", "b"))

    def test_clause_missing(self):
        with pytest.raises(PreconditionError):
            split_clause(SPLIT1, clause("a b"), _p("a", "b"))

    def test_fresh_variable_must_be_new(self):
        f = formula("a b", "x")
        with pytest.raises(PreconditionError):
            split_clause(f, clause("a b"), _p("a", "b"), "x")

    def test_default_fresh_names_skip_used(self):
        f = formula("a b", "_s0")
        _, plan = split_clause(f, clause("a b"), _p("a", "b"))
        assert plan.fresh == "_s1"


class TestPrecheck:
    def test_blocked_half(self):
        assert precheck_make_irredundant(BLOCKED, _p("a", "b"))[0] is True

    def test_split1_passes(self):
        assert precheck_make_irredundant(SPLIT1, _p("a", "b c")) == (False, False)
        assert check_super_first_step(SPLIT1 | formula("a"), clause("a")).superirredundant
        assert check_super_first_step(SPLIT1 | formula("b c"), clause("b c")).superirredundant

    def test_nothing_resolves(self):
        assert precheck_make_irredundant(formula("a b"), _p("a", "b")) == (False, False)

    def test_joined_clause_absent(self):
        with pytest.raises(PreconditionError):
            precheck_make_irredundant(Formula(), _p("a b", "c"))

    def test_half_present(self):
        with pytest.raises(PreconditionError):
            precheck_make_irredundant(formula("a b", "a"), _p("a", "b"))


class TestPreconditionCounterexamples:
    # each split precondition dropped in turn: the split half is superredundant
    # while the half alone is not superredundant in F plus the half

    def test_joined_clause_not_in_formula(self):
        split = formula("a b x", "a -x")
        assert check_super_definition(split, clause("a b x")).superredundant
        assert check_super_definition(formula("a b"), clause("a b")).superirredundant

    def test_half_already_in_formula(self):
        split = formula("a b x", "a -x")
        assert check_super_definition(split, clause("a b x")).superredundant
        assert check_super_definition(formula("a b"), clause("a b")).superirredundant

    def test_formula_mentions_variable(self):
        split = formula("x", "a x", "b -x")
        assert check_super_definition(split, clause("a x")).superredundant
        assert check_super_definition(formula("a b", "x", "a"), clause("a")).superirredundant


class TestCollateral:
    def test_double_example_flags_long_clause(self):
        assert collateral_risk(DOUBLE, _p("-a b", "-d e")) == formula("a b d e")

    def test_disjoint(self):
        assert collateral_risk(formula("a b", "c d"), _p("a", "b")) == Formula()

    def test_split1(self):
        f = SPLIT1
        c1, c2 = _p("a", "b c")
        want = Formula(
            d for d in f
            if d != clause("a b c")
            and oracles.resolvent(oracles.raw(d), oracles.raw(c1)) is not None
            and oracles.resolvent(oracles.raw(d), oracles.raw(c2)) is not None
        )
        assert want == Formula()
        assert collateral_risk(f, (c1, c2)) == want


def test_bipartitions_order():
    parts = bipartitions(clause("a b c"))
    assert [(str(x), str(y)) for x, y in parts] == [("a", "b c"), ("a b", "c"), ("a c", "b")]
    assert len(bipartitions(clause("a b c d"))) == 2 ** 3 - 1
    assert bipartitions(clause("a")) == []


class TestMakeSuperirredundant:
    def test_split1(self):
        r = make_superirredundant(SPLIT1, [clause("a b c")])
        assert len(r.plans) == 1
        assert r.formula == formula("_s0 a", "-_s0 b c", "-a d", "-c d", "-d a c")
        assert all(check(r.formula, c, "cross").superirredundant for c in r.formula)
        assert forget_variables(r.formula, r.fresh) == SPLIT1

    def test_blocked(self):
        with pytest.raises(NoViablePartitionError) as info:
            make_superirredundant(BLOCKED, [clause("a b")])
        assert info.value.clause == clause("a b")

    def test_already_superirredundant(self):
        r = make_superirredundant(formula("a b"), [clause("a b")])
        assert r.plans == () and r.formula == formula("a b")

    def test_target_not_in_formula(self):
        with pytest.raises(PreconditionError):
            make_superirredundant(SPLIT1, [clause("z")])

    def test_iteration_cap(self):
        with pytest.raises(IterationCapError):
            make_superirredundant(SPLIT1, [clause("a b c")], max_iterations=0)

    def test_double_explicit_splits(self):
        hints = {clause("-a b -d e"): _p("-a b", "-d e"), clause("a b d e"): _p("a b", "d e")}
        g, first = split_clause(DOUBLE, clause("-a b -d e"), hints[clause("-a b -d e")], "x")
        assert clause("a b d e") in first.collateral
        assert check_super_definition(g, clause("a b d e")).superredundant
        h, _ = split_clause(g, clause("a b d e"), hints[clause("a b d e")], "y")
        assert h == DOUBLE_SPLIT
        assert forget_variables(h, ["x", "y"]) == DOUBLE

    def test_double_is_blocked(self):
        # the half "-d e" is superredundant in DOUBLE plus itself, so every
        # partition of the second long clause leaves a superredundant half
        with pytest.raises(NoViablePartitionError):
            make_superirredundant(DOUBLE, DOUBLE.clauses)


def test_random_splits_preserve_meaning_and_status():
    rng = random.Random(31)
    done = 0
    while done < 60:
        raw = oracles.random_formula(rng, max_vars=5, max_clauses=6)
        f = oracles.cooked(raw)
        long = [c for c in f if len(c) >= 2]
        if not long:
            continue
        c = rng.choice(long)
        parts = bipartitions(c)
        c1, c2 = rng.choice(parts)
        if c1 in f or c2 in f or any(precheck_make_irredundant(f, (c1, c2))):
            continue
        g, plan = split_clause(f, c, (c1, c2), "z")
        assert forget_variable(g, "z") == f
        assert check_super_definition(g, plan.half_a).superirredundant
        assert check_super_definition(g, plan.half_b).superirredundant
        for d in f:
            if d == c or d in plan.collateral:
                continue
            if check_super_definition(f, d).superirredundant:
                assert check_super_definition(g, d).superirredundant
        done += 1


def test_fresh_names_explicit_supply():
    names = FreshNames(names=["x", "y"])
    assert names.take(["x"]) == "y"
    with pytest.raises(PreconditionError):
        names.take()
