import random
import threading

import pytest

import oracles
from superclause import limits
from superclause.cnf import Clause, Formula, clause, formula
from superclause.errors import Cancelled, OracleCapError
from superclause.minimality import certify_minimal, in_all_minimal, minimal_equivalent_formulas
from superclause.redundancy import check
from superclause.resolution import resolution_closure
from superclause.semantics import equivalent

CEX = formula("a", "-a b", "a -b")
CYCLE = formula("-a b", "-b c", "-c a")


class TestMinimalFormulas:
    def test_counterexample(self):
        r = minimal_equivalent_formulas(CEX)
        assert r.min_size == 2
        assert r.minimal_formulas == (formula("a", "b"),)

    def test_cycle(self):
        r = minimal_equivalent_formulas(CYCLE)
        assert r.min_size == 6
        assert CYCLE in r.minimal_formulas
        assert formula("-a c", "-c b", "-b a") in r.minimal_formulas

    def test_trivial(self):
        r = minimal_equivalent_formulas(formula("a", "b"))
        assert (r.min_size, r.minimal_formulas) == (2, (formula("a", "b"),))

    def test_unsatisfiable_is_degenerate(self):
        r = minimal_equivalent_formulas(formula("a", "-a"))
        assert r.min_size == 0
        assert r.minimal_formulas == (Formula([Clause()]),)
        assert r.flags

    def test_empty_formula(self):
        r = minimal_equivalent_formulas(Formula())
        assert (r.min_size, r.minimal_formulas) == (0, (Formula(),))

    def test_oracle_cap(self):
        f = Formula(Clause([f"a{i}", f"b{i}"]) for i in range(3)) | formula("-a0 -a1 -a2")
        with limits.limits(oracle_cap=5):
            with pytest.raises(OracleCapError):
                minimal_equivalent_formulas(f)

    def test_cancellation(self):
        token = threading.Event()
        token.set()
        with pytest.raises(Cancelled):
            minimal_equivalent_formulas(CYCLE, cancel=token)

    def test_matches_subset_enumeration(self):
        rng = random.Random(41)
        checked = 0
        while checked < 80:
            raw = oracles.random_formula(rng, max_vars=4, max_clauses=5, max_len=3)
            if len(oracles.closure(raw)) > 12:
                continue
            best, found = oracles.minima(raw)
            r = minimal_equivalent_formulas(oracles.cooked(raw))
            assert r.min_size == best
            assert {oracles.raw(g) for g in r.minimal_formulas} == set(found)
            checked += 1

    def test_minima_are_equivalent_closure_subsets(self):
        rng = random.Random(42)
        for _ in range(60):
            f = oracles.cooked(oracles.random_formula(rng, max_vars=5, max_clauses=6))
            cl = resolution_closure(f).clauses
            if len(cl) > 18:
                continue
            r = minimal_equivalent_formulas(f)
            for g in r.minimal_formulas:
                assert g <= cl
                assert g.size == r.min_size
                assert equivalent(f, g)


class TestInAllMinimal:
    def test_superredundant_yet_in_every_minimum(self):
        assert check(CEX, clause("a")).superredundant
        assert in_all_minimal(CEX, clause("a"))

    def test_absent_from_some_minimum(self):
        assert not in_all_minimal(formula("a", "-a b", "-b a"), clause("-a b"))

    def test_trivial(self):
        assert in_all_minimal(formula("a", "b"), clause("a"))


class TestCertify:
    def test_certified(self):
        assert certify_minimal(formula("a", "b")) == "certified"
        assert certify_minimal(formula("a x", "-x b c", "-a d", "-c d", "-d a c")) == "certified"

    def test_unknown_for_minimal_cycle(self):
        assert certify_minimal(CYCLE) == "unknown"
        assert minimal_equivalent_formulas(CYCLE).min_size == CYCLE.size

    def test_certified_means_minimum_size(self):
        rng = random.Random(43)
        for _ in range(100):
            f = oracles.cooked(oracles.random_formula(rng, max_vars=5, max_clauses=6))
            if len(resolution_closure(f).clauses) > 18:
                continue
            if certify_minimal(f) == "certified":
                assert minimal_equivalent_formulas(f).min_size == f.size
