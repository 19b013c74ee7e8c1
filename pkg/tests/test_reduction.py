import dataclasses
import random
import threading

import pytest

import oracles
from superclause import limits
from superclause.cnf import Clause, Formula, clause, formula, formula_size
from superclause.errors import Cancelled, PreconditionError
from superclause.minimality import minimal_equivalent_formulas
from superclause.reduction import (
    ReductionError,
    ReductionInstance,
    build_reduction,
    candidate_sets,
    forget_split_variables,
    unsplit_blocking,
    verify_fixed_superirredundant,
    verify_reduction,
    witness_formula,
)
from superclause.semantics import equivalent

XOR = formula("x1 x2", "-x1 -x2")


def _k(inst):
    return 2 * inst.n + sum(len(c) for part in (inst.a_t, inst.a_c, inst.a_b_prime) for c in part)


class TestBuild:
    def test_xor_a_c(self):
        inst = build_reduction(XOR)
        assert inst.a_c == formula("-x1 c1", "-x2 c1", "-e1 c2", "-e2 c2")

    def test_single_unit(self):
        inst = build_reduction(formula("x1"))
        assert (inst.n, inst.m) == (1, 1)
        assert inst.a_f == formula("x1 -q", "e1 -q")
        assert inst.a_t == formula("-x1 t1", "-e1 t1")
        assert inst.a_c == formula("-x1 c1")
        assert inst.a_b_prime == formula("-t1 -c1 x1 -r1", "r1 -q", "-t1 -c1 e1 -s1", "s1 -q")
        assert inst.k == 2 + 4 + 2 + 12 == _k(inst)

    def test_horn_from_non_horn(self):
        inst = build_reduction(formula("x1 x2"))
        assert inst.full.is_horn()

    def test_renaming_by_first_occurrence(self):
        inst = build_reduction(formula("b -a", "c"))
        assert dict(inst.renaming) == {"a": "x1", "b": "x2", "c": "x3"}
        assert inst.input_cnf == formula("x2 -x1", "x3")

    def test_rejects_empty(self):
        with pytest.raises(PreconditionError):
            build_reduction(Formula())
        with pytest.raises(PreconditionError):
            build_reduction(Formula([Clause()]))

    def test_random_invariants(self):
        rng = random.Random(51)
        for _ in range(100):
            inst = build_reduction(oracles.cooked(oracles.random_formula(rng, max_vars=4, max_clauses=4)))
            assert inst.full.is_horn()
            assert inst.k == _k(inst)
            for i in range(1, inst.n + 1):
                for j, fj in enumerate(inst.input_clauses, start=1):
                    names = {str(l) for l in fj}
                    assert (clause(f"-x{i} c{j}") in inst.a_c) == (f"x{i}" in names)
                    assert (clause(f"-e{i} c{j}") in inst.a_c) == (f"-x{i}" in names)

    def test_forgetting_split_variables(self):
        for f in (XOR, formula("x1"), formula("x1 -x2 x3", "x2")):
            inst = build_reduction(f)
            assert forget_split_variables(inst) == unsplit_blocking(inst)

    def test_json_round_trip(self):
        inst = build_reduction(formula("b -a", "c"))
        assert ReductionInstance.loads(inst.dumps()) == inst


class TestFixedPart:
    def test_xor(self):
        report = verify_fixed_superirredundant(build_reduction(XOR))
        assert report.certified
        assert len(report.checks) == 16

    def test_single_unit(self):
        inst = build_reduction(formula("x1"))
        report = verify_fixed_superirredundant(inst)
        assert report.certified
        assert {c.clause for c in report.checks} == set(inst.fixed)

    def test_tampered_instance(self):
        inst = build_reduction(formula("x1"))
        tampered = dataclasses.replace(inst, a_b_prime=inst.a_b_prime.with_clause(clause("x1 -r1")))
        with pytest.raises(ReductionError):
            verify_fixed_superirredundant(tampered)


class TestWitness:
    def test_satisfying(self):
        inst = build_reduction(XOR)
        w = witness_formula(inst, {"x1": True, "x2": False})
        assert w - inst.fixed == formula("x1 -q", "e2 -q")
        assert formula_size(w) == inst.k
        assert equivalent(w, inst.full)

    def test_falsifying(self):
        assert witness_formula(build_reduction(XOR), {"x1": True, "x2": True}) is None

    def test_unit(self):
        inst = build_reduction(formula("x1"))
        w = witness_formula(inst, {"x1": True})
        assert formula_size(w) == inst.k and equivalent(w, inst.full)

    def test_partial_assignment(self):
        with pytest.raises(PreconditionError):
            witness_formula(build_reduction(XOR), {"x1": True})


class TestVerify:
    def test_satisfiable(self):
        v = verify_reduction(build_reduction(XOR))
        assert v.consistent and v.satisfiable
        assert len(v.witnesses) == 2

    def test_unsatisfiable(self):
        inst = build_reduction(formula("x1", "-x1"))
        assert len(candidate_sets(inst)) == 3
        v = verify_reduction(inst)
        assert v.consistent and not v.satisfiable
        assert v.candidates_checked == 3

    def test_unit(self):
        v = verify_reduction(build_reduction(formula("x1")))
        assert v.consistent and v.satisfiable

    def test_too_large(self):
        f = formula("x1", "x2", "x3", "x4")
        with pytest.raises(PreconditionError):
            verify_reduction(build_reduction(f))

    def test_cancellation(self):
        token = threading.Event()
        token.set()
        with pytest.raises(Cancelled):
            verify_reduction(build_reduction(XOR), cancel=token)

    def test_broken_bound_is_reported(self):
        inst = dataclasses.replace(build_reduction(formula("x1")), k=19)
        v = verify_reduction(inst)
        assert not v.consistent and "k=19" in v.violation


@pytest.mark.parametrize("f", [formula("x1"), formula("-x1"), formula("x1", "-x1")])
def test_candidate_characterization_against_full_minimization(f):
    # on one-variable inputs the exact minimum of the whole instance is
    # computable, so the size-k claim can be checked without the candidate argument
    inst = build_reduction(f)
    with limits.limits(oracle_cap=10_000):
        r = minimal_equivalent_formulas(inst.full)
    satisfiable = bool(oracles.models(oracles.raw(f), ["x1"]))
    assert (r.min_size <= inst.k) == satisfiable
