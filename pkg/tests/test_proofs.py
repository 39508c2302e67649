from __future__ import annotations

import json

import pytest

from berrykit.errors import CheckFailedError, InputError
from berrykit.proofs import (
    Derivation,
    ProofCheckError,
    SCHEMA_NAMES,
    Step,
    Theory,
    check,
    from_json_lines,
    is_valid,
    robinson_arithmetic,
    to_json_lines,
)
from berrykit.syntax import (
    Add,
    And,
    BForall,
    Eq,
    Exists,
    Forall,
    Iff,
    Imp,
    Le,
    Mul,
    Not,
    Or,
    Succ,
    Var,
    Zero,
    numeral,
    render,
)
from berrykit import tactics as T
from berrykit.generators import LemmaBank, prove_ne_numerals

Q = robinson_arithmetic()


def single(f, name):
    return Derivation((Step(f, "schema", name=name),))


class TestTheory:
    def test_eight_axioms(self):
        assert Q.labels() == ("q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8")

    def test_axioms_are_closed_sentences(self):
        from berrykit.syntax import free_vars

        for label in Q.labels():
            assert free_vars(Q.axiom(label)) == frozenset()

    def test_unknown_label(self):
        with pytest.raises(InputError):
            Q.axiom("q9")

    def test_duplicate_label_rejected(self):
        ax = Not(Eq(Zero(), Succ(Zero())))
        with pytest.raises(InputError):
            Theory("bad", (("a", ax), ("a", ax)))

    def test_open_axiom_rejected(self):
        with pytest.raises(InputError):
            Theory("bad", (("a", Eq(Var(0), Zero())),))


class TestSchemas:
    x, y = Var(0), Var(1)
    a = Eq(Var(0), Zero())
    b = Le(Zero(), Var(1))
    c = Not(Eq(Var(2), Var(2)))

    POSITIVE = [
        ("imp_k", Imp(a, Imp(b, a))),
        ("imp_s", Imp(Imp(a, Imp(b, c)), Imp(Imp(a, b), Imp(a, c)))),
        ("and_intro", Imp(a, Imp(b, And(a, b)))),
        ("and_left", Imp(And(a, b), a)),
        ("and_right", Imp(And(a, b), b)),
        ("or_left", Imp(a, Or(a, b))),
        ("or_right", Imp(b, Or(a, b))),
        ("or_elim", Imp(Imp(a, c), Imp(Imp(b, c), Imp(Or(a, b), c)))),
        ("neg_intro", Imp(Imp(a, b), Imp(Imp(a, Not(b)), Not(a)))),
        ("neg_elim", Imp(Not(Not(a)), a)),
        ("iff_intro", Imp(Imp(a, b), Imp(Imp(b, a), Iff(a, b)))),
        ("iff_left", Imp(Iff(a, b), Imp(a, b))),
        ("iff_right", Imp(Iff(a, b), Imp(b, a))),
        ("eq_refl", Eq(Add(x, y), Add(x, y))),
        ("eq_succ", Imp(Eq(x, y), Eq(Succ(x), Succ(y)))),
        ("eq_add", Imp(Eq(x, y), Imp(Eq(y, x), Eq(Add(x, y), Add(y, x))))),
        ("eq_mul", Imp(Eq(x, y), Imp(Eq(y, x), Eq(Mul(x, y), Mul(y, x))))),
        ("eq_eq", Imp(Eq(x, y), Imp(Eq(x, x), Imp(Eq(x, x), Eq(y, x))))),
        ("eq_le", Imp(Eq(x, y), Imp(Eq(x, x), Imp(Le(x, x), Le(y, x))))),
        ("all_inst", Imp(Forall(0, Eq(Var(0), Var(0))), Eq(numeral(3), numeral(3)))),
        ("ex_intro", Imp(Eq(numeral(2), numeral(2)), Exists(0, Eq(Var(0), Var(0))))),
        (
            "all_shift",
            Imp(
                Forall(0, Imp(Le(Zero(), Var(1)), Eq(Var(0), Var(0)))),
                Imp(Le(Zero(), Var(1)), Forall(0, Eq(Var(0), Var(0)))),
            ),
        ),
        (
            "ex_shift",
            Imp(
                Forall(0, Imp(Eq(Var(0), Var(0)), Le(Zero(), Var(1)))),
                Imp(Exists(0, Eq(Var(0), Var(0))), Le(Zero(), Var(1))),
            ),
        ),
    ]

    @pytest.mark.parametrize("name,f", POSITIVE, ids=[n for n, _ in POSITIVE])
    def test_positive_instance(self, name, f):
        assert is_valid(single(f, name), Q)

    def test_every_schema_name_exercised(self):
        assert {n for n, _ in self.POSITIVE} == set(SCHEMA_NAMES)

    NEGATIVE = [
        ("imp_k", Imp(Eq(Zero(), Zero()), Imp(Le(Zero(), Zero()), Le(Zero(), Zero())))),
        ("and_left", Imp(And(Eq(Zero(), Zero()), Le(Zero(), Zero())), Le(Zero(), Zero()))),
        ("eq_refl", Eq(Var(0), Var(1))),
        ("eq_succ", Imp(Eq(Var(0), Var(1)), Eq(Succ(Var(0)), Succ(Var(0))))),
        ("all_inst", Imp(Forall(0, Eq(Var(0), Zero())), Eq(numeral(1), numeral(1)))),
        ("ex_intro", Imp(Eq(Zero(), numeral(1)), Exists(0, Eq(Var(0), Var(0))))),
        ("nonsense", Eq(Zero(), Zero())),
    ]

    @pytest.mark.parametrize("name,f", NEGATIVE, ids=[n for n, _ in NEGATIVE])
    def test_negative_instance(self, name, f):
        with pytest.raises(ProofCheckError):
            check(single(f, name), Q)

    def test_all_shift_respects_freeness(self):
        # the antecedent mentions the shifted variable: must be rejected
        bad = Imp(
            Forall(0, Imp(Le(Zero(), Var(0)), Eq(Var(0), Var(0)))),
            Imp(Le(Zero(), Var(0)), Forall(0, Eq(Var(0), Var(0)))),
        )
        with pytest.raises(ProofCheckError):
            check(single(bad, "all_shift"), Q)

    def test_ex_shift_respects_freeness(self):
        bad = Imp(
            Forall(0, Imp(Eq(Var(0), Var(0)), Le(Zero(), Var(0)))),
            Imp(Exists(0, Eq(Var(0), Var(0))), Le(Zero(), Var(0))),
        )
        with pytest.raises(ProofCheckError):
            check(single(bad, "ex_shift"), Q)

    def test_bounded_sugar_expanded_before_matching(self):
        inst = Imp(
            BForall(0, numeral(2), Le(Var(0), numeral(2))),
            Imp(Le(Succ(Zero()), numeral(2)), Le(Zero(), numeral(2))),
        )
        assert is_valid(single(inst, "all_inst"), Q)


class TestRules:
    a = Eq(Zero(), Zero())
    b = Le(Zero(), Zero())

    def test_axiom_step(self):
        d = Derivation((Step(Q.axiom("q2"), "axiom", name="q2"),))
        assert is_valid(d, Q)

    def test_axiom_step_tampered(self):
        d = Derivation((Step(Q.axiom("q2"), "axiom", name="q4"),))
        assert not is_valid(d, Q)

    def test_axiom_step_needs_name(self):
        with pytest.raises(ProofCheckError):
            check(Derivation((Step(Q.axiom("q2"), "axiom"),)), Q)

    def test_mp(self):
        d = Derivation(
            (
                Step(Imp(self.a, Imp(self.b, self.a)), "schema", name="imp_k"),
                Step(self.a, "schema", name="eq_refl"),
                Step(Imp(self.b, self.a), "mp", premises=(0, 1)),
            )
        )
        assert is_valid(d, Q)

    def test_mp_premise_order_is_imp_then_arg(self):
        d = Derivation(
            (
                Step(Imp(self.a, Imp(self.b, self.a)), "schema", name="imp_k"),
                Step(self.a, "schema", name="eq_refl"),
                Step(Imp(self.b, self.a), "mp", premises=(1, 0)),
            )
        )
        assert not is_valid(d, Q)

    def test_mp_conclusion_mismatch(self):
        d = Derivation(
            (
                Step(Imp(self.a, Imp(self.b, self.a)), "schema", name="imp_k"),
                Step(self.a, "schema", name="eq_refl"),
                Step(self.a, "mp", premises=(0, 1)),
            )
        )
        assert not is_valid(d, Q)

    def test_premise_must_be_earlier(self):
        d = Derivation(
            (
                Step(self.a, "schema", name="eq_refl"),
                Step(self.a, "mp", premises=(1, 0)),
            )
        )
        with pytest.raises(ProofCheckError):
            check(d, Q)

    def test_gen(self):
        d = Derivation(
            (
                Step(Eq(Var(3), Var(3)), "schema", name="eq_refl"),
                Step(Forall(3, Eq(Var(3), Var(3))), "gen", premises=(0,), var=3),
            )
        )
        assert is_valid(d, Q)

    def test_gen_variable_mismatch(self):
        d = Derivation(
            (
                Step(Eq(Var(3), Var(3)), "schema", name="eq_refl"),
                Step(Forall(3, Eq(Var(3), Var(3))), "gen", premises=(0,), var=2),
            )
        )
        assert not is_valid(d, Q)

    def test_gen_must_conclude_universal(self):
        d = Derivation(
            (
                Step(self.a, "schema", name="eq_refl"),
                Step(Exists(0, Eq(Var(0), Var(0))), "gen", premises=(0,), var=0),
            )
        )
        assert not is_valid(d, Q)

    def test_unknown_rule(self):
        with pytest.raises(ProofCheckError):
            check(Derivation((Step(self.a, "guess"),)), Q)

    def test_empty_derivation_rejected(self):
        with pytest.raises(InputError):
            Derivation(())

    def test_error_carries_step_index(self):
        d = Derivation(
            (
                Step(self.a, "schema", name="eq_refl"),
                Step(self.b, "schema", name="eq_refl"),
            )
        )
        with pytest.raises(ProofCheckError) as exc:
            check(d, Q)
        assert exc.value.index == 1
        assert isinstance(exc.value, CheckFailedError)


class TestTamper:
    def test_generated_proof_resists_tampering(self):
        d = prove_ne_numerals(2, 5)
        assert is_valid(d, Q)
        mid = len(d) // 2
        forged = Step(Eq(Zero(), Zero()), d.steps[mid].rule,
                      d.steps[mid].premises, d.steps[mid].name, d.steps[mid].var)
        mutated = Derivation(d.steps[:mid] + (forged,) + d.steps[mid + 1:])
        assert not is_valid(mutated, Q)

    def test_dropping_a_step_breaks_references(self):
        d = prove_ne_numerals(1, 3)
        mutated = Derivation(d.steps[1:])
        assert not is_valid(mutated, Q)


class TestJsonLines:
    def test_round_trip_preserves_validity(self):
        d = prove_ne_numerals(0, 4)
        text = "\n".join(to_json_lines(d))
        d2 = from_json_lines(text.splitlines())
        assert is_valid(d2, Q)
        assert render(d2.conclusion) == render(d.conclusion)

    def test_round_trip_with_successor_over_sum(self):
        # canonical text must keep s ( x + y ) grouped, or the reload drifts
        bank = LemmaBank()
        d = T.compile_proof(bank.eval_closed(Succ(Add(numeral(2), numeral(1)))))
        assert is_valid(d, Q)
        d2 = from_json_lines(to_json_lines(d))
        assert is_valid(d2, Q)
        assert render(d2.conclusion) == render(d.conclusion)

    def test_step_shape(self):
        d = prove_ne_numerals(0, 1)
        objs = [json.loads(line) for line in to_json_lines(d)]
        assert [o["i"] for o in objs] == list(range(len(objs)))
        assert all({"f", "rule"} <= o.keys() for o in objs)

    def test_blank_lines_skipped(self):
        d = prove_ne_numerals(0, 1)
        lines = list(to_json_lines(d))
        padded = ["", lines[0], "   "] + lines[1:] + [""]
        assert is_valid(from_json_lines(padded), Q)

    def test_out_of_order_index_rejected(self):
        d = prove_ne_numerals(0, 1)
        lines = list(to_json_lines(d))
        with pytest.raises(InputError):
            from_json_lines([lines[1], lines[0]])

    def test_bad_json_rejected(self):
        with pytest.raises(InputError):
            from_json_lines(["{not json"])

    def test_missing_keys_rejected(self):
        with pytest.raises(InputError):
            from_json_lines(['{"i": 0, "f": "0 = 0"}'])
