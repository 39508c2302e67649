"""Executable meta-level relations on code numbers.

Decidable shape checks (being a one-variable formula, a length bound, a
sentence, a negation pair) come back as plain booleans.  The relations
that quantify over derivations come back as verdicts: holds, fails, or
undecided under the given budget, always with evidence attached to a
positive and never a silent truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .berry import DEFAULT_CAP, enumerate_formulas
from .coding import DEFAULT_TABLE, SymbolTable, decode, encode
from .errors import BudgetExhaustedError, InputError, RefusedError
from .generators import (
    LemmaBank,
    names_provable,
    refute_delta0,
    search_proof,
)
from .proofs import Derivation, Theory, robinson_arithmetic
from .semantics import Truth, eval_budgeted
from . import tactics as T
from .syntax import (
    Formula,
    FormulaClass,
    Not,
    classify,
    expr_equal,
    free_vars,
    is_closed,
    is_formula,
    length,
    render,
)


@dataclass(frozen=True)
class RelationVerdict:
    """Budget-aware truth value with its supporting evidence.

    holds is None exactly when the budget ran out before a decision.
    """

    holds: bool | None
    budget: int | None = None
    witness: str | int | None = None
    derivation: Derivation | None = field(default=None, repr=False)
    reason: str | None = None

    def to_json_obj(self) -> dict:
        out: dict = {"v": 1, "holds": self.holds}
        if self.budget is not None:
            out["budget"] = self.budget
        if self.witness is not None:
            out["witness"] = self.witness
        if self.derivation is not None:
            out["derivation_steps"] = len(self.derivation)
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def _decoded(i: int, table: SymbolTable) -> Formula | None:
    try:
        e = decode(i, table)
    except InputError:
        return None
    return e if is_formula(e) else None


def fm(i: int, table: SymbolTable = DEFAULT_TABLE) -> bool:
    """i codes a formula whose one permitted free variable is v0."""
    f = _decoded(i, table)
    return f is not None and not (free_vars(f) - {0})


def lh(i: int, j: int, table: SymbolTable = DEFAULT_TABLE) -> bool:
    """i codes a formula shorter than j."""
    f = _decoded(i, table)
    return f is not None and length(f) < j


def snt(i: int, table: SymbolTable = DEFAULT_TABLE) -> bool:
    """i codes a sentence."""
    f = _decoded(i, table)
    return f is not None and is_closed(f)


def neg(i: int, j: int, table: SymbolTable = DEFAULT_TABLE) -> bool:
    """j codes the negation of the sentence coded by i."""
    f = _decoded(i, table)
    g = _decoded(j, table)
    if f is None or g is None or not is_closed(f):
        return False
    return type(g) is Not and expr_equal(g.body, f)


def nm(
    i: int,
    j: int,
    theory: Theory | None = None,
    budget: int = 64,
    table: SymbolTable = DEFAULT_TABLE,
    bank: LemmaBank | None = None,
) -> RelationVerdict:
    """The formula coded by j provably names i.

    A negative on a genuine one-variable formula carries the refutation;
    a non-formula code fails outright with no search.
    """
    if not fm(j, table):
        return RelationVerdict(False, budget, reason="code is not a naming candidate")
    mu = decode(j, table)
    bank = bank or LemmaBank(theory)
    got = names_provable(mu, i, budget, bank)
    match got.kind:
        case "names":
            return RelationVerdict(True, budget, render(mu), got.derivation)
        case "refuted":
            return RelationVerdict(
                False, budget, got.witness, got.derivation, got.reason
            )
    return RelationVerdict(None, budget, reason=got.reason)


def b_rel(
    i: int,
    j: int,
    theory: Theory | None = None,
    budget: int = 64,
    cap: int = DEFAULT_CAP,
    table: SymbolTable = DEFAULT_TABLE,
) -> RelationVerdict:
    """Some formula shorter than j provably names i.

    Searches renaming normal forms only; any short namer has a variant
    there of the same length, so nothing is missed.  The first witness in
    canonical order is reported.  With no witness, undecided candidates
    make the verdict undecided rather than negative.
    """
    bank = LemmaBank(theory)
    unknowns = 0
    for mu in enumerate_formulas(j, cap):
        got = names_provable(mu, i, budget, bank)
        if got.kind == "names":
            return RelationVerdict(True, budget, render(mu), got.derivation)
        if got.kind == "unknown":
            unknowns += 1
    if unknowns:
        return RelationVerdict(
            None, budget, reason=f"{unknowns} candidates undecided under the budget"
        )
    return RelationVerdict(False, budget, reason="every candidate refuted")


def prc(
    i: int,
    theory: Theory | None = None,
    budget: int = 64,
    depth: int = 6,
    table: SymbolTable = DEFAULT_TABLE,
) -> RelationVerdict:
    """i fails to code a sentence, or the theory refutes the one it codes.

    A found refutation certifies a positive.  A fruitless search only
    reports undecided: unprovability is never concluded from a budget.
    """
    theory = theory or robinson_arithmetic()
    f = _decoded(i, table)
    if f is None or not is_closed(f):
        return RelationVerdict(True, reason="not a sentence code")
    target = Not(f)
    bank = LemmaBank(theory)
    if classify(f) is FormulaClass.DELTA0:
        try:
            d = refute_delta0(f, budget, bank)
            return RelationVerdict(True, budget, encode(target, table), d)
        except (RefusedError, BudgetExhaustedError):
            pass
    else:
        match f:
            # ~g with g a true existential sentence: prove g, then ~~g
            case Not(g) if classify(g) in (
                FormulaClass.DELTA0,
                FormulaClass.SIGMA1,
                FormulaClass.SIGMA,
            ) and not free_vars(g):
                if eval_budgeted(g, budget) is Truth.TRUE:
                    d = T.compile_proof(T.dn_intro(bank.prove_true(g, budget)))
                    return RelationVerdict(True, budget, encode(target, table), d)
    d = search_proof(target, theory, depth, budget)
    if d is not None:
        return RelationVerdict(True, budget, encode(target, table), d)
    return RelationVerdict(
        None, budget, reason="no refutation found within the budget"
    )
