"""Hilbert-style derivations and their checker.

A derivation is a flat list of steps.  Every step carries its formula and a
justification: a named theory axiom, a logical axiom schema instance, modus
ponens, or generalization.  The checker validates each step independently,
so a checked derivation is trustworthy no matter how it was produced.

Generalization is unrestricted.  That is sound here because theories are
required to have closed axioms: every derivable formula then holds in the
standard model under all assignments to its free variables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import CheckFailedError, InputError
from .parser import parse_formula
from .syntax import (
    Add,
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Iff,
    Imp,
    Le,
    Mul,
    Not,
    Or,
    Succ,
    Term,
    Var,
    Zero,
    alpha_equal,
    expand_bounded,
    expr_equal,
    free_vars,
    is_formula,
    is_term,
    render,
    substitute,
)


class ProofCheckError(CheckFailedError):
    def __init__(self, index: int, message: str):
        super().__init__(f"step {index}: {message}")
        self.index = index


# ------------------------------------------------------------------ theories

@dataclass(frozen=True)
class Theory:
    """A named finite set of closed axioms."""

    name: str
    axioms: tuple[tuple[str, Formula], ...]

    def __post_init__(self) -> None:
        seen = set()
        for label, ax in self.axioms:
            if label in seen:
                raise InputError(f"duplicate axiom label {label!r}")
            seen.add(label)
            if free_vars(ax):
                raise InputError(f"axiom {label!r} is not closed")

    def axiom(self, label: str) -> Formula:
        for name, ax in self.axioms:
            if name == label:
                return ax
        raise InputError(f"theory {self.name!r} has no axiom {label!r}")

    def labels(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.axioms)


def _fa(*vars_then_body) -> Formula:
    *vs, body = vars_then_body
    for v in reversed(vs):
        body = Forall(v, body)
    return body


def robinson_arithmetic() -> Theory:
    """The eight-axiom base theory for successor, addition, multiplication
    and the ordering, each stated as a closed universal sentence."""
    x, y, z = Var(0), Var(1), Var(2)
    axioms = (
        ("q1", _fa(0, 1, Imp(Eq(Succ(x), Succ(y)), Eq(x, y)))),
        ("q2", _fa(0, Not(Eq(Succ(x), Zero())))),
        ("q3", _fa(0, Imp(Not(Eq(x, Zero())), Exists(1, Eq(x, Succ(y)))))),
        ("q4", _fa(0, Eq(Add(x, Zero()), x))),
        ("q5", _fa(0, 1, Eq(Add(x, Succ(y)), Succ(Add(x, y))))),
        ("q6", _fa(0, Eq(Mul(x, Zero()), Zero()))),
        ("q7", _fa(0, 1, Eq(Mul(x, Succ(y)), Add(Mul(x, y), x)))),
        ("q8", _fa(0, 1, Iff(Le(x, y), Exists(2, Eq(Add(z, x), y))))),
    )
    return Theory("Q", axioms)


# ------------------------------------------------------- schema pattern match

# Patterns are tiny tuple trees.  ("F", name) binds a formula metavariable,
# ("T", name) a term metavariable; bindings must agree across occurrences.

_F = lambda n: ("F", n)  # noqa: E731
_T = lambda n: ("T", n)  # noqa: E731


def _imp(a, b):
    return ("imp", a, b)


def _pattern_match(pattern, expr, binding: dict) -> bool:
    match pattern:
        case ("F", name):
            if not is_formula(expr):
                return False
            prev = binding.get(name)
            if prev is None:
                binding[name] = expr
                return True
            return expr_equal(prev, expr)
        case ("T", name):
            if not is_term(expr):
                return False
            prev = binding.get(name)
            if prev is None:
                binding[name] = expr
                return True
            return expr_equal(prev, expr)
        case ("imp", a, b):
            return (
                type(expr) is Imp
                and _pattern_match(a, expr.left, binding)
                and _pattern_match(b, expr.right, binding)
            )
        case ("and", a, b):
            return (
                type(expr) is And
                and _pattern_match(a, expr.left, binding)
                and _pattern_match(b, expr.right, binding)
            )
        case ("or", a, b):
            return (
                type(expr) is Or
                and _pattern_match(a, expr.left, binding)
                and _pattern_match(b, expr.right, binding)
            )
        case ("iff", a, b):
            return (
                type(expr) is Iff
                and _pattern_match(a, expr.left, binding)
                and _pattern_match(b, expr.right, binding)
            )
        case ("not", a):
            return type(expr) is Not and _pattern_match(a, expr.body, binding)
        case ("eq", a, b):
            return (
                type(expr) is Eq
                and _pattern_match(a, expr.left, binding)
                and _pattern_match(b, expr.right, binding)
            )
        case ("le", a, b):
            return (
                type(expr) is Le
                and _pattern_match(a, expr.left, binding)
                and _pattern_match(b, expr.right, binding)
            )
        case ("succ", a):
            return type(expr) is Succ and _pattern_match(a, expr.arg, binding)
        case ("add", a, b):
            return (
                type(expr) is Add
                and _pattern_match(a, expr.left, binding)
                and _pattern_match(b, expr.right, binding)
            )
        case ("mul", a, b):
            return (
                type(expr) is Mul
                and _pattern_match(a, expr.left, binding)
                and _pattern_match(b, expr.right, binding)
            )
    raise InputError(f"bad pattern {pattern!r}")


_A, _B, _C = _F("A"), _F("B"), _F("C")
_t1, _t2, _u1, _u2 = _T("t1"), _T("t2"), _T("u1"), _T("u2")

_PATTERN_SCHEMAS: dict[str, tuple] = {
    # propositional
    "imp_k": _imp(_A, _imp(_B, _A)),
    "imp_s": _imp(_imp(_A, _imp(_B, _C)), _imp(_imp(_A, _B), _imp(_A, _C))),
    "and_intro": _imp(_A, _imp(_B, ("and", _A, _B))),
    "and_left": _imp(("and", _A, _B), _A),
    "and_right": _imp(("and", _A, _B), _B),
    "or_left": _imp(_A, ("or", _A, _B)),
    "or_right": _imp(_B, ("or", _A, _B)),
    "or_elim": _imp(
        _imp(_A, _C), _imp(_imp(_B, _C), _imp(("or", _A, _B), _C))
    ),
    "neg_intro": _imp(_imp(_A, _B), _imp(_imp(_A, ("not", _B)), ("not", _A))),
    "neg_elim": _imp(("not", ("not", _A)), _A),
    "iff_intro": _imp(_imp(_A, _B), _imp(_imp(_B, _A), ("iff", _A, _B))),
    "iff_left": _imp(("iff", _A, _B), _imp(_A, _B)),
    "iff_right": _imp(("iff", _A, _B), _imp(_B, _A)),
    # equality
    "eq_refl": ("eq", _t1, _t1),
    "eq_succ": _imp(("eq", _t1, _u1), ("eq", ("succ", _t1), ("succ", _u1))),
    "eq_add": _imp(
        ("eq", _t1, _u1),
        _imp(("eq", _t2, _u2), ("eq", ("add", _t1, _t2), ("add", _u1, _u2))),
    ),
    "eq_mul": _imp(
        ("eq", _t1, _u1),
        _imp(("eq", _t2, _u2), ("eq", ("mul", _t1, _t2), ("mul", _u1, _u2))),
    ),
    "eq_eq": _imp(
        ("eq", _t1, _u1),
        _imp(("eq", _t2, _u2), _imp(("eq", _t1, _t2), ("eq", _u1, _u2))),
    ),
    "eq_le": _imp(
        ("eq", _t1, _u1),
        _imp(("eq", _t2, _u2), _imp(("le", _t1, _t2), ("le", _u1, _u2))),
    ),
}


def _strip_succ(t: Term) -> tuple[int, Term]:
    n = 0
    while type(t) is Succ:
        n += 1
        t = t.arg
    return n, t


def _rewrap_succ(n: int, t: Term) -> Term:
    for _ in range(n):
        t = Succ(t)
    return t


def _find_witness(body: Formula, var: int, target: Formula) -> Term | None:
    """A term t with target plausibly equal to body[var := t].

    Only a candidate: the caller must re-run the substitution and compare.
    Returns Zero when var has no free occurrence to read the witness from.
    """
    stack: list[tuple[object, object, dict[int, int]]] = [(body, target, {})]
    while stack:
        x, y, bound = stack.pop()
        if is_term(x):
            if not is_term(y):
                return None
            nx, cx = _strip_succ(x)
            ny, cy = _strip_succ(y)
            if type(cx) is Var and cx.index == var and var not in bound:
                if ny >= nx:
                    return _rewrap_succ(ny - nx, cy)
                return None
            if nx != ny or type(cx) is not type(cy):
                return None
            match cx:
                case Zero():
                    continue
                case Var(i):
                    if i in bound:
                        if type(cy) is Var and cy.index == bound[i]:
                            continue
                        return None
                    if type(cy) is Var and cy.index == i:
                        continue
                    return None
                case Add(l, r) | Mul(l, r):
                    stack.append((l, cy.left, bound))
                    stack.append((r, cy.right, bound))
                    continue
            return None
        if type(x) is not type(y):
            return None
        match x:
            case Eq(l, r) | Le(l, r):
                stack.append((l, y.left, bound))
                stack.append((r, y.right, bound))
            case Not(b):
                stack.append((b, y.body, bound))
            case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
                stack.append((l, y.left, bound))
                stack.append((r, y.right, bound))
            case Forall(v, b) | Exists(v, b):
                stack.append((b, y.body, {**bound, v: y.var}))
            case _:
                return None
    return Zero()


def _is_substitution_instance(body: Formula, var: int, target: Formula) -> bool:
    witness = _find_witness(body, var, target)
    if witness is None:
        return False
    return alpha_equal(substitute(body, var, witness), target)


def _check_schema(name: str, f: Formula) -> str | None:
    """None when f is an instance of the named schema, else a reason."""
    pattern = _PATTERN_SCHEMAS.get(name)
    if pattern is not None:
        if _pattern_match(pattern, f, {}):
            return None
        return f"not an instance of {name}"
    match name:
        case "all_inst":
            match f:
                case Imp(Forall(v, body), target):
                    if _is_substitution_instance(body, v, target):
                        return None
                    return "conclusion is not a substitution instance"
            return "expected (A x) B -> B[x := t]"
        case "ex_intro":
            match f:
                case Imp(target, Exists(v, body)):
                    if _is_substitution_instance(body, v, target):
                        return None
                    return "premise is not a substitution instance"
            return "expected B[x := t] -> ( E x ) B"
        case "all_shift":
            match f:
                case Imp(Forall(v, Imp(a, b)), Imp(a2, Forall(w, b2))):
                    if w != v:
                        return "quantified variables differ"
                    if not (expr_equal(a, a2) and expr_equal(b, b2)):
                        return "components differ"
                    if v in free_vars(a):
                        return f"v{v} occurs free in the antecedent"
                    return None
            return "expected (A x)(A -> B) -> (A -> (A x) B)"
        case "ex_shift":
            match f:
                case Imp(Forall(v, Imp(a, b)), Imp(Exists(w, a2), b2)):
                    if w != v:
                        return "quantified variables differ"
                    if not (expr_equal(a, a2) and expr_equal(b, b2)):
                        return "components differ"
                    if v in free_vars(b):
                        return f"v{v} occurs free in the conclusion"
                    return None
            return "expected (A x)(A -> B) -> ((E x) A -> B)"
    return f"unknown schema {name!r}"


SCHEMA_NAMES: tuple[str, ...] = tuple(_PATTERN_SCHEMAS) + (
    "all_inst",
    "ex_intro",
    "all_shift",
    "ex_shift",
)


# ---------------------------------------------------------------- derivations

@dataclass(frozen=True)
class Step:
    formula: Formula
    rule: str  # "axiom" | "schema" | "mp" | "gen"
    premises: tuple[int, ...] = ()
    name: str | None = None
    var: int | None = None


@dataclass(frozen=True)
class Derivation:
    steps: tuple[Step, ...]

    def __post_init__(self) -> None:
        if not self.steps:
            raise InputError("derivation has no steps")

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def __len__(self) -> int:
        return len(self.steps)


def check(derivation: Derivation, theory: Theory) -> None:
    """Validate every step; raises ProofCheckError at the first bad one."""
    rendered: list[str] = []
    for i, step in enumerate(derivation.steps):
        f = step.formula
        if not is_formula(f):
            raise ProofCheckError(i, "step formula is not a formula")
        f = expand_bounded(f)
        for p in step.premises:
            if not 0 <= p < i:
                raise ProofCheckError(i, f"premise {p} out of range")
        match step.rule:
            case "axiom":
                if step.name is None:
                    raise ProofCheckError(i, "axiom step needs a name")
                try:
                    ax = theory.axiom(step.name)
                except InputError as err:
                    raise ProofCheckError(i, str(err)) from err
                if not expr_equal(f, ax):
                    raise ProofCheckError(
                        i, f"formula differs from axiom {step.name!r}"
                    )
            case "schema":
                if step.name is None:
                    raise ProofCheckError(i, "schema step needs a name")
                reason = _check_schema(step.name, f)
                if reason is not None:
                    raise ProofCheckError(i, reason)
            case "mp":
                if len(step.premises) != 2:
                    raise ProofCheckError(i, "mp needs [implication, antecedent]")
                pi, pj = step.premises
                imp = expand_bounded(derivation.steps[pi].formula)
                if type(imp) is not Imp:
                    raise ProofCheckError(i, f"step {pi} is not an implication")
                if rendered[pj] != render(imp.left):
                    raise ProofCheckError(
                        i, f"step {pj} does not match the antecedent of step {pi}"
                    )
                if render(f) != render(imp.right):
                    raise ProofCheckError(
                        i, f"formula does not match the consequent of step {pi}"
                    )
            case "gen":
                if len(step.premises) != 1 or step.var is None:
                    raise ProofCheckError(i, "gen needs one premise and a variable")
                match f:
                    case Forall(v, body):
                        if v != step.var:
                            raise ProofCheckError(i, "generalized variable differs")
                        if rendered[step.premises[0]] != render(body):
                            raise ProofCheckError(
                                i, "body does not match the premise"
                            )
                    case _:
                        raise ProofCheckError(i, "gen must conclude a universal")
            case other:
                raise ProofCheckError(i, f"unknown rule {other!r}")
        rendered.append(render(f))


def is_valid(derivation: Derivation, theory: Theory) -> bool:
    try:
        check(derivation, theory)
    except CheckFailedError:
        return False
    return True


# ------------------------------------------------------------- serialization

def to_json_lines(derivation: Derivation) -> Iterator[str]:
    """One JSON object per step: index, canonical text, and justification."""
    for i, step in enumerate(derivation.steps):
        obj: dict = {"i": i, "f": render(step.formula), "rule": step.rule}
        if step.name is not None:
            obj["name"] = step.name
        if step.premises:
            obj["prem"] = list(step.premises)
        if step.var is not None:
            obj["var"] = step.var
        yield json.dumps(obj)


def from_json_lines(lines: Iterable[str]) -> Derivation:
    steps: list[Step] = []
    for lineno, line in enumerate(lines):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as err:
            raise InputError(f"line {lineno}: bad JSON: {err}") from err
        if not isinstance(obj, dict) or "f" not in obj or "rule" not in obj:
            raise InputError(f"line {lineno}: step needs 'f' and 'rule'")
        expected = obj.get("i")
        if expected is not None and expected != len(steps):
            raise InputError(f"line {lineno}: index {expected} out of order")
        steps.append(
            Step(
                formula=parse_formula(obj["f"]),
                rule=obj["rule"],
                premises=tuple(obj.get("prem", ())),
                name=obj.get("name"),
                var=obj.get("var"),
            )
        )
    return Derivation(tuple(steps))
