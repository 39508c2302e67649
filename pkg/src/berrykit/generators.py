"""Derivation builders over the base arithmetic theory.

The LemmaBank caches proof trees for the arithmetic facts everything else
leans on: numeral evaluation, distinctness and ordering of numerals, case
analysis below a numeral bound, and order totality.  On top of the bank sit
the headline constructions: a provable uniqueness statement for least
witnesses, derivations of true bounded sentences and refutations of false
ones, decision evidence for naming equivalences, and a small proof search.

Everything returned to callers is a flat Derivation the independent checker
accepts; trees are internal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import tactics as T
from .errors import (
    BudgetExhaustedError,
    InputError,
    RefusedError,
)
from .proofs import SCHEMA_NAMES, Derivation, Theory, _check_schema, robinson_arithmetic
from .semantics import Truth, eval_budgeted, eval_term
from .syntax import (
    Add,
    And,
    BExists,
    BForall,
    Eq,
    Exists,
    Forall,
    Formula,
    FormulaClass,
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
    all_var_indices,
    classify,
    expand_bounded,
    expr_equal,
    free_vars,
    guarded_exists,
    guarded_forall,
    numeral,
    numeral_value,
    render,
    substitute,
)

# the one equation every refutation funnels through
_C0 = Eq(Zero(), Succ(Zero()))


def _succs(t: Term, n: int) -> Term:
    for _ in range(n):
        t = Succ(t)
    return t


def _binder_indices(f: Formula) -> set[int]:
    out: set[int] = set()
    stack: list[Formula] = [f]
    while stack:
        g = stack.pop()
        match g:
            case Not(b):
                stack.append(b)
            case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
                stack.append(l)
                stack.append(r)
            case Forall(v, b) | Exists(v, b):
                out.add(v)
                stack.append(b)
            case BForall(v, _, b) | BExists(v, _, b):
                out.add(v)
                stack.append(b)
    return out


class LemmaBank:
    """Cached proof trees over a fixed theory (the eight base axioms)."""

    def __init__(self, theory: Theory | None = None):
        self.theory = theory if theory is not None else robinson_arithmetic()
        self._cache: dict[tuple, T.Proof] = {}

    def _ax(self, label: str) -> T.Proof:
        return T.ax(self.theory, label)

    # -------------------------------------------------- numeral arithmetic

    def add_eq(self, i: int, j: int) -> T.Proof:
        """i + j = (i+j), on numerals."""
        key = ("add", i, j)
        if key not in self._cache:
            i_ = numeral(i)
            q5i_ = T.forall_elim(self._ax("q5"), i_)
            self._cache[("add", i, 0)] = T.forall_elim(self._ax("q4"), i_)
            for m in range(1, j + 1):
                if ("add", i, m) in self._cache:
                    continue
                prev = self._cache[("add", i, m - 1)]
                q5i = T.forall_elim(q5i_, numeral(m - 1))
                step = T.eq_trans(q5i, T.eq_succ(prev))
                self._cache[("add", i, m)] = step
        return self._cache[key]

    def mul_eq(self, i: int, j: int) -> T.Proof:
        """i * j = (i*j), on numerals."""
        key = ("mul", i, j)
        if key not in self._cache:
            i_ = numeral(i)
            q7i_ = T.forall_elim(self._ax("q7"), i_)
            refl_i = T.eq_refl(i_)
            self._cache[("mul", i, 0)] = T.forall_elim(self._ax("q6"), i_)
            for m in range(1, j + 1):
                if ("mul", i, m) in self._cache:
                    continue
                prev = self._cache[("mul", i, m - 1)]
                q7i = T.forall_elim(q7i_, numeral(m - 1))
                cong = T.eq_add_cong(prev, refl_i)
                step = T.eq_chain(q7i, cong, self.add_eq(i * (m - 1), i))
                self._cache[("mul", i, m)] = step
        return self._cache[key]

    def eval_closed(self, t: Term) -> T.Proof:
        """t = n for the closed term t with value n."""
        key = ("ev", render(t))
        if key in self._cache:
            return self._cache[key]
        if numeral_value(t) is not None:
            p: T.Proof = T.eq_refl(t)
        else:
            succs = 0
            core = t
            while type(core) is Succ:
                succs += 1
                core = core.arg
            match core:
                case Add(l, r):
                    pl, pr = self.eval_closed(l), self.eval_closed(r)
                    vl, vr = _eq_value(pl), _eq_value(pr)
                    p = T.eq_chain(T.eq_add_cong(pl, pr), self.add_eq(vl, vr))
                case Mul(l, r):
                    pl, pr = self.eval_closed(l), self.eval_closed(r)
                    vl, vr = _eq_value(pl), _eq_value(pr)
                    p = T.eq_chain(T.eq_mul_cong(pl, pr), self.mul_eq(vl, vr))
                case _:
                    raise InputError(f"term is not closed: {render(t)!r}")
            for _ in range(succs):
                p = T.eq_succ(p)
        self._cache[key] = p
        return p

    # ---------------------------------------------- numeral order facts

    def ne(self, i: int, j: int) -> T.Proof:
        """~(i = j) for distinct numerals."""
        if i == j:
            raise InputError("the numerals must differ")
        key = ("ne", i, j)
        if key in self._cache:
            return self._cache[key]
        h = Eq(numeral(i), numeral(j))
        if i < j:
            cur: T.Proof = T.hyp(h)
            for k in range(i):
                q1i = T.forall_elim(
                    T.forall_elim(self._ax("q1"), numeral(i - k - 1)),
                    numeral(j - k - 1),
                )
                cur = T.mp(q1i, cur)
            flipped = T.eq_sym(cur)  # s^(j-i) 0 = 0
            d1 = T.discharge(flipped, h)
            q2i = T.forall_elim(self._ax("q2"), numeral(j - i - 1))
            p = T.mp(T.mp(T.s_neg_intro(h, flipped.formula), d1), T.k_lift(q2i, h))
        else:
            base = self.ne(j, i)
            d1 = T.discharge(T.eq_sym(T.hyp(h)), h)
            p = T.mp(
                T.mp(T.s_neg_intro(h, Eq(numeral(j), numeral(i))), d1),
                T.k_lift(base, h),
            )
        self._cache[key] = p
        return p

    def le(self, i: int, j: int) -> T.Proof:
        """i <= j on numerals, i at most j."""
        if i > j:
            raise InputError("the first numeral must not exceed the second")
        key = ("le", i, j)
        if key in self._cache:
            return self._cache[key]
        q8ij = T.forall_elim(T.forall_elim(self._ax("q8"), numeral(i)), numeral(j))
        body = Eq(Add(Var(2), numeral(i)), numeral(j))
        ex = T.exists_intro(2, body, numeral(j - i), self.add_eq(j - i, i))
        p = T.mp(T.iff_right(q8ij), ex)
        self._cache[key] = p
        return p

    def u_lemma(self, n: int) -> T.Proof:
        """(A v0)(v0 + n = s^n v0): adding a numeral is iterated successor."""
        key = ("u", n)
        if key not in self._cache:
            self._cache[("u", 0)] = self._ax("q4")
            for m in range(1, n + 1):
                if ("u", m) in self._cache:
                    continue
                prev = self._cache[("u", m - 1)]
                q5i = T.forall_elim(
                    T.forall_elim(self._ax("q5"), Var(0)), numeral(m - 1)
                )
                ih = T.forall_elim(prev, Var(0))
                self._cache[("u", m)] = T.gen(0, T.eq_trans(q5i, T.eq_succ(ih)))
        return self._cache[key]

    def nle(self, j: int, n: int) -> T.Proof:
        """~(j <= n) for numerals with j > n."""
        if j <= n:
            raise InputError("the first numeral must exceed the second")
        key = ("nle", j, n)
        if key in self._cache:
            return self._cache[key]
        a = Eq(Add(Var(2), numeral(j)), numeral(n))
        ha = T.hyp(a)
        ui = T.forall_elim(self.u_lemma(j), Var(2))
        cur = T.eq_trans(T.eq_sym(ui), ha)  # s^j v2 = n
        for k in range(n):
            q1i = T.forall_elim(
                T.forall_elim(self._ax("q1"), _succs(Var(2), j - k - 1)),
                numeral(n - k - 1),
            )
            cur = T.mp(q1i, cur)
        q2i = T.forall_elim(self._ax("q2"), _succs(Var(2), j - n - 1))
        c0 = T.contradiction_to(cur, q2i, _C0)
        ga = T.gen(2, T.discharge(c0, a))
        exs = T.mp(T.s_ex_shift(2, a, _C0), ga)
        notex = T.contrapose(exs, self.ne(0, 1))
        q8jn = T.forall_elim(T.forall_elim(self._ax("q8"), numeral(j)), numeral(n))
        p = T.contrapose(T.iff_left(q8jn), notex)
        self._cache[key] = p
        return p

    def g1(self) -> T.Proof:
        """(A v0)(0 <= v0)."""
        key = ("g1",)
        if key in self._cache:
            return self._cache[key]
        q8i = T.forall_elim(T.forall_elim(self._ax("q8"), Zero()), Var(0))
        body = Eq(Add(Var(2), Zero()), Var(0))
        q4i = T.forall_elim(self._ax("q4"), Var(0))
        ex = T.exists_intro(2, body, Var(0), q4i)
        p = T.gen(0, T.mp(T.iff_right(q8i), ex))
        self._cache[key] = p
        return p

    def m2(self) -> T.Proof:
        """(A v0)(A v1)((s v0 <= s v1) -> (v0 <= v1))."""
        key = ("m2",)
        if key in self._cache:
            return self._cache[key]
        h = Le(Succ(Var(0)), Succ(Var(1)))
        hh = T.hyp(h)
        q8ss = T.forall_elim(
            T.forall_elim(self._ax("q8"), Succ(Var(0))), Succ(Var(1))
        )
        exa = T.mp(T.iff_left(q8ss), hh)
        a = Eq(Add(Var(2), Succ(Var(0))), Succ(Var(1)))
        ha = T.hyp(a)
        q5i = T.forall_elim(T.forall_elim(self._ax("q5"), Var(2)), Var(0))
        e1 = T.eq_trans(T.eq_sym(q5i), ha)  # s (v2 + v0) = s v1
        q1i = T.forall_elim(
            T.forall_elim(self._ax("q1"), Add(Var(2), Var(0))), Var(1)
        )
        e2 = T.mp(q1i, e1)  # v2 + v0 = v1
        q80 = T.forall_elim(T.forall_elim(self._ax("q8"), Var(0)), Var(1))
        exb = T.exists_intro(2, Eq(Add(Var(2), Var(0)), Var(1)), Var(2), e2)
        c = T.mp(T.iff_right(q80), exb)
        ga = T.gen(2, T.discharge(c, a))
        c2 = T.mp(T.mp(T.s_ex_shift(2, a, Le(Var(0), Var(1))), ga), exa)
        p = T.gen(0, T.gen(1, T.discharge(c2, h)))
        self._cache[key] = p
        return p

    # ------------------------------------ case analysis below a numeral

    def l7(self, n: int) -> T.Proof:
        """(A v0)((v0 <= n) -> (v0=0 | v0=1 | ... | v0=n)), right-nested."""
        key = ("l7", n)
        if key not in self._cache:
            for m in range(n + 1):
                if ("l7", m) in self._cache:
                    continue
                self._cache[("l7", m)] = (
                    self._l7_zero() if m == 0 else self._l7_step(m)
                )
        return self._cache[key]

    def _l7_zero(self) -> T.Proof:
        h = Le(Var(0), Zero())
        hh = T.hyp(h)
        target = Eq(Var(0), Zero())
        q80 = T.forall_elim(T.forall_elim(self._ax("q8"), Var(0)), Zero())
        exa = T.mp(T.iff_left(q80), hh)
        a = Eq(Add(Var(2), Var(0)), Zero())
        ha = T.hyp(a)
        b_eq = T.discharge(T.hyp(target), target)
        hne = T.hyp(Not(target))
        exb = T.mp(T.forall_elim(self._ax("q3"), Var(0)), hne)
        b = Eq(Var(0), Succ(Var(1)))
        hb = T.hyp(b)
        cong = T.eq_add_cong(T.eq_refl(Var(2)), hb)
        e1 = T.eq_trans(T.eq_sym(cong), ha)  # v2 + s v1 = 0
        q5i = T.forall_elim(T.forall_elim(self._ax("q5"), Var(2)), Var(1))
        e2 = T.eq_trans(T.eq_sym(q5i), e1)  # s (v2 + v1) = 0
        q2i = T.forall_elim(self._ax("q2"), Add(Var(2), Var(1)))
        cb = T.contradiction_to(e2, q2i, target)
        gb = T.gen(1, T.discharge(cb, b))
        cne = T.mp(T.mp(T.s_ex_shift(1, b, target), gb), exb)
        b_ne = T.discharge(cne, Not(target))
        ca = T.or_elim(T.excluded_middle(target), b_eq, b_ne)
        ga = T.gen(2, T.discharge(ca, a))
        c0 = T.mp(T.mp(T.s_ex_shift(2, a, target), ga), exa)
        return T.gen(0, T.discharge(c0, h))

    def _l7_step(self, m: int) -> T.Proof:
        prev = self._cache[("l7", m - 1)]
        h = Le(Var(0), numeral(m))
        hh = T.hyp(h)
        cs = [Eq(Var(0), numeral(k)) for k in range(m + 1)]
        d = _disj_tail(cs, 0)
        v0eq0 = cs[0]
        b_eq = T.discharge(_inject(cs, 0, T.hyp(v0eq0)), v0eq0)
        hne = T.hyp(Not(v0eq0))
        exb = T.mp(T.forall_elim(self._ax("q3"), Var(0)), hne)
        b = Eq(Var(0), Succ(Var(1)))
        hb = T.hyp(b)
        sv1_le = T.le_transport(hb, T.eq_refl(numeral(m)), hh)  # s v1 <= m
        m2i = T.forall_elim(T.forall_elim(self.m2(), Var(1)), numeral(m - 1))
        v1_le = T.mp(m2i, sv1_le)
        dprev = T.mp(T.forall_elim(prev, Var(1)), v1_le)
        cs_prev = [Eq(Var(1), numeral(k)) for k in range(m)]

        def branch(k: int, hek: T.Proof) -> T.Proof:
            return _inject(cs, k + 1, T.eq_trans(hb, T.eq_succ(hek)))

        dm = _elim_cases(dprev, cs_prev, branch)
        gb = T.gen(1, T.discharge(dm, b))
        cne = T.mp(T.mp(T.s_ex_shift(1, b, d), gb), exb)
        b_ne = T.discharge(cne, Not(v0eq0))
        out = T.or_elim(T.excluded_middle(v0eq0), b_eq, b_ne)
        return T.gen(0, T.discharge(out, h))

    def l5(self, n: int) -> T.Proof:
        """(A v0)((n <= v0) -> ((s n <= v0) | (n = v0)))."""
        key = ("l5", n)
        if key in self._cache:
            return self._cache[key]
        g_left = Le(Succ(numeral(n)), Var(0))
        g_right = Eq(numeral(n), Var(0))
        g = Or(g_left, g_right)
        h = Le(numeral(n), Var(0))
        hh = T.hyp(h)
        q8i = T.forall_elim(T.forall_elim(self._ax("q8"), numeral(n)), Var(0))
        exa = T.mp(T.iff_left(q8i), hh)
        a = Eq(Add(Var(2), numeral(n)), Var(0))
        ha = T.hyp(a)
        ui = T.forall_elim(self.u_lemma(n), Var(2))
        s = T.eq_trans(T.eq_sym(ui), ha)  # s^n v2 = v0
        e2 = Eq(Var(2), Zero())
        he2 = T.hyp(e2)
        cur: T.Proof = he2
        for _ in range(n):
            cur = T.eq_succ(cur)  # s^n v2 = n
        b_zero = T.discharge(
            T.or_right(g_left, T.eq_trans(T.eq_sym(cur), s)), e2
        )
        hne = T.hyp(Not(e2))
        exb = T.mp(T.forall_elim(self._ax("q3"), Var(2)), hne)
        b = Eq(Var(2), Succ(Var(1)))
        hb = T.hyp(b)
        cur = hb
        for _ in range(n):
            cur = T.eq_succ(cur)  # s^n v2 = s^(n+1) v1
        u2 = T.forall_elim(self.u_lemma(n + 1), Var(1))
        e = T.eq_chain(u2, T.eq_sym(cur), s)  # v1 + s n = v0
        exw = T.exists_intro(
            2, Eq(Add(Var(2), Succ(numeral(n))), Var(0)), Var(1), e
        )
        q8s = T.forall_elim(
            T.forall_elim(self._ax("q8"), Succ(numeral(n))), Var(0)
        )
        le_s = T.mp(T.iff_right(q8s), exw)
        gb = T.gen(1, T.discharge(T.or_left(le_s, g_right), b))
        cne = T.mp(T.mp(T.s_ex_shift(1, b, g), gb), exb)
        b_ne = T.discharge(cne, Not(e2))
        ca = T.or_elim(T.excluded_middle(e2), b_zero, b_ne)
        ga = T.gen(2, T.discharge(ca, a))
        ch = T.mp(T.mp(T.s_ex_shift(2, a, g), ga), exa)
        p = T.gen(0, T.discharge(ch, h))
        self._cache[key] = p
        return p

    def tot(self, n: int) -> T.Proof:
        """(A v0)((v0 <= n) | (n <= v0))."""
        key = ("tot", n)
        if key not in self._cache:
            for m in range(n + 1):
                if ("tot", m) in self._cache:
                    continue
                self._cache[("tot", m)] = (
                    self._tot_zero() if m == 0 else self._tot_step(m)
                )
        return self._cache[key]

    def _tot_zero(self) -> T.Proof:
        g1i = T.forall_elim(self.g1(), Var(0))
        return T.gen(0, T.or_right(Le(Var(0), Zero()), g1i))

    def _tot_step(self, m: int) -> T.Proof:
        prev = self._cache[("tot", m - 1)]
        left = Le(Var(0), numeral(m))
        right = Le(numeral(m), Var(0))
        ti = T.forall_elim(prev, Var(0))
        h1 = Le(Var(0), numeral(m - 1))
        hh1 = T.hyp(h1)
        dis = T.mp(T.forall_elim(self.l7(m - 1), Var(0)), hh1)
        cs = [Eq(Var(0), numeral(k)) for k in range(m)]

        def low(k: int, hek: T.Proof) -> T.Proof:
            tr = T.le_transport(
                T.eq_sym(hek), T.eq_refl(numeral(m)), self.le(k, m)
            )
            return T.or_left(tr, right)

        b1 = T.discharge(_elim_cases(dis, cs, low), h1)
        h2 = Le(numeral(m - 1), Var(0))
        hh2 = T.hyp(h2)
        d2 = T.mp(T.forall_elim(self.l5(m - 1), Var(0)), hh2)
        s1 = Le(Succ(numeral(m - 1)), Var(0))
        s2 = Eq(numeral(m - 1), Var(0))
        bs1 = T.discharge(T.or_right(left, T.hyp(s1)), s1)
        tr2 = T.le_transport(
            T.hyp(s2), T.eq_refl(numeral(m)), self.le(m - 1, m)
        )
        bs2 = T.discharge(T.or_left(tr2, right), s2)
        b2 = T.discharge(T.or_elim(d2, bs1, bs2), h2)
        return T.gen(0, T.or_elim(ti, b1, b2))

    # --------------------------------------------------- indiscernibility

    def leib(self, phi: Formula, x: int, t: Term, u: Term) -> T.Proof:
        """(t = u) -> (phi[x:=t] -> phi[x:=u]), by recursion on phi.

        Binders in phi may not mention the free variables of t or u; a
        binder equal to x shadows it, which is fine.
        """
        phi = expand_bounded(phi)  # type: ignore[assignment]
        repl_free = free_vars(t) | free_vars(u)
        clash = (_binder_indices(phi) - {x}) & repl_free
        if clash:
            raise T.TacticError(f"binders would capture the terms: {sorted(clash)}")
        e = Eq(t, u)
        he = T.hyp(e)
        sym = T.eq_sym(he)
        memo: dict[tuple[int, bool], T.Proof] = {}

        def term_cong(s: Term, fwd: bool) -> T.Proof:
            p_ab = he if fwd else sym
            if x not in free_vars(s):
                return T.eq_refl(s)
            succs = 0
            while type(s) is Succ:
                succs += 1
                s = s.arg
            match s:
                case Var(i) if i == x:
                    p: T.Proof = p_ab
                case Add(l, r):
                    p = T.eq_add_cong(term_cong(l, fwd), term_cong(r, fwd))
                case Mul(l, r):
                    p = T.eq_mul_cong(term_cong(l, fwd), term_cong(r, fwd))
                case _:
                    raise T.TacticError("unreachable term shape")
            for _ in range(succs):
                p = T.eq_succ(p)
            return p

        def rec(g: Formula, fwd: bool) -> T.Proof:
            """g[x:=a] -> g[x:=b] with (a, b) = (t, u) if fwd else (u, t)."""
            mkey = (id(g), fwd)
            if mkey in memo:
                return memo[mkey]
            a, b = (t, u) if fwd else (u, t)
            if x not in free_vars(g):
                out = T.imp_refl(g)
                memo[mkey] = out
                return out
            ga = substitute(g, x, a)
            gb = substitute(g, x, b)
            match g:
                case Eq(l, r):
                    pl, pr = term_cong(l, fwd), term_cong(r, fwd)
                    schema = T.sch(
                        "eq_eq",
                        Imp(pl.formula, Imp(pr.formula, Imp(ga, gb))),
                    )
                    out = T.mp(T.mp(schema, pl), pr)
                case Le(l, r):
                    pl, pr = term_cong(l, fwd), term_cong(r, fwd)
                    schema = T.sch(
                        "eq_le",
                        Imp(pl.formula, Imp(pr.formula, Imp(ga, gb))),
                    )
                    out = T.mp(T.mp(schema, pl), pr)
                case Not(body):
                    back = rec(body, not fwd)
                    hn = T.hyp(ga)
                    out = T.discharge(T.contrapose(back, hn), ga)
                case And(l, r):
                    hc = T.hyp(ga)
                    both = T.and_intro(
                        T.mp(rec(l, fwd), T.and_left(hc)),
                        T.mp(rec(r, fwd), T.and_right(hc)),
                    )
                    out = T.discharge(both, ga)
                case Or(l, r):
                    hc = T.hyp(ga)
                    la, ra = substitute(l, x, a), substitute(r, x, a)
                    lb, rb = substitute(l, x, b), substitute(r, x, b)
                    bl = T.discharge(
                        T.or_left(T.mp(rec(l, fwd), T.hyp(la)), rb), la
                    )
                    br = T.discharge(
                        T.or_right(lb, T.mp(rec(r, fwd), T.hyp(ra))), ra
                    )
                    out = T.discharge(T.or_elim(hc, bl, br), ga)
                case Imp(l, r):
                    hc = T.hyp(ga)
                    lb = substitute(l, x, b)
                    hl = T.hyp(lb)
                    la_p = T.mp(rec(l, not fwd), hl)
                    rb_p = T.mp(rec(r, fwd), T.mp(hc, la_p))
                    out = T.discharge(T.discharge(rb_p, lb), ga)
                case Iff(l, r):
                    hc = T.hyp(ga)
                    lb = substitute(l, x, b)
                    rb = substitute(r, x, b)
                    hl = T.hyp(lb)
                    fwd_p = T.discharge(
                        T.mp(
                            rec(r, fwd),
                            T.mp(T.iff_left(hc), T.mp(rec(l, not fwd), hl)),
                        ),
                        lb,
                    )
                    hr = T.hyp(rb)
                    back_p = T.discharge(
                        T.mp(
                            rec(l, fwd),
                            T.mp(T.iff_right(hc), T.mp(rec(r, not fwd), hr)),
                        ),
                        rb,
                    )
                    out = T.discharge(T.iff_intro(fwd_p, back_p), ga)
                case Forall(v, body):
                    hc = T.hyp(ga)
                    inst = T.forall_elim(hc, Var(v))
                    stepped = T.mp(rec(body, fwd), inst)
                    out = T.discharge(T.gen(v, stepped), ga)
                case Exists(v, body):
                    ba = substitute(body, x, a)
                    bb = substitute(body, x, b)
                    hb = T.hyp(ba)
                    wi = T.exists_intro(
                        v, bb, Var(v), T.mp(rec(body, fwd), hb)
                    )
                    shifted = T.gen(v, T.discharge(wi, ba))
                    out = T.mp(T.s_ex_shift(v, ba, Exists(v, bb)), shifted)
                case _:
                    raise T.TacticError("unreachable formula shape")
            memo[mkey] = out
            return out

        return T.discharge(rec(phi, True), e)

    # --------------------------------------------- refutation plumbing

    def _refute(self, hf: Formula, c0_proof: T.Proof) -> T.Proof:
        """~hf, from a contradiction derived under hypothesis hf."""
        return T.contrapose(T.discharge(c0_proof, hf), self.ne(0, 1))

    # --------------------------------------- true/false bounded sentences

    def _truth(self, f: Formula, budget: int) -> Truth:
        return eval_budgeted(f, budget)

    def prove_true(self, f: Formula, budget: int = 64) -> T.Proof:
        gp = _guard_parts(f)
        if gp is not None:
            kind, v, bound, body = gp
            if free_vars(bound):
                raise InputError("quantifier bound is not closed here")
            m = eval_term(bound, {})
            bodyx = expand_bounded(body)
            if kind == "ball":
                guard = Le(Succ(Var(v)), bound)
                hg = T.hyp(guard)
                up = T.le_transport(
                    T.eq_refl(Succ(Var(v))), self.eval_closed(bound), hg
                )
                if m == 0:
                    zi = T.forall_elim(self.l7(0), Succ(Var(v)))
                    q2i = T.forall_elim(self._ax("q2"), Var(v))
                    c = T.contradiction_to(T.mp(zi, up), q2i, bodyx)
                else:
                    m2i = T.forall_elim(
                        T.forall_elim(self.m2(), Var(v)), numeral(m - 1)
                    )
                    below = T.mp(m2i, up)
                    dis = T.mp(T.forall_elim(self.l7(m - 1), Var(v)), below)
                    cs = [Eq(Var(v), numeral(k)) for k in range(m)]

                    def branch(k: int, hek: T.Proof) -> T.Proof:
                        pk = self.prove_true(
                            substitute(body, v, numeral(k)), budget
                        )
                        lb = self.leib(bodyx, v, numeral(k), Var(v))
                        return T.mp(T.mp(lb, T.eq_sym(hek)), pk)

                    c = _elim_cases(dis, cs, branch)
                return T.gen(v, T.discharge(c, guard))
            # bounded existential: first true instance is the witness
            for k in range(m):
                inst = substitute(body, v, numeral(k))
                if self._truth(inst, budget) is Truth.TRUE:
                    pk = self.prove_true(inst, budget)
                    wit = T.le_transport(
                        T.eq_refl(numeral(k + 1)),
                        T.eq_sym(self.eval_closed(bound)),
                        self.le(k + 1, m),
                    )
                    pair = T.and_intro(wit, pk)
                    return T.exists_intro(
                        v,
                        And(Le(Succ(Var(v)), bound), bodyx),
                        numeral(k),
                        pair,
                    )
            raise RefusedError("no witness below the bound; the sentence is false")
        match f:
            case Not(g):
                return self.prove_false(g, budget)
            case And(l, r):
                return T.and_intro(
                    self.prove_true(l, budget), self.prove_true(r, budget)
                )
            case Or(l, r):
                if self._truth(l, budget) is Truth.TRUE:
                    return T.or_left(
                        self.prove_true(l, budget), expand_bounded(r)
                    )
                if self._truth(r, budget) is Truth.TRUE:
                    return T.or_right(
                        expand_bounded(l), self.prove_true(r, budget)
                    )
                raise BudgetExhaustedError(
                    "neither disjunct settles as true", budget=budget
                )
            case Imp(l, r):
                lx = expand_bounded(l)
                if self._truth(l, budget) is Truth.FALSE:
                    nl = self.prove_false(l, budget)
                    hl = T.hyp(lx)
                    return T.discharge(
                        T.contradiction_to(hl, nl, expand_bounded(r)), lx
                    )
                if self._truth(r, budget) is Truth.TRUE:
                    return T.k_lift(self.prove_true(r, budget), lx)
                raise BudgetExhaustedError(
                    "antecedent and consequent both unsettled", budget=budget
                )
            case Iff(l, r):
                lx, rx = expand_bounded(l), expand_bounded(r)
                tl = self._truth(l, budget)
                if tl is Truth.TRUE:
                    pl, pr = self.prove_true(l, budget), self.prove_true(r, budget)
                    return T.iff_intro(T.k_lift(pr, lx), T.k_lift(pl, rx))
                if tl is Truth.FALSE:
                    nl, nr = self.prove_false(l, budget), self.prove_false(r, budget)
                    fwd = T.discharge(
                        T.contradiction_to(T.hyp(lx), nl, rx), lx
                    )
                    back = T.discharge(
                        T.contradiction_to(T.hyp(rx), nr, lx), rx
                    )
                    return T.iff_intro(fwd, back)
                raise BudgetExhaustedError("biconditional unsettled", budget=budget)
            case Eq(t, u):
                vt, vu = eval_term(t, {}), eval_term(u, {})
                if vt != vu:
                    raise RefusedError("the sides differ; the equation is false")
                return T.eq_trans(
                    self.eval_closed(t), T.eq_sym(self.eval_closed(u))
                )
            case Le(t, u):
                vt, vu = eval_term(t, {}), eval_term(u, {})
                if vt > vu:
                    raise RefusedError("the comparison fails; the sentence is false")
                return T.le_transport(
                    T.eq_sym(self.eval_closed(t)),
                    T.eq_sym(self.eval_closed(u)),
                    self.le(vt, vu),
                )
            case Exists(v, body):
                bodyx = expand_bounded(body)
                for k in range(budget + 1):
                    inst = substitute(body, v, numeral(k))
                    if self._truth(inst, budget) is Truth.TRUE:
                        return T.exists_intro(
                            v, bodyx, numeral(k), self.prove_true(inst, budget)
                        )
                raise BudgetExhaustedError(
                    f"no witness at or below {budget}", budget=budget
                )
            case Forall(_, _):
                raise InputError("unbounded universal outside the supported fragment")
        raise InputError(f"cannot establish {render(f)!r}")

    def prove_false(self, f: Formula, budget: int = 64) -> T.Proof:
        gp = _guard_parts(f)
        if gp is not None:
            kind, v, bound, body = gp
            if free_vars(bound):
                raise InputError("quantifier bound is not closed here")
            m = eval_term(bound, {})
            bodyx = expand_bounded(body)
            guard = Le(Succ(Var(v)), bound)
            if kind == "ball":
                whole = Forall(v, Imp(guard, bodyx))
                failing = None
                for k in range(m):
                    if (
                        self._truth(substitute(body, v, numeral(k)), budget)
                        is Truth.FALSE
                    ):
                        failing = k
                        break
                if failing is None:
                    raise RefusedError("no failing instance; the sentence is true")
                ha = T.hyp(whole)
                inst = T.forall_elim(ha, numeral(failing))
                wit = T.le_transport(
                    T.eq_refl(numeral(failing + 1)),
                    T.eq_sym(self.eval_closed(bound)),
                    self.le(failing + 1, m),
                )
                pos = T.mp(inst, wit)
                neg = self.prove_false(
                    substitute(body, v, numeral(failing)), budget
                )
                return self._refute(whole, T.contradiction_to(pos, neg, _C0))
            whole = Exists(v, And(guard, bodyx))
            conj = And(guard, bodyx)
            hc = T.hyp(conj)
            up = T.le_transport(
                T.eq_refl(Succ(Var(v))), self.eval_closed(bound), T.and_left(hc)
            )
            if m == 0:
                zi = T.forall_elim(self.l7(0), Succ(Var(v)))
                q2i = T.forall_elim(self._ax("q2"), Var(v))
                c = T.contradiction_to(T.mp(zi, up), q2i, _C0)
            else:
                m2i = T.forall_elim(
                    T.forall_elim(self.m2(), Var(v)), numeral(m - 1)
                )
                below = T.mp(m2i, up)
                dis = T.mp(T.forall_elim(self.l7(m - 1), Var(v)), below)
                cs = [Eq(Var(v), numeral(k)) for k in range(m)]

                def branch(k: int, hek: T.Proof) -> T.Proof:
                    nk = self.prove_false(
                        substitute(body, v, numeral(k)), budget
                    )
                    lb = self.leib(bodyx, v, Var(v), numeral(k))
                    pos = T.mp(T.mp(lb, hek), T.and_right(hc))
                    return T.contradiction_to(pos, nk, _C0)

                c = _elim_cases(dis, cs, branch)
            shifted = T.gen(v, T.discharge(c, conj))
            exs = T.mp(T.s_ex_shift(v, conj, _C0), shifted)
            return T.contrapose(exs, self.ne(0, 1))
        match f:
            case Not(g):
                return T.dn_intro(self.prove_true(g, budget))
            case And(l, r):
                whole = And(expand_bounded(l), expand_bounded(r))
                hc = T.hyp(whole)
                if self._truth(l, budget) is Truth.FALSE:
                    c = T.contradiction_to(
                        T.and_left(hc), self.prove_false(l, budget), _C0
                    )
                elif self._truth(r, budget) is Truth.FALSE:
                    c = T.contradiction_to(
                        T.and_right(hc), self.prove_false(r, budget), _C0
                    )
                else:
                    raise BudgetExhaustedError(
                        "neither conjunct settles as false", budget=budget
                    )
                return self._refute(whole, c)
            case Or(l, r):
                lx, rx = expand_bounded(l), expand_bounded(r)
                whole = Or(lx, rx)
                nl = self.prove_false(l, budget)
                nr = self.prove_false(r, budget)
                bl = T.discharge(T.contradiction_to(T.hyp(lx), nl, _C0), lx)
                br = T.discharge(T.contradiction_to(T.hyp(rx), nr, _C0), rx)
                return self._refute(
                    whole, T.or_elim(T.hyp(whole), bl, br)
                )
            case Imp(l, r):
                whole = Imp(expand_bounded(l), expand_bounded(r))
                hc = T.hyp(whole)
                pos = T.mp(hc, self.prove_true(l, budget))
                c = T.contradiction_to(pos, self.prove_false(r, budget), _C0)
                return self._refute(whole, c)
            case Iff(l, r):
                lx, rx = expand_bounded(l), expand_bounded(r)
                whole = Iff(lx, rx)
                hc = T.hyp(whole)
                if self._truth(l, budget) is Truth.TRUE:
                    pos = T.mp(T.iff_left(hc), self.prove_true(l, budget))
                    c = T.contradiction_to(
                        pos, self.prove_false(r, budget), _C0
                    )
                elif self._truth(r, budget) is Truth.TRUE:
                    pos = T.mp(T.iff_right(hc), self.prove_true(r, budget))
                    c = T.contradiction_to(
                        pos, self.prove_false(l, budget), _C0
                    )
                else:
                    raise BudgetExhaustedError(
                        "biconditional unsettled", budget=budget
                    )
                return self._refute(whole, c)
            case Eq(t, u):
                vt, vu = eval_term(t, {}), eval_term(u, {})
                if vt == vu:
                    raise RefusedError("the sides agree; the equation is true")
                whole = Eq(t, u)
                he = T.hyp(whole)
                chain = T.eq_chain(
                    T.eq_sym(self.eval_closed(t)), he, self.eval_closed(u)
                )
                c = T.contradiction_to(chain, self.ne(vt, vu), _C0)
                return self._refute(whole, c)
            case Le(t, u):
                vt, vu = eval_term(t, {}), eval_term(u, {})
                if vt <= vu:
                    raise RefusedError("the comparison holds; the sentence is true")
                whole = Le(t, u)
                he = T.hyp(whole)
                moved = T.le_transport(
                    self.eval_closed(t), self.eval_closed(u), he
                )
                c = T.contradiction_to(moved, self.nle(vt, vu), _C0)
                return self._refute(whole, c)
            case Exists(_, _):
                raise RefusedError("cannot refute an unbounded existential")
            case Forall(_, _):
                raise InputError("unbounded universal outside the supported fragment")
        raise InputError(f"cannot refute {render(f)!r}")

    # --------------------------------------------------- bound extraction

    def find_bound(
        self, mu: Formula
    ) -> tuple[int, Callable[[T.Proof], T.Proof]] | None:
        """A numeral bound m with a transformer taking a proof of mu to a
        proof of v0 <= m.  None when no conjunct pins down v0."""
        match mu:
            case Eq(Var(0), t) if not free_vars(t):
                m = eval_term(t, {})

                def fn_eq(p: T.Proof) -> T.Proof:
                    e = T.eq_trans(p, self.eval_closed(t))
                    return T.le_transport(
                        T.eq_sym(e), T.eq_refl(numeral(m)), self.le(m, m)
                    )

                return m, fn_eq
            case Eq(t, Var(0)) if not free_vars(t):
                m = eval_term(t, {})

                def fn_eq_rev(p: T.Proof) -> T.Proof:
                    e = T.eq_trans(T.eq_sym(p), self.eval_closed(t))
                    return T.le_transport(
                        T.eq_sym(e), T.eq_refl(numeral(m)), self.le(m, m)
                    )

                return m, fn_eq_rev
            case Le(Var(0), t) if not free_vars(t):
                m = eval_term(t, {})

                def fn_le(p: T.Proof) -> T.Proof:
                    return T.le_transport(
                        T.eq_refl(Var(0)), self.eval_closed(t), p
                    )

                return m, fn_le
            case Le(Succ(Var(0)), t) if not free_vars(t):
                m = eval_term(t, {})

                def fn_lt(p: T.Proof) -> T.Proof:
                    up = T.le_transport(
                        T.eq_refl(Succ(Var(0))), self.eval_closed(t), p
                    )
                    if m == 0:
                        zi = T.forall_elim(self.l7(0), Succ(Var(0)))
                        q2i = T.forall_elim(self._ax("q2"), Var(0))
                        return T.contradiction_to(
                            T.mp(zi, up), q2i, Le(Var(0), Zero())
                        )
                    m2i = T.forall_elim(
                        T.forall_elim(self.m2(), Var(0)), numeral(m - 1)
                    )
                    return T.mp(m2i, up)

                return (0 if m == 0 else m - 1), fn_lt
            case And(l, r):
                got = self.find_bound(l)
                if got is not None:
                    m, fn = got
                    return m, lambda p: fn(T.and_left(p))
                got = self.find_bound(r)
                if got is not None:
                    m, fn = got
                    return m, lambda p: fn(T.and_right(p))
        return None


def _eq_value(p: T.Proof) -> int:
    match p.formula:
        case Eq(_, r):
            n = numeral_value(r)
            if n is not None:
                return n
    raise T.TacticError("expected an evaluated equation")


def _guard_parts(f: Formula) -> tuple[str, int, Term, Formula] | None:
    match f:
        case BForall(v, b, body):
            return "ball", v, b, body
        case BExists(v, b, body):
            return "bex", v, b, body
    got = guarded_forall(f)
    if got is not None:
        return ("ball", *got)
    got = guarded_exists(f)
    if got is not None:
        return ("bex", *got)
    return None


# ------------------------------------------------- disjunction utilities

def _disj_tail(cs: list[Formula], k: int) -> Formula:
    out = cs[-1]
    for m in range(len(cs) - 2, k - 1, -1):
        out = Or(cs[m], out)
    return out


def _inject(cs: list[Formula], k: int, p: T.Proof) -> T.Proof:
    """Lift a proof of cs[k] to the full right-nested disjunction."""
    out = p if k == len(cs) - 1 else T.or_left(p, _disj_tail(cs, k + 1))
    for m in range(k - 1, -1, -1):
        out = T.or_right(cs[m], out)
    return out


def _elim_cases(
    p_disj: T.Proof,
    cs: list[Formula],
    branch: Callable[[int, T.Proof], T.Proof],
) -> T.Proof:
    """Case split on a right-nested disjunction; each branch proves the
    same conclusion from its hypothesis."""
    last = len(cs) - 1
    impl = T.discharge(branch(last, T.hyp(cs[last])), cs[last])
    for k in range(last - 1, -1, -1):
        tail = _disj_tail(cs, k)
        left_impl = T.discharge(branch(k, T.hyp(cs[k])), cs[k])
        impl = T.discharge(
            T.or_elim(T.hyp(tail), left_impl, impl), tail
        )
    return T.mp(impl, p_disj)


# -------------------------------------------------------- public builders

def prove_ne_numerals(i: int, j: int, bank: LemmaBank | None = None) -> Derivation:
    bank = bank or LemmaBank()
    return T.compile_proof(bank.ne(i, j))


def prove_le_numerals(i: int, j: int, bank: LemmaBank | None = None) -> Derivation:
    bank = bank or LemmaBank()
    return T.compile_proof(bank.le(i, j))


def prove_order_totality(n: int, bank: LemmaBank | None = None) -> Derivation:
    bank = bank or LemmaBank()
    return T.compile_proof(bank.tot(n))


def prove_least_unique(
    mu: Formula, i: int, bank: LemmaBank | None = None
) -> Derivation:
    """The least-witness uniqueness implication for mu at i.

    Concludes: if i falsifies mu while everything below i satisfies it,
    then any v0 doing the same equals i.  Provable outright, whatever mu
    says; the premises live inside the implication.
    """
    bank = bank or LemmaBank()
    if free_vars(mu) - {0}:
        raise InputError("the formula may only mention v0 free")
    if 2 in all_var_indices(mu):
        raise InputError("v2 is reserved for the bounded prefix")
    if i < 0:
        raise InputError("the index must be a natural number")
    mu_v2 = substitute(mu, 0, Var(2))
    mu_i = substitute(mu, 0, numeral(i))
    prefix_i = Forall(2, Imp(Le(Succ(Var(2)), numeral(i)), mu_v2))
    prefix_v = Forall(2, Imp(Le(Succ(Var(2)), Var(0)), mu_v2))
    outer = And(Not(mu_i), prefix_i)
    inner = And(Not(mu), prefix_v)
    target = Eq(Var(0), numeral(i))

    h_out = T.hyp(outer)
    h_in = T.hyp(inner)
    toti = T.forall_elim(bank.tot(i), Var(0))

    low = Le(Var(0), numeral(i))
    h_low = T.hyp(low)
    dis = T.mp(T.forall_elim(bank.l7(i), Var(0)), h_low)
    cs = [Eq(Var(0), numeral(k)) for k in range(i + 1)]

    def low_branch(k: int, hek: T.Proof) -> T.Proof:
        if k == i:
            return hek
        gi = T.forall_elim(T.and_right(h_out), numeral(k))
        pos = T.mp(gi, bank.le(k + 1, i))
        lb = bank.leib(Not(mu), 0, Var(0), numeral(k))
        neg = T.mp(T.mp(lb, hek), T.and_left(h_in))
        return T.contradiction_to(pos, neg, target)

    b_low = T.discharge(_elim_cases(dis, cs, low_branch), low)

    high = Le(numeral(i), Var(0))
    h_high = T.hyp(high)
    d2 = T.mp(T.forall_elim(bank.l5(i), Var(0)), h_high)
    strict = Le(Succ(numeral(i)), Var(0))
    equal = Eq(numeral(i), Var(0))
    h_strict = T.hyp(strict)
    gv = T.forall_elim(T.and_right(h_in), numeral(i))
    pos = T.mp(gv, h_strict)
    b_strict = T.discharge(
        T.contradiction_to(pos, T.and_left(h_out), target), strict
    )
    h_equal = T.hyp(equal)
    b_equal = T.discharge(T.eq_sym(h_equal), equal)
    b_high = T.discharge(T.or_elim(d2, b_strict, b_equal), high)

    core = T.or_elim(toti, b_low, b_high)
    closed = T.gen(0, T.discharge(core, inner))
    return T.compile_proof(T.discharge(closed, outer))


_SIGMA_CLASSES = (FormulaClass.DELTA0, FormulaClass.SIGMA1, FormulaClass.SIGMA)


def prove_sigma(
    sentence: Formula,
    budget: int = 64,
    bank: LemmaBank | None = None,
) -> Derivation:
    """A derivation of the closed true sentence from the bounded-or-
    existential fragment.  False sentences are refused outright; sentences
    the budget cannot settle raise the budget error."""
    bank = bank or LemmaBank()
    if free_vars(sentence):
        raise InputError("the sentence must be closed")
    if classify(sentence) not in _SIGMA_CLASSES:
        raise InputError("outside the supported fragment")
    verdict = eval_budgeted(sentence, budget)
    if verdict is Truth.FALSE:
        raise RefusedError("the sentence is false; refusing to derive it")
    if verdict is Truth.UNKNOWN:
        raise BudgetExhaustedError(
            f"truth not settled at witness budget {budget}", budget=budget
        )
    return T.compile_proof(bank.prove_true(sentence, budget))


def refute_delta0(
    sentence: Formula,
    budget: int = 64,
    bank: LemmaBank | None = None,
) -> Derivation:
    """A derivation of the negation of a false closed bounded sentence."""
    bank = bank or LemmaBank()
    if free_vars(sentence):
        raise InputError("the sentence must be closed")
    if classify(sentence) is not FormulaClass.DELTA0:
        raise InputError("only bounded sentences are refuted")
    if eval_budgeted(sentence, budget) is not Truth.FALSE:
        raise RefusedError("the sentence is not false; nothing to refute")
    return T.compile_proof(bank.prove_false(sentence, budget))


# ------------------------------------------------------ naming decisions

@dataclass(frozen=True)
class NamingEvidence:
    """Outcome of deciding whether a formula provably names a number.

    kind is "names", "refuted", or "unknown".  For "names" the derivation
    concludes the naming equivalence; for "refuted" it concludes the
    negation, and witness records the instance that broke it.
    """

    kind: str
    number: int
    witness: int | None
    derivation: Derivation | None
    reason: str | None = None

    def to_json_obj(self) -> dict:
        out: dict = {"kind": self.kind, "number": self.number}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason is not None:
            out["reason"] = self.reason
        if self.derivation is not None:
            out["steps"] = len(self.derivation)
        return out


def naming_statement(mu: Formula, i: int) -> Formula:
    return Forall(0, Iff(mu, Eq(Var(0), numeral(i))))


def names_provable(
    mu: Formula,
    i: int,
    budget: int = 64,
    bank: LemmaBank | None = None,
) -> NamingEvidence:
    """Decide the naming equivalence for a bounded formula, with evidence.

    Either a derivation of (A v0)(mu <-> v0 = i), or a derivation of its
    negation, or an honest unknown when no bound on v0 can be read off
    the formula (or it exceeds the budget)."""
    bank = bank or LemmaBank()
    if free_vars(mu) - {0}:
        raise InputError("the formula may only mention v0 free")
    if i < 0:
        raise InputError("the number must be natural")
    if classify(mu) is not FormulaClass.DELTA0:
        return NamingEvidence(
            "unknown", i, None, None, "only bounded formulas are decided"
        )
    statement = naming_statement(mu, i)

    def instance_true(j: int) -> bool:
        return (
            eval_budgeted(substitute(mu, 0, numeral(j)), budget) is Truth.TRUE
        )

    # a true instance other than i refutes the equivalence immediately,
    # bound or no bound
    got = bank.find_bound(mu)
    if got is None:
        scan_hi = budget
        bounded = False
    else:
        m, bound_fn = got
        if m > budget:
            return NamingEvidence(
                "unknown", i, None, None,
                f"bound {m} exceeds budget {budget}",
            )
        scan_hi = m
        bounded = True

    truths = [instance_true(j) for j in range(scan_hi + 1)]
    bad = next((j for j, tv in enumerate(truths) if tv and j != i), None)
    if bad is not None:
        h = T.hyp(statement)
        inst = T.forall_elim(h, numeral(bad))
        eqd = T.mp(T.iff_left(inst), bank.prove_true(
            substitute(mu, 0, numeral(bad)), budget
        ))
        c = T.contradiction_to(eqd, bank.ne(bad, i), _C0)
        return NamingEvidence(
            "refuted", i, bad,
            T.compile_proof(bank._refute(statement, c)),
        )
    i_true = instance_true(i) if i <= scan_hi else (
        eval_budgeted(substitute(mu, 0, numeral(i)), budget) is Truth.TRUE
    )
    if not i_true:
        h = T.hyp(statement)
        inst = T.forall_elim(h, numeral(i))
        back = T.mp(T.iff_right(inst), T.eq_refl(numeral(i)))
        c = T.contradiction_to(
            back, bank.prove_false(substitute(mu, 0, numeral(i)), budget), _C0
        )
        return NamingEvidence(
            "refuted", i, i,
            T.compile_proof(bank._refute(statement, c)),
        )
    if not bounded:
        return NamingEvidence(
            "unknown", i, None, None,
            "no syntactic bound on the free variable",
        )

    # mu holds at i and nowhere else below its bound: prove the equivalence
    mux = expand_bounded(mu)
    target = Eq(Var(0), numeral(i))
    h_mu = T.hyp(mux)
    up = bound_fn(h_mu)  # v0 <= m
    dis = T.mp(T.forall_elim(bank.l7(m), Var(0)), up)
    cs = [Eq(Var(0), numeral(k)) for k in range(m + 1)]

    def branch(k: int, hek: T.Proof) -> T.Proof:
        if k == i:
            return hek
        lb = bank.leib(mux, 0, Var(0), numeral(k))
        pos = T.mp(T.mp(lb, hek), h_mu)
        neg = bank.prove_false(substitute(mu, 0, numeral(k)), budget)
        return T.contradiction_to(pos, neg, target)

    fwd = T.discharge(_elim_cases(dis, cs, branch), mux)
    h_eq = T.hyp(target)
    pk = bank.prove_true(substitute(mu, 0, numeral(i)), budget)
    lb = bank.leib(mux, 0, numeral(i), Var(0))
    back = T.discharge(T.mp(T.mp(lb, T.eq_sym(h_eq)), pk), target)
    tree = T.gen(0, T.iff_intro(fwd, back))
    return NamingEvidence("names", i, None, T.compile_proof(tree))


# ------------------------------------------------------------ proof search

def search_proof(
    target: Formula,
    theory: Theory | None = None,
    depth: int = 6,
    budget: int = 64,
) -> Derivation | None:
    """Search for a derivation of the target, or None.

    Strategies, in order: an axiom of the theory, a schema instance, a
    true closed sentence from the supported fragment, a decidable naming
    equivalence, and finally structural peeling (universal closure,
    conjunction, weakening) down to the given depth."""
    bank = LemmaBank(theory)
    tree = _search(target, bank, depth, budget)
    return None if tree is None else T.compile_proof(tree)


def _search(
    target: Formula, bank: LemmaBank, depth: int, budget: int
) -> T.Proof | None:
    for label, f in bank.theory.axioms:
        if expr_equal(f, target):
            return bank._ax(label)
    for name in SCHEMA_NAMES:
        if _check_schema(name, target) is None:
            return T.sch(name, target)
    if not free_vars(target) and classify(target) in _SIGMA_CLASSES:
        try:
            if eval_budgeted(target, budget) is Truth.TRUE:
                return bank.prove_true(target, budget)
        except (InputError, RefusedError, BudgetExhaustedError):
            pass
    match target:
        case Forall(0, Iff(mu, Eq(Var(0), t))) if not free_vars(t):
            try:
                got = names_provable(mu, eval_term(t, {}), budget, bank)
            except InputError:
                got = None
            if got is not None and got.kind == "names" and got.derivation:
                if expr_equal(got.derivation.conclusion, target):
                    return _rebuild(got.derivation)
    if depth <= 0:
        return None
    match target:
        case Forall(v, body):
            sub = _search(body, bank, depth - 1, budget)
            if sub is not None:
                return T.gen(v, sub)
        case And(l, r):
            pl = _search(l, bank, depth - 1, budget)
            pr = _search(r, bank, depth - 1, budget) if pl is not None else None
            if pl is not None and pr is not None:
                return T.and_intro(pl, pr)
        case Imp(a, b):
            if expr_equal(a, b):
                return T.imp_refl(a)
            sub = _search(b, bank, depth - 1, budget)
            if sub is not None:
                return T.k_lift(sub, a)
        case Or(l, r):
            sub = _search(l, bank, depth - 1, budget)
            if sub is not None:
                return T.or_left(sub, r)
            sub = _search(r, bank, depth - 1, budget)
            if sub is not None:
                return T.or_right(l, sub)
    return None


def _rebuild(d: Derivation) -> T.Proof:
    """Re-express a flat derivation as a proof tree."""
    nodes: list[T.Proof] = []
    for step in d.steps:
        match step.rule:
            case "axiom":
                nodes.append(T.Ax(step.name or "", step.formula))
            case "schema":
                nodes.append(T.Sch(step.name or "", step.formula))
            case "mp":
                a, b = step.premises
                nodes.append(T.MP(nodes[a], nodes[b], step.formula))
            case "gen":
                (a,) = step.premises
                nodes.append(
                    T.Gen(step.var if step.var is not None else 0, nodes[a], step.formula)
                )
    return nodes[-1]
