"""Terms and formulas of first-order arithmetic in De Morgan normal form.

Everything here is an immutable value.  Formulas carry negation only on
atoms; ``dual`` plays the role of negation for compound formulas.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Union

EQ = "="
LT = "<"


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Succ:
    arg: "Term"


@dataclass(frozen=True)
class Plus:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Times:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


Term = Union[Var, Zero, Succ, Plus, Times, App]
ZERO = Zero()


def numeral(n: int) -> Term:
    t: Term = ZERO
    for _ in range(n):
        t = Succ(t)
    return t


def term_children(t: Term) -> tuple:
    if isinstance(t, Succ):
        return (t.arg,)
    if isinstance(t, (Plus, Times)):
        return (t.left, t.right)
    if isinstance(t, App):
        return t.args
    return ()


def term_head(t: Term):
    """A hashable description of the outermost function symbol."""
    if isinstance(t, Var):
        return ("var", t.name)
    if isinstance(t, Zero):
        return ("0",)
    if isinstance(t, Succ):
        return ("succ",)
    if isinstance(t, Plus):
        return ("+",)
    if isinstance(t, Times):
        return ("*",)
    return ("fn", t.fn, len(t.args))


def rebuild_term(t: Term, kids: tuple) -> Term:
    if isinstance(t, Succ):
        return Succ(kids[0])
    if isinstance(t, Plus):
        return Plus(kids[0], kids[1])
    if isinstance(t, Times):
        return Times(kids[0], kids[1])
    if isinstance(t, App):
        return App(t.fn, kids)
    return t


def subterms(t: Term) -> set:
    out = {t}
    for k in term_children(t):
        out |= subterms(k)
    return out


# ------------------------------------------------------------- formulas

@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class NAtom:
    pred: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Ex:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class All:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class BEx:
    var: str
    bound: Term
    body: "Formula"

    def __post_init__(self):
        if self.var in free_vars(self.bound):
            raise ValueError(f"bound term of {self.var} mentions {self.var}")


@dataclass(frozen=True)
class BAll:
    var: str
    bound: Term
    body: "Formula"

    def __post_init__(self):
        if self.var in free_vars(self.bound):
            raise ValueError(f"bound term of {self.var} mentions {self.var}")


Formula = Union[Atom, NAtom, And, Or, Ex, All, BEx, BAll]
BINDERS = (Ex, All, BEx, BAll)


def eq(s: Term, t: Term) -> Atom:
    return Atom(EQ, (s, t))


def lt(s: Term, t: Term) -> Atom:
    return Atom(LT, (s, t))


def neq(s: Term, t: Term) -> NAtom:
    return NAtom(EQ, (s, t))


def nlt(s: Term, t: Term) -> NAtom:
    return NAtom(LT, (s, t))


def is_literal(f: Formula) -> bool:
    return isinstance(f, (Atom, NAtom))


# ------------------------------------------------------------ signature

BASE_FUNCTIONS = {"0": 0, "succ": 1, "+": 2, "*": 2}
BASE_PREDICATES = {EQ: 2, LT: 2}


class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """Declared oracle symbols on top of the fixed arithmetic base."""

    functions: tuple = ()
    predicates: tuple = ()

    def __post_init__(self):
        fns = dict(self.functions)
        preds = dict(self.predicates)
        for name in fns:
            if name in BASE_FUNCTIONS:
                raise SignatureError(f"base function symbol {name!r} cannot be redeclared")
        for name in preds:
            if name in BASE_PREDICATES:
                raise SignatureError(f"base predicate {name!r} cannot be redeclared")
        object.__setattr__(self, "functions", tuple(sorted(fns.items())))
        object.__setattr__(self, "predicates", tuple(sorted(preds.items())))

    @property
    def function_arity(self) -> dict:
        return {**BASE_FUNCTIONS, **dict(self.functions)}

    @property
    def predicate_arity(self) -> dict:
        return {**BASE_PREDICATES, **dict(self.predicates)}

    def check_term(self, t: Term) -> None:
        if isinstance(t, App):
            ar = dict(self.functions).get(t.fn)
            if ar is None:
                raise SignatureError(f"undeclared function symbol {t.fn!r}")
            if ar != len(t.args):
                raise SignatureError(f"{t.fn!r} expects {ar} arguments, got {len(t.args)}")
        for k in term_children(t):
            self.check_term(k)

    def check_formula(self, f: Formula) -> None:
        if isinstance(f, (Atom, NAtom)):
            ar = self.predicate_arity.get(f.pred)
            if ar is None:
                raise SignatureError(f"undeclared predicate {f.pred!r}")
            if ar != len(f.args):
                raise SignatureError(f"{f.pred!r} expects {ar} arguments, got {len(f.args)}")
            for a in f.args:
                self.check_term(a)
        elif isinstance(f, (And, Or)):
            self.check_formula(f.left)
            self.check_formula(f.right)
        elif isinstance(f, (BEx, BAll)):
            self.check_term(f.bound)
            self.check_formula(f.body)
        else:
            self.check_formula(f.body)


BASE_SIGNATURE = Signature()


# --------------------------------------------------------- free variables

@lru_cache(maxsize=None)
def _fv_term(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    out = frozenset()
    for k in term_children(t):
        out |= _fv_term(k)
    return out


@lru_cache(maxsize=None)
def _fv_formula(f: Formula) -> frozenset:
    if isinstance(f, (Atom, NAtom)):
        out = frozenset()
        for a in f.args:
            out |= _fv_term(a)
        return out
    if isinstance(f, (And, Or)):
        return _fv_formula(f.left) | _fv_formula(f.right)
    inner = _fv_formula(f.body) - {f.var}
    if isinstance(f, (BEx, BAll)):
        inner |= _fv_term(f.bound)
    return inner


def free_vars(x) -> frozenset:
    """Free variables of a term, a formula, or an iterable of those."""
    if isinstance(x, (Var, Zero, Succ, Plus, Times, App)):
        return _fv_term(x)
    if isinstance(x, (Atom, NAtom, And, Or, Ex, All, BEx, BAll)):
        return _fv_formula(x)
    out = frozenset()
    for y in x:
        out |= free_vars(y)
    return out


def formula_terms(f: Formula, bound: frozenset = frozenset()) -> set:
    """Terms occurring in f (with all subterms) that mention no bound variable."""
    out = set()
    if isinstance(f, (Atom, NAtom)):
        for a in f.args:
            out |= {s for s in subterms(a) if not (free_vars(s) & bound)}
    elif isinstance(f, (And, Or)):
        out |= formula_terms(f.left, bound) | formula_terms(f.right, bound)
    else:
        if isinstance(f, (BEx, BAll)):
            out |= {s for s in subterms(f.bound) if not (free_vars(s) & bound)}
        out |= formula_terms(f.body, bound | {f.var})
    return out


# ---------------------------------------------------------------- duality

@lru_cache(maxsize=None)
def dual(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return NAtom(f.pred, f.args)
    if isinstance(f, NAtom):
        return Atom(f.pred, f.args)
    if isinstance(f, And):
        return Or(dual(f.left), dual(f.right))
    if isinstance(f, Or):
        return And(dual(f.left), dual(f.right))
    if isinstance(f, Ex):
        return All(f.var, dual(f.body))
    if isinstance(f, All):
        return Ex(f.var, dual(f.body))
    if isinstance(f, BEx):
        return BAll(f.var, f.bound, dual(f.body))
    return BEx(f.var, f.bound, dual(f.body))


# ------------------------------------------------------------ substitution

Substitution = Mapping[str, Term]


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    """The least primed copy of ``base`` not in ``avoid``.

    The choice depends only on its arguments, so every operation built on
    it stays pure and reproducible.
    """
    avoid = set(avoid)
    root = base.rstrip("'")
    k = 1
    while root + "'" * k in avoid:
        k += 1
    return root + "'" * k


def _subst_term(theta: Mapping[str, Term], t: Term) -> Term:
    if isinstance(t, Var):
        return theta.get(t.name, t)
    kids = term_children(t)
    if not kids:
        return t
    return rebuild_term(t, tuple(_subst_term(theta, k) for k in kids))


def _subst_formula(theta: Mapping[str, Term], f: Formula) -> Formula:
    fv = free_vars(f)
    theta = {v: s for v, s in theta.items() if v in fv and s != Var(v)}
    if not theta:
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(_subst_term(theta, a) for a in f.args))
    if isinstance(f, NAtom):
        return NAtom(f.pred, tuple(_subst_term(theta, a) for a in f.args))
    if isinstance(f, (And, Or)):
        return type(f)(_subst_formula(theta, f.left), _subst_formula(theta, f.right))
    x = f.var
    inner = {v: s for v, s in theta.items() if v != x}
    body = f.body
    # the bound term sits outside the binder but still must not mention it
    live = free_vars(body) | (free_vars(f.bound) if isinstance(f, (BEx, BAll)) else frozenset())
    if any(x in free_vars(s) for v, s in inner.items() if v in live):
        avoid = live | free_vars(list(inner.values())) | set(inner)
        y = fresh_name(x, avoid)
        body = _subst_formula({x: Var(y)}, body)
        x = y
    body = _subst_formula(inner, body)
    if isinstance(f, (BEx, BAll)):
        return type(f)(x, _subst_term(theta, f.bound), body)
    return type(f)(x, body)


def apply_subst(theta: Substitution, x):
    """Capture-avoiding simultaneous substitution on a term or formula."""
    theta = dict(theta)
    if isinstance(x, (Var, Zero, Succ, Plus, Times, App)):
        return _subst_term(theta, x) if theta else x
    return _subst_formula(theta, x)


def instantiate(f: Formula, t: Term) -> Formula:
    """Body of a quantified formula with its bound variable replaced by t."""
    return apply_subst({f.var: t}, f.body)


def term_replace(t: Term, old: Term, new: Term) -> Term:
    """Replace every occurrence of the subterm ``old`` by ``new``."""
    if t == old:
        return new
    kids = term_children(t)
    if not kids:
        return t
    return rebuild_term(t, tuple(term_replace(k, old, new) for k in kids))


# ------------------------------------------------------------- hierarchy

@dataclass(frozen=True)
class HierarchyLevel:
    kind: str  # "delta0", "sigma" or "pi"
    level: int

    def __post_init__(self):
        if self.kind not in ("delta0", "sigma", "pi"):
            raise ValueError(self.kind)
        if (self.kind == "delta0") != (self.level == 0):
            raise ValueError("level 0 is written delta0")

    def __str__(self):
        return "delta0" if self.kind == "delta0" else f"{self.kind}-{self.level}"


DELTA0 = HierarchyLevel("delta0", 0)


def sigma(n: int) -> HierarchyLevel:
    return DELTA0 if n == 0 else HierarchyLevel("sigma", n)


def pi(n: int) -> HierarchyLevel:
    return DELTA0 if n == 0 else HierarchyLevel("pi", n)


@lru_cache(maxsize=None)
def levels(f: Formula) -> tuple:
    """Least (s, p) with f syntactically in Sigma_s and in Pi_p.

    Classes are closed under conjunction and disjunction.  A bounded
    quantifier whose body is not bounded counts like the unbounded
    quantifier it abbreviates.
    """
    if isinstance(f, (Atom, NAtom)):
        return (0, 0)
    if isinstance(f, (And, Or)):
        s1, p1 = levels(f.left)
        s2, p2 = levels(f.right)
        return (max(s1, s2), max(p1, p2))
    s, p = levels(f.body)
    if isinstance(f, (BEx, BAll)) and (s, p) == (0, 0):
        return (0, 0)
    if isinstance(f, (Ex, BEx)):
        s2 = max(1, s)
        return (s2, s2 + 1)
    p2 = max(1, p)
    return (p2 + 1, p2)


def classify(f: Formula) -> HierarchyLevel:
    s, p = levels(f)
    if s == 0:
        return DELTA0
    if p < s:
        return pi(p)
    return sigma(s)


def is_in_level(f: Formula, lvl: HierarchyLevel) -> bool:
    s, p = levels(f)
    if lvl.kind == "delta0":
        return s == 0
    if lvl.kind == "sigma":
        return s <= lvl.level
    return p <= lvl.level


def is_sigma(f: Formula, n: int) -> bool:
    return levels(f)[0] <= n


def is_pi(f: Formula, n: int) -> bool:
    return levels(f)[1] <= n


# ------------------------------------------------------- quantifier blocks

def forall_block(f: Formula) -> tuple:
    """Split the leading unbounded universal quantifiers: (vars, body)."""
    xs = []
    while isinstance(f, All):
        xs.append(f.var)
        f = f.body
    return tuple(xs), f


def close_forall(xs: Iterable[str], body: Formula) -> Formula:
    for x in reversed(tuple(xs)):
        body = All(x, body)
    return body


def merge_forall_block(f1: Formula, f2: Formula) -> Formula:
    """From forall xs.A and forall ys.B build forall xs,ys.(A and B)."""
    xs, a = forall_block(f1)
    ys, b = forall_block(f2)
    xs = list(xs)
    # binders of the first block must not capture free variables of f2
    for i, x in enumerate(xs):
        if x in free_vars(f2) or x in xs[:i]:
            y = fresh_name(x, set(xs) | set(ys) | free_vars(a) | free_vars(f2))
            a = apply_subst({x: Var(y)}, a)
            xs[i] = y
    ys = list(ys)
    taken = set(xs) | free_vars(a)
    for i, y in enumerate(ys):
        if y in taken or y in ys[:i]:
            z = fresh_name(y, taken | set(ys) | free_vars(b))
            b = apply_subst({y: Var(z)}, b)
            ys[i] = z
        taken.add(ys[i])
    return close_forall(xs + ys, And(a, b))
