"""Sequents, rule instances and local checking of inference steps."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .syntax import (
    EQ, And, All, App, Atom, BAll, BEx, Ex, Formula, NAtom, Or, Plus, Signature,
    Succ, Term, Times, Var, Zero, apply_subst, dual, eq, free_vars, instantiate, is_pi,
    is_sigma, lt, neq, nlt, term_children, term_head, BASE_SIGNATURE, formula_terms,
)


@dataclass(frozen=True)
class Sequent:
    ante: frozenset
    succ: frozenset

    def __init__(self, ante: Iterable[Formula] = (), succ: Iterable[Formula] = ()):
        object.__setattr__(self, "ante", frozenset(ante))
        object.__setattr__(self, "succ", frozenset(succ))

    def add(self, ante: Iterable[Formula] = (), succ: Iterable[Formula] = ()) -> "Sequent":
        return Sequent(self.ante | set(ante), self.succ | set(succ))

    def union(self, other: "Sequent") -> "Sequent":
        return Sequent(self.ante | other.ante, self.succ | other.succ)

    def issubset(self, other: "Sequent") -> bool:
        return self.ante <= other.ante and self.succ <= other.succ

    def formulas(self):
        return self.ante | self.succ

    def free_vars(self) -> frozenset:
        return free_vars(self.ante | self.succ)

    def terms(self) -> set:
        out = set()
        for f in self.ante | self.succ:
            out |= formula_terms(f)
        return out

    def subst(self, theta) -> "Sequent":
        return Sequent((apply_subst(theta, f) for f in self.ante),
                       (apply_subst(theta, f) for f in self.succ))

    def __str__(self):
        from .formats import sequent_text
        return sequent_text(self)


# ------------------------------------------------------------ rule instances

AXIOM_TAGS = {"id", "eq1", "eq2", "eq3", "neg-left", "neg-right", "q-axiom", "axiom"}
ONE_PREMISS = {"and-left", "or-right", "ex-left", "ex-right", "all-left", "all-right",
               "bex-left", "bex-right", "ball-left", "ball-right", "sub", "wk"}
TWO_PREMISS = {"and-right", "or-left", "cut", "ind"}
EIGEN_TAGS = {"ex-left", "all-right", "bex-left", "ball-right", "ind"}
WITNESS_TAGS = {"ex-right", "all-left", "bex-right", "ball-left"}
ALL_TAGS = AXIOM_TAGS | ONE_PREMISS | TWO_PREMISS | {"assumption"}


@dataclass(frozen=True)
class Rule:
    """An annotated rule instance.

    ``formula`` is the principal formula (cut formula for cut, the formula
    with hole ``var`` for ind).  ``eigen`` names the eigenvariable and
    ``term`` the witness or the induction term.
    """

    tag: str
    formula: Optional[Formula] = None
    index: Optional[object] = None
    term: Optional[Term] = None
    eigen: Optional[str] = None
    var: Optional[str] = None
    subst: tuple = ()
    name: Optional[str] = None

    def __post_init__(self):
        if self.tag not in ALL_TAGS:
            raise ValueError(f"unknown rule tag {self.tag!r}")
        if self.tag in ("and-left", "or-right") and self.index not in (0, 1):
            raise ValueError(f"{self.tag} needs index 0 or 1")
        if self.tag in EIGEN_TAGS and not self.eigen:
            raise ValueError(f"{self.tag} needs an eigenvariable")
        if isinstance(self.subst, dict):
            object.__setattr__(self, "subst", tuple(sorted(self.subst.items())))

    @property
    def theta(self) -> dict:
        return dict(self.subst)

    @property
    def arity(self) -> int:
        if self.tag in AXIOM_TAGS or self.tag == "assumption":
            return 0
        return 2 if self.tag in TWO_PREMISS else 1

    @property
    def eigenvariables(self) -> frozenset:
        if self.tag == "sub":
            return frozenset(v for v, t in self.subst if t != Var(v))
        if self.tag in EIGEN_TAGS:
            return frozenset((self.eigen,))
        return frozenset()


class StepError(Exception):
    def __init__(self, kind: str, message: str):
        self.kind = kind
        self.message = message
        super().__init__(f"{kind}: {message}")


# ---------------------------------------------------------------- theories

@dataclass(frozen=True)
class Theory:
    """Declared symbols plus named initial sequents (schematic in their free variables)."""

    signature: Signature = BASE_SIGNATURE
    axioms: tuple = ()

    def axiom(self, name: str) -> Sequent:
        for n, s in self.axioms:
            if n == name:
                return s
        raise KeyError(name)


EMPTY_THEORY = Theory()


# ----------------------------------------------------------- matching

def match_term(pat: Term, t: Term, sigma: dict, pvars: frozenset, bound: dict) -> Optional[dict]:
    if isinstance(pat, Var):
        if pat.name in bound:
            return sigma if t == Var(bound[pat.name]) else None
        if pat.name in pvars:
            if free_vars(t) & set(bound.values()):
                return None
            got = sigma.get(pat.name)
            if got is None:
                return {**sigma, pat.name: t}
            return sigma if got == t else None
        return sigma if t == pat else None
    if term_head(pat) != term_head(t):
        return None
    for p, s in zip(term_children(pat), term_children(t)):
        sigma = match_term(p, s, sigma, pvars, bound)
        if sigma is None:
            return None
    return sigma


def match_formula(pat: Formula, f: Formula, sigma: dict, pvars: frozenset,
                  bound: Optional[dict] = None) -> Optional[dict]:
    """Match a pattern formula, binding pattern variables; binders match up to renaming."""
    bound = bound or {}
    if type(pat) is not type(f):
        return None
    if isinstance(pat, (Atom, NAtom)):
        if pat.pred != f.pred or len(pat.args) != len(f.args):
            return None
        for p, s in zip(pat.args, f.args):
            sigma = match_term(p, s, sigma, pvars, bound)
            if sigma is None:
                return None
        return sigma
    if isinstance(pat, (And, Or)):
        sigma = match_formula(pat.left, f.left, sigma, pvars, bound)
        if sigma is None:
            return None
        return match_formula(pat.right, f.right, sigma, pvars, bound)
    if isinstance(pat, (BEx, BAll)):
        sigma = match_term(pat.bound, f.bound, sigma, pvars, bound)
        if sigma is None:
            return None
    return match_formula(pat.body, f.body, sigma, pvars, {**bound, pat.var: f.var})


# ---------------------------------------------------------------- Q axioms

def _q(name):
    return Var(name)


_x, _y, _z = _q("x"), _q("y"), _q("z")

Q_AXIOMS = {
    "1": [neq(Succ(_x), Zero())],
    "2": [neq(Succ(_x), Succ(_y)), eq(_x, _y)],
    "3": [eq(_x, Zero()), BEx("y", _x, eq(_x, Succ(_y)))],
    "4": [eq(Plus(_x, Zero()), _x)],
    "5": [eq(Plus(_x, Succ(_y)), Succ(Plus(_x, _y)))],
    "6": [eq(Times(_x, Zero()), Zero())],
    "7": [eq(Times(_x, Succ(_y)), Plus(Times(_x, _y), _x))],
    "8a": [nlt(_x, _y), BEx("z", _y, eq(Plus(_x, Succ(_z)), _y))],
    "8b": [lt(_x, _y), BAll("z", _y, neq(Plus(_x, Succ(_z)), _y))],
}


def q_instance(clause: list, s: Sequent) -> Optional[dict]:
    """Find an instantiation under which every clause member is in the
    succedent or has its dual in the antecedent."""
    pvars = free_vars(clause)
    pool = list(s.succ) + [dual(f) for f in s.ante]

    def go(i, sigma):
        if i == len(clause):
            return sigma
        for f in pool:
            got = match_formula(clause[i], f, sigma, pvars)
            if got is not None:
                res = go(i + 1, got)
                if res is not None:
                    return res
        return None

    return go(0, {})


def axiom_instance(schema: Sequent, s: Sequent) -> Optional[dict]:
    """Instantiate the free variables of ``schema`` so it is contained in ``s``."""
    pvars = schema.free_vars()
    items = [(f, s.ante) for f in schema.ante] + [(f, s.succ) for f in schema.succ]

    def go(i, sigma):
        if i == len(items):
            return sigma
        pat, side = items[i]
        for f in side:
            got = match_formula(pat, f, sigma, pvars)
            if got is not None:
                res = go(i + 1, got)
                if res is not None:
                    return res
        return None

    return go(0, {})


# --------------------------------------------------------------- axioms

def _eq_args_ok(ss, ts, ante) -> bool:
    return all(s == t or eq(s, t) in ante for s, t in zip(ss, ts))


def _find_id(c: Sequent):
    return next(iter(c.ante & c.succ), None)


def _find_eq1(c: Sequent):
    for f in c.succ:
        if isinstance(f, Atom) and f.pred == EQ and f.args[0] == f.args[1]:
            return f
    return None


def _find_eq2(c: Sequent):
    for f in c.succ:
        if isinstance(f, Atom) and f.pred == EQ:
            s, t = f.args
            if isinstance(s, Var) or term_head(s) != term_head(t):
                continue
            if _eq_args_ok(term_children(s), term_children(t), c.ante):
                return f
    return None


def _find_eq3(c: Sequent):
    for f in c.succ:
        if not isinstance(f, Atom):
            continue
        for g in c.ante:
            if isinstance(g, Atom) and g.pred == f.pred and len(g.args) == len(f.args):
                if _eq_args_ok(g.args, f.args, c.ante):
                    return f
    return None


def _find_neg(side: frozenset):
    for f in side:
        if dual(f) in side:
            return f
    return None


def _check_axiom(c: Sequent, rule: Rule, theory: Theory) -> None:
    tag, f = rule.tag, rule.formula
    if tag == "id":
        ok = (f in c.ante and f in c.succ) if f is not None else _find_id(c) is not None
    elif tag == "eq1":
        ok = _find_eq1(c if f is None else Sequent(c.ante, [f] if f in c.succ else [])) is not None
    elif tag == "eq2":
        if f is not None and isinstance(f, Atom) and f.pred == EQ:
            s, t = f.args
            if isinstance(s, App) and isinstance(t, App) and s.fn == t.fn and len(s.args) != len(t.args):
                raise StepError("arity", f"{s.fn} applied with different arities")
        ok = _find_eq2(c if f is None else Sequent(c.ante, [f] if f in c.succ else [])) is not None
    elif tag == "eq3":
        ok = _find_eq3(c if f is None else Sequent(c.ante, [f] if f in c.succ else [])) is not None
    elif tag == "neg-left":
        ok = (f in c.ante and dual(f) in c.ante) if f is not None else _find_neg(c.ante) is not None
    elif tag == "neg-right":
        ok = (f in c.succ and dual(f) in c.succ) if f is not None else _find_neg(c.succ) is not None
    elif tag == "q-axiom":
        clause = Q_AXIOMS.get(str(rule.index))
        if clause is None:
            raise StepError("missing-principal", f"no Q axiom with index {rule.index}")
        ok = q_instance(clause, c) is not None
    else:
        try:
            schema = theory.axiom(rule.name)
        except KeyError:
            raise StepError("missing-principal", f"undeclared axiom {rule.name!r}") from None
        ok = axiom_instance(schema, c) is not None
    if not ok:
        label = tag if tag != "q-axiom" else f"Q{rule.index}"
        if tag == "axiom":
            label = f"axiom {rule.name}"
        raise StepError("missing-principal", f"sequent is not an instance of {label}")


def is_q_axiom(s: Sequent) -> bool:
    """True iff s is an initial sequent: id, equality, negation or a Q instance."""
    if _find_id(s) or _find_eq1(s) or _find_eq2(s) or _find_eq3(s):
        return True
    if _find_neg(s.ante) is not None or _find_neg(s.succ) is not None:
        return True
    return any(q_instance(cl, s) is not None for cl in Q_AXIOMS.values())


def is_initial(s: Sequent, rule: Rule, theory: Theory = EMPTY_THEORY) -> bool:
    try:
        _check_axiom(s, rule, theory)
        return True
    except StepError:
        return False


# ------------------------------------------------------- one-side matching

def _side(conc: frozenset, prem: frozenset, principal: Iterable, new: Iterable, where: str):
    principal, new = set(principal), set(new)
    missing = principal - conc
    if missing:
        raise StepError("missing-principal", f"{where}: principal formula absent from conclusion")
    if not new <= prem:
        raise StepError("missing-principal", f"{where}: side formula absent from premiss")
    if not (conc - principal) <= prem or not (prem - new) <= conc:
        raise StepError("context-mismatch", f"{where}: context not preserved")


def _same(conc: frozenset, prem: frozenset, where: str):
    if conc != prem:
        raise StepError("context-mismatch", f"{where}: cedent must be unchanged")


def _fresh(c: Sequent, a: str, extra=()):
    if a in c.free_vars() or any(a in free_vars(f) for f in extra):
        raise StepError("eigenvariable-not-fresh", f"eigenvariable {a} occurs in the conclusion")


def _principal(rule: Rule, side: frozenset, kind, where: str):
    f = rule.formula
    if f is None:
        raise StepError("missing-principal", f"{rule.tag} needs its principal formula")
    if not isinstance(f, kind):
        raise StepError("missing-principal", f"{rule.tag}: principal formula has the wrong shape")
    if f not in side:
        raise StepError("missing-principal", f"{rule.tag}: principal formula not in the {where}")
    return f


def check_step(c: Sequent, rule: Rule, premisses: list, theory: Theory = EMPTY_THEORY) -> None:
    """Raise StepError unless the step is an instance of its rule schema."""
    tag = rule.tag
    if len(premisses) != rule.arity:
        raise StepError("arity", f"{tag} takes {rule.arity} premisses, got {len(premisses)}")
    if tag == "assumption":
        return
    if tag in AXIOM_TAGS:
        _check_axiom(c, rule, theory)
        return
    p = premisses[0]
    if tag == "and-left":
        f = _principal(rule, c.ante, And, "antecedent")
        _side(c.ante, p.ante, [f], [(f.left, f.right)[rule.index]], tag)
        _same(c.succ, p.succ, tag)
    elif tag == "or-right":
        f = _principal(rule, c.succ, Or, "succedent")
        _side(c.succ, p.succ, [f], [(f.left, f.right)[rule.index]], tag)
        _same(c.ante, p.ante, tag)
    elif tag == "and-right":
        f = _principal(rule, c.succ, And, "succedent")
        for part, q in zip((f.left, f.right), premisses):
            _side(c.succ, q.succ, [f], [part], tag)
            _same(c.ante, q.ante, tag)
    elif tag == "or-left":
        f = _principal(rule, c.ante, Or, "antecedent")
        for part, q in zip((f.left, f.right), premisses):
            _side(c.ante, q.ante, [f], [part], tag)
            _same(c.succ, q.succ, tag)
    elif tag in ("ex-left", "all-right"):
        kind, side = (Ex, "antecedent") if tag == "ex-left" else (All, "succedent")
        f = _principal(rule, c.ante if tag == "ex-left" else c.succ, kind, side)
        _fresh(c, rule.eigen)
        body = instantiate(f, Var(rule.eigen))
        if tag == "ex-left":
            _side(c.ante, p.ante, [f], [body], tag)
            _same(c.succ, p.succ, tag)
        else:
            _side(c.succ, p.succ, [f], [body], tag)
            _same(c.ante, p.ante, tag)
    elif tag in ("ex-right", "all-left"):
        if rule.term is None:
            raise StepError("missing-principal", f"{tag} needs a witness term")
        kind = Ex if tag == "ex-right" else All
        f = _principal(rule, c.succ if tag == "ex-right" else c.ante, kind,
                       "succedent" if tag == "ex-right" else "antecedent")
        body = instantiate(f, rule.term)
        if tag == "ex-right":
            _side(c.succ, p.succ, [f], [body], tag)
            _same(c.ante, p.ante, tag)
        else:
            _side(c.ante, p.ante, [f], [body], tag)
            _same(c.succ, p.succ, tag)
    elif tag == "bex-left":
        f = _principal(rule, c.ante, BEx, "antecedent")
        _fresh(c, rule.eigen)
        a = Var(rule.eigen)
        _side(c.ante, p.ante, [f], [lt(a, f.bound), instantiate(f, a)], tag)
        _same(c.succ, p.succ, tag)
    elif tag == "ball-right":
        f = _principal(rule, c.succ, BAll, "succedent")
        _fresh(c, rule.eigen)
        a = Var(rule.eigen)
        _side(c.ante, p.ante, [], [lt(a, f.bound)], tag)
        _side(c.succ, p.succ, [f], [instantiate(f, a)], tag)
    elif tag == "bex-right":
        if rule.term is None:
            raise StepError("missing-principal", "bex-right needs a witness term")
        f = _principal(rule, c.succ, BEx, "succedent")
        guard = lt(rule.term, f.bound)
        if guard not in c.ante:
            raise StepError("bound-mismatch", "bex-right: witness bound atom missing from antecedent")
        if not (c.ante - {guard}) <= p.ante or not p.ante <= c.ante:
            raise StepError("context-mismatch", "bex-right: antecedent not preserved")
        _side(c.succ, p.succ, [f], [instantiate(f, rule.term)], tag)
    elif tag == "ball-left":
        if rule.term is None:
            raise StepError("missing-principal", "ball-left needs a witness term")
        f = _principal(rule, c.ante, BAll, "antecedent")
        guard = lt(rule.term, f.bound)
        if guard not in c.ante:
            raise StepError("bound-mismatch", "ball-left: witness bound atom missing from antecedent")
        _side(c.ante, p.ante, [f, guard], [instantiate(f, rule.term)], tag)
        _same(c.succ, p.succ, tag)
    elif tag == "sub":
        if p.subst(rule.theta) != c:
            raise StepError("substitution-mismatch", "conclusion is not the substituted premiss")
    elif tag == "wk":
        if not p.issubset(c):
            raise StepError("context-mismatch", "wk premiss is not contained in the conclusion")
    elif tag == "cut":
        f = rule.formula
        if f is None:
            raise StepError("missing-principal", "cut needs a cut formula")
        p0, p1 = premisses
        _same(c.ante, p0.ante, "cut left premiss")
        _side(c.succ, p0.succ, [], [f], "cut left premiss")
        _same(c.succ, p1.succ, "cut right premiss")
        _side(c.ante, p1.ante, [], [f], "cut right premiss")
    elif tag == "ind":
        f, x, a, t = rule.formula, rule.var, rule.eigen, rule.term
        if f is None or x is None or t is None:
            raise StepError("missing-principal", "ind needs formula, hole variable and term")
        _fresh(c, a, [All(x, f)])
        goal = apply_subst({x: t}, f)
        if goal not in c.succ:
            raise StepError("missing-principal", "ind: conclusion lacks the induction instance")
        p0, p1 = premisses
        _same(c.ante, p0.ante, "ind base")
        _side(c.succ, p0.succ, [goal], [apply_subst({x: Zero()}, f)], "ind base")
        _side(c.ante, p1.ante, [], [apply_subst({x: Var(a)}, f)], "ind step")
        _side(c.succ, p1.succ, [goal], [apply_subst({x: Succ(Var(a))}, f)], "ind step")
    else:  # pragma: no cover - guarded by Rule
        raise StepError("missing-principal", f"unknown rule {tag}")


# ------------------------------------------------------------ finite proofs

@dataclass(frozen=True)
class ProofNode:
    sequent: Sequent
    rule: Rule
    children: tuple = ()
    registered: frozenset = frozenset()


@dataclass(frozen=True)
class FiniteProof:
    nodes: dict
    root: str
    theory: Theory = EMPTY_THEORY

    @property
    def conclusion(self) -> Sequent:
        return self.nodes[self.root].sequent


@dataclass
class ProofReport:
    conclusion: Sequent
    assumptions: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def check_proof(pi: FiniteProof) -> ProofReport:
    report = ProofReport(pi.nodes[pi.root].sequent if pi.root in pi.nodes else Sequent())
    if pi.root not in pi.nodes:
        report.errors.append((pi.root, StepError("structure", "root node missing")))
        return report
    seen, order, stack = set(), [], [pi.root]
    parents = {}
    while stack:
        m = stack.pop()
        if m in seen:
            report.errors.append((m, StepError("structure", "node reached twice (not a tree)")))
            continue
        seen.add(m)
        order.append(m)
        for k in pi.nodes[m].children:
            if not isinstance(k, str):
                report.errors.append((m, StepError("structure", "finite proofs cannot contain buds")))
            elif k not in pi.nodes:
                report.errors.append((m, StepError("structure", f"unknown child {k}")))
            else:
                parents[k] = m
                stack.append(k)
    if report.errors:
        return report
    for m in order:
        node = pi.nodes[m]
        prem = [pi.nodes[k].sequent for k in node.children]
        try:
            check_step(node.sequent, node.rule, prem, pi.theory)
        except StepError as e:
            report.errors.append((m, e))
        if node.rule.tag == "assumption":
            report.assumptions.append(node.sequent)
    return report


# -------------------------------------------------------- fragment checks

class FragmentError(Exception):
    def __init__(self, node, formula, reason):
        self.node, self.formula, self.reason = node, formula, reason
        super().__init__(f"node {node}: {reason}")


def _closing_chain(pi) -> set:
    """Root nodes forming the final chain of all-right steps."""
    out, m = set(), pi.root
    while pi.nodes[m].rule.tag == "all-right":
        out.add(m)
        kid = pi.nodes[m].children[0]
        if not isinstance(kid, str):
            break
        m = kid
    return out


def lift_shape(s: Sequent, n: int) -> Optional[str]:
    """None if s has the shape  G, forall xs.A ... => D, forall ys.B ...  else a reason."""
    from .syntax import forall_block
    for f in s.ante | s.succ:
        if is_sigma(f, n):
            continue
        xs, body = forall_block(f)
        if not xs or not is_sigma(body, n):
            return f"formula is neither Sigma_{n} nor a universal block over Sigma_{n}"
        others = (s.ante | s.succ) - {f}
        clash = set(xs) & free_vars(list(others))
        if clash:
            return f"bound variable {sorted(clash)[0]} occurs outside its own body"
    return None


def validate_fragment(pi, n: int, mode: str) -> None:
    """Raise FragmentError if pi leaves the fragment demanded by ``mode``.

    Modes: ``all-pi`` (every formula Pi_{n+1}), ``all-sigma`` (every formula
    Sigma_n, apart from a closing chain of all-right steps at the root, and
    no ind steps) and ``lift-conclusion``.
    """
    if mode == "lift-conclusion":
        reason = lift_shape(pi.nodes[pi.root].sequent, n)
        if reason:
            raise FragmentError(pi.root, None, reason)
        return
    if mode not in ("all-pi", "all-sigma"):
        raise ValueError(f"unknown mode {mode}")
    skip = _closing_chain(pi) if mode == "all-sigma" else set()
    for m in sorted(pi.nodes):
        node = pi.nodes[m]
        if mode == "all-sigma" and node.rule.tag == "ind":
            raise FragmentError(m, node.rule.formula, "induction is not allowed here")
        if m in skip:
            continue
        for f in sorted(node.sequent.ante | node.sequent.succ, key=repr):
            ok = is_pi(f, n + 1) if mode == "all-pi" else is_sigma(f, n)
            if not ok:
                want = f"pi-{n + 1}" if mode == "all-pi" else f"sigma-{n}"
                raise FragmentError(m, f, f"formula outside {want}")
