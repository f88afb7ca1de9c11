"""Mutable proof trees for constructing derivations, plus equality lemmas.

Derivations are assembled from ``PNode`` objects whose children are other
``PNode``s or ``BudRef`` back-edges.  ``to_preproof`` freezes a tree into a
``CyclicPreproof`` or ``FiniteProof`` with depth-first node ids.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .calculus import EMPTY_THEORY, FiniteProof, ProofNode, Rule, Sequent, StepError, Theory, \
    check_step
from .cyclic import Bud, CyclicPreproof
from .syntax import (
    And, All, Atom, BAll, BEx, Ex, NAtom, Or, Var, dual, eq, free_vars, fresh_name, instantiate,
    lt, term_children, term_head,
)


@dataclass(eq=False)
class PNode:
    sequent: Sequent
    rule: Rule
    children: list = field(default_factory=list)
    registered: set = field(default_factory=set)
    key: object = None  # identifies assumption leaves

    def walk(self):
        """Pre-order over tree nodes (buds are not followed)."""
        stack = [self]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed([k for k in n.children if isinstance(k, PNode)]))


@dataclass(eq=False)
class BudRef:
    target: Optional[PNode] = None


class BuildError(ValueError):
    pass


class Builder:
    """Creates nodes and checks each step as it is built (buds are checked later)."""

    def __init__(self, theory: Theory = EMPTY_THEORY, check: bool = True):
        self.theory = theory
        self.check = check

    def step(self, seq: Sequent, rule: Rule, *kids, register=()) -> PNode:
        if self.check and all(isinstance(k, PNode) for k in kids):
            try:
                check_step(seq, rule, [k.sequent for k in kids], self.theory)
            except StepError as e:
                raise BuildError(f"{rule.tag} at {seq}: {e}") from None
        return PNode(seq, rule, list(kids), set(register))

    # initial sequents
    def axiom(self, seq, tag, formula=None) -> PNode:
        return self.step(seq, Rule(tag, formula=formula))

    def q(self, seq, index) -> PNode:
        return self.step(seq, Rule("q-axiom", index=str(index)))

    def named(self, seq, name) -> PNode:
        return self.step(seq, Rule("axiom", name=name))

    def assume(self, seq, key=None) -> PNode:
        n = PNode(seq, Rule("assumption"))
        n.key = key
        return n

    # structural
    def wk(self, seq, kid) -> PNode:
        if isinstance(kid, PNode) and kid.sequent == seq:
            return kid
        return self.step(seq, Rule("wk"), kid)

    def sub(self, seq, theta: dict, kid) -> PNode:
        return self.step(seq, Rule("sub", subst=tuple(sorted(theta.items()))), kid)

    def cut(self, seq, f, left, right) -> PNode:
        return self.step(seq, Rule("cut", formula=f), left, right)

    def have(self, seq: Sequent, f, prove_left: Callable, prove_right: Callable) -> PNode:
        """Cut on f, building both premisses from their sequents."""
        left = seq.add(succ=[f])
        right = seq.add(ante=[f])
        return self.cut(seq, f, prove_left(left), prove_right(right))

    # ------------------------------------------------------ equality lemmas

    def symm(self, seq: Sequent, s, t) -> PNode:
        """seq has s = t in the antecedent and t = s in the succedent."""
        if eq(s, t) not in seq.ante or eq(t, s) not in seq.succ:
            raise BuildError("symm: sequent does not have the expected equations")
        return self.have(seq, eq(s, s),
                         lambda q: self.axiom(q, "eq1", eq(s, s)),
                         lambda q: self.axiom(q, "eq3", eq(t, s)))

    def with_eq(self, seq: Sequent, s, t, prove: Callable) -> PNode:
        """Add s = t to the antecedent, justified from t = s or by reflexivity."""
        f = eq(s, t)
        if f in seq.ante:
            return prove(seq)
        if s == t:
            return self.have(seq, f, lambda q: self.axiom(q, "eq1", f), prove)
        if eq(t, s) not in seq.ante:
            raise BuildError(f"with_eq: no equation between the terms in {seq}")
        return self.have(seq, f, lambda q: self.symm(q, t, s), prove)

    def term_eq(self, seq: Sequent, u, w, s, t) -> PNode:
        """Prove seq whose succedent holds u = w, where w is u with some
        occurrences of s replaced by t and s = t is in the antecedent."""
        f = eq(u, w)
        if u == w:
            return self.axiom(seq, "eq1", f)
        if f in seq.ante:
            return self.axiom(seq, "id", f)
        if term_head(u) != term_head(w):
            raise BuildError("term_eq: terms do not zip")
        pairs = [(a, b) for a, b in zip(term_children(u), term_children(w)) if a != b]
        return self._chain_eqs(seq, pairs, s, t, lambda q: self.axiom(q, "eq2", f))

    def _chain_eqs(self, seq, pairs, s, t, close):
        if not pairs:
            return close(seq)
        (a, b), rest = pairs[0], pairs[1:]
        if eq(a, b) in seq.ante:
            return self._chain_eqs(seq, rest, s, t, close)
        return self.have(seq, eq(a, b),
                         lambda q: self.term_eq(q, a, b, s, t),
                         lambda q: self._chain_eqs(q, rest, s, t, close))

    def transport(self, seq: Sequent, f, g, s, t) -> PNode:
        """Prove seq with f in the antecedent and g in the succedent, where g
        is f with occurrences of s replaced by t; both s = t and t = s must be
        in the antecedent (see ``transport_eq``)."""
        if f == g:
            return self.axiom(seq, "id", f)
        if isinstance(f, Atom):
            pairs = [(a, b) for a, b in zip(f.args, g.args) if a != b]
            return self._chain_eqs(seq, pairs, s, t, lambda q: self.axiom(q, "eq3", g))
        if isinstance(f, NAtom):
            pf, pg = dual(f), dual(g)

            def right(q):  # q: ..., pg => g
                return self.have(q, pf,
                                 lambda r: self.transport(r, pg, pf, t, s),
                                 lambda r: self.axiom(r, "neg-left", pf))
            return self.have(seq, pg, lambda q: self.axiom(q, "neg-right", pg), right)
        if isinstance(f, And):
            def part(i):
                fi, gi = (f.left, f.right)[i], (g.left, g.right)[i]
                q = Sequent(seq.ante | {fi}, (seq.succ - {g}) | {gi})
                inner = self.transport(q, fi, gi, s, t)
                return self.step(Sequent(seq.ante, (seq.succ - {g}) | {gi}),
                                 Rule("and-left", formula=f, index=i), inner)
            return self.step(seq, Rule("and-right", formula=g), part(0), part(1))
        if isinstance(f, Or):
            def part(i):
                fi, gi = (f.left, f.right)[i], (g.left, g.right)[i]
                q = Sequent((seq.ante - {f}) | {fi}, seq.succ | {gi})
                inner = self.transport(q, fi, gi, s, t)
                return self.step(Sequent((seq.ante - {f}) | {fi}, seq.succ),
                                 Rule("or-right", formula=g, index=i), inner)
            return self.step(seq, Rule("or-left", formula=f), part(0), part(1))
        avoid = seq.free_vars() | free_vars(s) | free_vars(t)
        c = fresh_name("c", avoid)
        fc, gc = instantiate(f, Var(c)), instantiate(g, Var(c))
        if isinstance(f, Ex):
            q1 = Sequent((seq.ante - {f}) | {fc}, seq.succ)
            q2 = Sequent(q1.ante, q1.succ | {gc})
            inner = self.transport(q2, fc, gc, s, t)
            mid = self.step(q1, Rule("ex-right", formula=g, term=Var(c)), inner)
            return self.step(seq, Rule("ex-left", formula=f, eigen=c), mid)
        if isinstance(f, All):
            q1 = Sequent(seq.ante, (seq.succ - {g}) | {gc})
            q2 = Sequent(q1.ante | {fc}, q1.succ)
            inner = self.transport(q2, fc, gc, s, t)
            mid = self.step(q1, Rule("all-left", formula=f, term=Var(c)), inner)
            return self.step(seq, Rule("all-right", formula=g, eigen=c), mid)
        if isinstance(f, BEx):
            gf, gg = lt(Var(c), f.bound), lt(Var(c), g.bound)
            q1 = Sequent((seq.ante - {f}) | {gf, fc}, seq.succ)

            def with_guard(q):  # q has c < g.bound in the antecedent
                q3 = Sequent(q.ante, q.succ | {gc})
                inner = self.transport(q3, fc, gc, s, t)
                return self.step(q, Rule("bex-right", formula=g, term=Var(c)), inner)
            mid = self.have(q1, gg, lambda q: self.transport(q, gf, gg, s, t), with_guard)
            return self.step(seq, Rule("bex-left", formula=f, eigen=c), mid)
        if isinstance(f, BAll):
            gf, gg = lt(Var(c), f.bound), lt(Var(c), g.bound)
            q1 = Sequent(seq.ante | {gg}, (seq.succ - {g}) | {gc})

            def with_guard(q):  # q has c < f.bound in the antecedent
                q3 = Sequent(q.ante | {fc}, q.succ)
                inner = self.transport(q3, fc, gc, s, t)
                return self.step(q, Rule("ball-left", formula=f, term=Var(c)), inner)
            mid = self.have(q1, gf, lambda q: self.transport(q, gg, gf, t, s), with_guard)
            return self.step(seq, Rule("ball-right", formula=g, eigen=c), mid)
        raise BuildError(f"transport: unexpected formula {f!r}")

    def transport_eq(self, seq: Sequent, f, g, s, t) -> PNode:
        """As ``transport`` but needing only one of s = t, t = s in the antecedent."""
        return self.with_eq(seq, s, t, lambda q: self.with_eq(q, t, s,
                            lambda r: self.transport(r, f, g, s, t)))

    def trans(self, seq: Sequent, u, v, w) -> PNode:
        """u = v and v = w in the antecedent, u = w in the succedent."""
        return self.axiom(seq, "eq3", eq(u, w))


# ------------------------------------------------------------ tree surgery

def augment(root: PNode, ante: Iterable = (), succ: Iterable = ()) -> PNode:
    """Add formulas to every sequent of the tree, in place."""
    ante, succ = frozenset(ante), frozenset(succ)
    for n in root.walk():
        n.sequent = n.sequent.add(ante, succ)
    return root


def register_all(root: PNode, terms: Iterable) -> None:
    terms = set(terms)
    for n in root.walk():
        bad = {t for t in terms if free_vars(t) & n.rule.eigenvariables}
        n.registered |= terms - bad


def assumption_leaves(root: PNode) -> list:
    return [n for n in root.walk() if n.rule.tag == "assumption"]


def replace(leaf: PNode, new: PNode) -> None:
    """Graft ``new`` in place of ``leaf`` (buds pointing at ``new`` are not allowed)."""
    for n in new.walk():
        for k in n.children:
            if isinstance(k, BudRef) and k.target is new:
                raise BuildError("cannot graft a companion over a leaf")
    leaf.sequent, leaf.rule, leaf.children = new.sequent, new.rule, new.children
    leaf.registered = leaf.registered | new.registered
    leaf.key = new.key


def clone(root: PNode) -> PNode:
    """Deep copy; buds into the copied tree are redirected to the copies."""
    mapping = {}

    def copy(n):
        m = PNode(n.sequent, n.rule, [], set(n.registered), n.key)
        mapping[id(n)] = m
        m.children = [copy(k) if isinstance(k, PNode) else k for k in n.children]
        return m

    new = copy(root)
    for n in new.walk():
        n.children = [BudRef(mapping.get(id(k.target), k.target)) if isinstance(k, BudRef) else k
                      for k in n.children]
    return new


def count_nodes(root: PNode) -> int:
    return sum(1 for _ in root.walk())


def to_preproof(root: PNode, theory: Theory = EMPTY_THEORY, cyclic: bool = True, prefix: str = "n"):
    ids = {}
    order = list(root.walk())
    for i, n in enumerate(order):
        ids[id(n)] = f"{prefix}{i}"
    nodes = {}
    for n in order:
        kids = []
        for k in n.children:
            if isinstance(k, BudRef):
                if k.target is None or id(k.target) not in ids:
                    raise BuildError("bud target is not part of the tree")
                kids.append(Bud(ids[id(k.target)]))
            else:
                kids.append(ids[id(k)])
        nodes[ids[id(n)]] = ProofNode(n.sequent, n.rule, tuple(kids), frozenset(n.registered))
    if cyclic:
        return CyclicPreproof(nodes, ids[id(root)], theory)
    if any(isinstance(k, Bud) for nd in nodes.values() for k in nd.children):
        raise BuildError("finite proofs cannot contain buds")
    return FiniteProof(nodes, ids[id(root)], theory)


def from_proof(pi) -> PNode:
    """Turn a FiniteProof or CyclicPreproof back into a mutable tree."""
    made = {m: PNode(nd.sequent, nd.rule, [], set(nd.registered)) for m, nd in pi.nodes.items()}
    for m, nd in pi.nodes.items():
        made[m].children = [BudRef(made[k.target]) if isinstance(k, Bud) else made[k]
                            for k in nd.children]
    return made[pi.root]
