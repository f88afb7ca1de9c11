"""Proof transformations: dualization, induction simulation, lifting and translation.

``translate`` turns a finite proof with induction whose formulas are all
universal blocks over Sigma_n into a cyclic proof using only Sigma_n
formulas.  ``lift`` does the work: it rebuilds each node so that universal
blocks in the succedent appear instantiated and those in the antecedent
become open assumption leaves, which are discharged at cuts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .builder import (
    Builder, BudRef, BuildError, PNode, assumption_leaves, augment, clone, from_proof,
    register_all, replace, to_preproof,
)
from .calculus import (
    AXIOM_TAGS, EMPTY_THEORY, FiniteProof, FragmentError, Rule, Sequent, Theory, check_proof,
    lift_shape, validate_fragment,
)
from .cyclic import Bud, CyclicPreproof, check
from .syntax import (
    ZERO, Atom, BEx, Ex, Succ, Var, apply_subst, close_forall, dual, eq, forall_block,
    free_vars, fresh_name, instantiate, is_sigma, lt,
)


class TranslationError(ValueError):
    def __init__(self, kind: str, message: str, node=None):
        self.kind, self.message, self.node = kind, message, node
        where = f" at node {node}" if node is not None else ""
        super().__init__(f"{kind}{where}: {message}")


class NamePool:
    """Hands out names that are fresh for everything seen so far."""

    def __init__(self, avoid=()):
        self.used = set(avoid)

    def fresh(self, base: str) -> str:
        name = fresh_name(base, self.used)
        self.used.add(name)
        return name


# ----------------------------------------------------------------- names

def formula_names(f) -> set:
    """Free and bound variable names of a formula or term."""
    out = set(free_vars(f))
    stack = [f]
    while stack:
        g = stack.pop()
        if hasattr(g, "var"):
            out.add(g.var)
            stack.append(g.body)
        elif hasattr(g, "left") and hasattr(g, "right") and not hasattr(g, "args"):
            stack += [g.left, g.right]
    return out


def tree_names(root: PNode) -> set:
    out = set()
    for n in root.walk():
        for f in n.sequent.formulas():
            out |= formula_names(f)
        r = n.rule
        if r.eigen:
            out.add(r.eigen)
        if r.var:
            out.add(r.var)
        if r.formula is not None:
            out |= formula_names(r.formula)
        if r.term is not None:
            out |= free_vars(r.term)
        for v, t in r.subst:
            out.add(v)
            out |= free_vars(t)
        for t in n.registered:
            out |= free_vars(t)
    return out


def _rename_rule(rule: Rule, rho: dict) -> Rule:
    ren = {v: Var(w) for v, w in rho.items()}
    kw = dict(tag=rule.tag, index=rule.index, name=rule.name)
    if rule.formula is not None:
        kw["formula"] = apply_subst(ren, rule.formula)
    if rule.term is not None:
        kw["term"] = apply_subst(ren, rule.term)
    if rule.eigen:
        kw["eigen"] = rho.get(rule.eigen, rule.eigen)
    if rule.var:
        kw["var"] = rho.get(rule.var, rule.var)
    if rule.subst:
        kw["subst"] = tuple(sorted((rho.get(v, v), apply_subst(ren, t)) for v, t in rule.subst))
    return Rule(**kw)


def _rename_tree(root: PNode, rho: dict) -> None:
    ren = {v: Var(w) for v, w in rho.items()}
    for n in root.walk():
        n.sequent = n.sequent.subst(ren)
        n.rule = _rename_rule(n.rule, rho)
        n.registered = {apply_subst(ren, t) for t in n.registered}


def freshen_eigenvariables(root: PNode, pool: NamePool) -> None:
    """Give every eigenvariable (and sub support variable) a globally fresh name."""
    stack = [root]
    while stack:
        n = stack.pop()
        kids = [k for k in n.children if isinstance(k, PNode)]
        r = n.rule
        olds = sorted(r.eigenvariables)
        if olds:
            rho = {v: pool.fresh(v) for v in olds}
            for k in kids:
                _rename_tree(k, rho)
            if r.tag == "sub":
                n.rule = Rule("sub", subst=tuple(sorted((rho.get(v, v), t) for v, t in r.subst)))
            else:
                kw = dict(tag=r.tag, formula=r.formula, index=r.index, term=r.term,
                          eigen=rho[r.eigen], var=r.var, name=r.name)
                n.rule = Rule(**kw)
        stack.extend(kids)


# --------------------------------------------------------------- helpers

def _as_tree(p) -> PNode:
    if isinstance(p, PNode):
        return p
    return from_proof(p)


def inst(f, terms: Optional[tuple] = None):
    """Body of a universal block; the bound names are replaced by ``terms`` if given."""
    xs, body = forall_block(f)
    if terms is None:
        return body
    return apply_subst(dict(zip(xs, terms)), body)


def _identity_terms(f) -> tuple:
    return tuple(Var(x) for x in forall_block(f)[0])


def split(s: Sequent, n: int):
    g = frozenset(f for f in s.ante if is_sigma(f, n))
    d = frozenset(f for f in s.succ if is_sigma(f, n))
    return g, s.ante - g, d, s.succ - d


# ------------------------------------------------------ induction simulation

def _simulate(bld: Builder, pool: NamePool, gamma, delta, phi, x, t, base: PNode, step: PNode,
              a: str, progress: bool = True, retarget: bool = False) -> PNode:
    """Cyclic derivation of gamma => phi(t), delta from the two induction premisses."""
    gamma, delta = frozenset(gamma), frozenset(delta)
    b = pool.fresh("b")
    vb, va = Var(b), Var(a)
    at = lambda s: apply_subst({x: s}, phi)
    bullet = Sequent(gamma, delta | {at(vb)})
    bz = eq(vb, ZERO)
    y = pool.fresh("y")
    pred = BEx(y, vb, eq(vb, Succ(Var(y))))

    # the successor branch, reached with a < b (unless progress is removed) and b = s(a)
    def succ_branch(seq):
        phi_sa = at(Succ(va))
        bud = BudRef()
        s_seq = Sequent(gamma, delta | {at(va)})
        if retarget:
            s_node = PNode(s_seq, Rule("sub"), [bud], {va})
            bud.target = s_node
        else:
            s_node = PNode(s_seq, Rule("sub", subst=((b, va),)), [bud], {va})
        p_seq = Sequent(gamma, delta | {phi_sa})
        p_node = bld.cut(p_seq, at(va), bld.wk(p_seq.add(succ=[at(va)]), s_node),
                         bld.wk(p_seq.add(ante=[at(va)]), step))
        p_node.registered.add(va)
        p_node.children[0].registered.add(va)
        return bld.have(seq, phi_sa, lambda q: bld.wk(q, p_node),
                        lambda q: bld.transport_eq(q, phi_sa, at(vb), Succ(va), vb)), bud

    left_seq = bullet.add(succ=[bz])
    buds = []

    def case_pred(q):  # q has the bounded predecessor formula in the antecedent
        prem = Sequent((q.ante - {pred}) | {lt(va, vb), eq(vb, Succ(va))}, q.succ)
        node, bud = succ_branch(prem)
        buds.append(bud)
        return bld.step(q, Rule("bex-left", formula=pred, eigen=a), node)

    if progress:
        left = bld.have(left_seq, pred, lambda q: bld.q(q, "3"), case_pred)
    else:
        # same split through an unbounded predecessor, so no progress point appears
        c = pool.fresh("c")
        upred = Ex(y, eq(vb, Succ(Var(y))))

        def get_upred(q):
            def from_bounded(r):
                r2 = Sequent((r.ante - {pred}) | {lt(Var(c), vb), eq(vb, Succ(Var(c)))}, r.succ)
                r3 = r2.add(succ=[eq(vb, Succ(Var(c)))])
                inner = bld.step(r2, Rule("ex-right", formula=upred, term=Var(c)),
                                 bld.axiom(r3, "id", eq(vb, Succ(Var(c)))))
                return bld.step(r, Rule("bex-left", formula=pred, eigen=c), inner)
            return bld.have(q, pred, lambda r: bld.q(r, "3"), from_bounded)

        def use_upred(q):
            prem = Sequent((q.ante - {upred}) | {eq(vb, Succ(va))}, q.succ)
            node, bud = succ_branch(prem)
            buds.append(bud)
            return bld.step(q, Rule("ex-left", formula=upred, eigen=a), node)

        left = bld.have(left_seq, upred, get_upred, use_upred)

    right_seq = bullet.add(ante=[bz])
    phi0 = at(ZERO)
    right = bld.have(right_seq, phi0, lambda q: bld.wk(q, base),
                     lambda q: bld.transport_eq(q, phi0, at(vb), ZERO, vb))
    dot = bld.cut(bullet, bz, left, right)
    dot.registered.add(vb)
    for bud in buds:
        if bud.target is None:
            bud.target = dot
    return bld.sub(Sequent(gamma, delta | {at(t)}), {b: t}, dot)


def _find_eigen(step: Sequent, phi, x, avoid) -> str:
    for v in sorted(step.free_vars() - set(avoid)):
        if apply_subst({x: Var(v)}, phi) in step.ante and \
                apply_subst({x: Succ(Var(v))}, phi) in step.succ:
            return v
    raise TranslationError("precondition", "cannot find the step premiss eigenvariable")


def simulate_induction(gamma, delta, phi, var: str, t, base, step, theory: Theory = EMPTY_THEORY,
                       eigen: Optional[str] = None, progress: bool = True,
                       retarget: bool = False) -> CyclicPreproof:
    """Replace an induction step by a cycle through a case split on 0 = b.

    ``base`` must conclude (a subset of) gamma => phi(0), delta and ``step``
    gamma, phi(a) => phi(s a), delta.  ``progress=False`` and ``retarget=True``
    build the broken variants used as negative tests.
    """
    base, step = clone(_as_tree(base)), clone(_as_tree(step))
    gamma, delta = frozenset(gamma), frozenset(delta)
    outer = free_vars(list(gamma | delta)) | free_vars(phi) | free_vars(t)
    a = eigen or _find_eigen(step.sequent, phi, var, outer | {var})
    if a in outer:
        raise TranslationError("precondition", f"eigenvariable {a} occurs in the conclusion")
    want_base = Sequent(gamma, delta | {apply_subst({var: ZERO}, phi)})
    want_step = Sequent(gamma | {apply_subst({var: Var(a)}, phi)},
                        delta | {apply_subst({var: Succ(Var(a))}, phi)})
    if not base.sequent.issubset(want_base):
        raise TranslationError("precondition", "base does not conclude gamma => phi(0), delta")
    if not step.sequent.issubset(want_step):
        raise TranslationError("precondition", "step does not conclude gamma, phi(a) => phi(s a), delta")
    pool = NamePool(outer | tree_names(base) | tree_names(step) | formula_names(phi) | {var, a})
    bld = Builder(theory)
    try:
        root = _simulate(bld, pool, gamma, delta, phi, var, t, base, step, a, progress, retarget)
    except BuildError as e:
        raise TranslationError("precondition", str(e)) from None
    return to_preproof(root, theory)


# ------------------------------------------------------------------- lift

@dataclass
class LiftResult:
    derivation: CyclicPreproof
    assumptions: list = field(default_factory=list)


class _Lifter:
    def __init__(self, n: int, theory: Theory, pool: NamePool, ids: dict, progress: bool = True):
        self.n, self.theory, self.pool, self.ids = n, theory, pool, ids
        self.progress = progress
        self.b = Builder(theory)
        self._sigma_only = {}

    def err(self, kind, msg, node):
        return TranslationError(kind, msg, self.ids.get(id(node)))

    def sigma_only(self, node: PNode) -> bool:
        k = id(node)
        if k not in self._sigma_only:
            ok = node.rule.tag != "ind" and all(is_sigma(f, self.n) for f in node.sequent.formulas())
            ok = ok and all(self.sigma_only(c) for c in node.children if isinstance(c, PNode))
            self._sigma_only[k] = ok
        return self._sigma_only[k]

    def leaf(self, f, terms, g, d) -> PNode:
        return self.b.assume(Sequent(g, d | {inst(f, terms)}), key=(f, tuple(terms)))

    def transfer(self, root: PNode, g, d, keymap=None) -> None:
        """Re-home assumption leaves at this node's context."""
        for lf in assumption_leaves(root):
            f, terms = lf.key
            if keymap:
                f, terms = keymap(f, terms)
            new = self.leaf(f, terms, g, d)
            if new.sequent == lf.sequent:
                lf.key = new.key
                continue
            if not new.sequent.issubset(lf.sequent):
                raise TranslationError("internal", "assumption leaf lost its context")
            replace(lf, self.b.wk(lf.sequent, new))

    def lift(self, node: PNode) -> PNode:
        try:
            return self._lift(node)
        except BuildError as e:
            raise self.err("unsupported", f"{node.rule.tag}: {e}", node) from None

    def _lift(self, node: PNode) -> PNode:
        c, rule, n = node.sequent, node.rule, self.n
        g, a, d, bs = split(c, n)
        ib = frozenset(inst(f) for f in bs)
        cstar = Sequent(g, d | ib)
        tag = rule.tag
        kids = [k for k in node.children if isinstance(k, PNode)]
        if len(kids) != len(node.children):
            raise self.err("unsupported", "buds in the input proof", node)
        if self.sigma_only(node):
            return clone(node)

        if tag == "assumption":
            raise self.err("unsupported", "open assumption in the input proof", node)
        if tag in AXIOM_TAGS:
            if tag == "id":
                f = rule.formula
                if f is None:
                    both = (c.ante & c.succ)
                    f = min(both, key=repr) if both else None
                if f is not None and f in a and f in bs:
                    return self.b.wk(cstar, self.leaf(f, _identity_terms(f), g, d))
            return self.b.step(cstar, rule)

        f = rule.formula
        if tag == "all-right" and f in bs:
            (kid,) = kids
            low = self.lift(kid)
            self.transfer(low, g, d)
            return self.b.sub(cstar, {rule.eigen: Var(f.var)}, low)

        if tag == "all-left" and f in a:
            (kid,) = kids
            low = self.lift(kid)
            body = instantiate(f, rule.term)
            if is_sigma(body, n):
                self.transfer(low, g, d)
                left_seq = cstar.add(succ=[body])
                left = self.b.wk(left_seq, self.leaf(f, (rule.term,), g, d))
                return self.b.cut(cstar, body, left, low)

            def keymap(k, terms):
                return (f, (rule.term,) + tuple(terms)) if k == body else (k, terms)
            self.transfer(low, g, d, keymap)
            return self.b.wk(cstar, low)

        if tag == "cut" and not is_sigma(f, n):
            return self._pi_cut(node, kids, g, d, ib, cstar)

        if tag == "ind":
            return self._ind(node, kids, g, a, d, bs, ib, cstar)

        if tag == "sub":
            (kid,) = kids
            if split(kid.sequent, n)[1]:
                raise self.err("unsupported", "substitution above universal antecedent formulas", node)
            low = self.lift(kid)
            return self.b.sub(cstar, rule.theta, low)

        if tag in ("all-right", "all-left"):
            raise self.err("unsupported", "unbounded universal step on a Sigma formula", node)

        # a step on Sigma formulas only: apply it to the lifted premisses
        lows = [self.lift(k) for k in kids]
        for low in lows:
            augment(low, g, d | ib)
        out = self.b.step(cstar, rule, *lows)
        self.transfer(out, g, d)
        return out

    def _pi_cut(self, node, kids, g, d, ib, cstar):
        f = node.rule.formula
        xs = forall_block(f)[0]
        low0 = self.lift(kids[0])
        low1 = self.lift(kids[1])
        augment(low1, succ=ib)
        for lf in assumption_leaves(low1):
            k, terms = lf.key
            if k != f:
                continue
            theta = {x: s for x, s in zip(xs, terms) if s != Var(x)}
            piece = clone(low0)
            if theta:
                piece = self.b.sub(piece.sequent.subst(theta), theta, piece)
            replace(lf, self.b.wk(lf.sequent, piece))
        self.transfer(low1, g, d)
        return low1

    def _ind(self, node, kids, g, a, d, bs, ib, cstar):
        rule, n, bld = node.rule, self.n, self.b
        phi, x, ea, t = rule.formula, rule.var, rule.eigen, rule.term
        goal = apply_subst({x: t}, phi)
        if is_sigma(goal, n):
            lows = [self.lift(k) for k in kids]
            for low in lows:
                augment(low, g, d | ib)
            out = _simulate(bld, self.pool, g, d | ib, phi, x, t, lows[0], lows[1], ea,
                            self.progress)
            self.transfer(out, g, d)
            return out
        if any(goal in k.sequent.succ for k in kids):
            raise self.err("unsupported", "induction premiss keeps the conclusion formula", node)
        ws, chi = forall_block(phi)
        at = lambda s: apply_subst({x: s}, chi)
        psi = d | (ib - {inst(goal)})
        dv = self.pool.fresh("d")
        vd, va = Var(dv), Var(ea)
        low0 = self.lift(kids[0])
        low1 = self.lift(kids[1])
        augment(low1, succ=psi)
        bullet = Sequent(g, psi | {at(vd)})
        hyp = apply_subst({x: va}, phi)
        buds = []
        for lf in assumption_leaves(low1):
            k, terms = lf.key
            if k != hyp:
                continue
            theta = {dv: va}
            theta.update({w: s for w, s in zip(ws, terms) if s != Var(w)})
            bud = BudRef()
            buds.append(bud)
            s_node = PNode(bullet.subst(theta), Rule("sub", subst=tuple(sorted(theta.items()))), [bud])
            replace(lf, bld.wk(lf.sequent, s_node) if s_node.sequent != lf.sequent else s_node)
        register_all(low1, {va})
        for low in (low0, low1):
            self.transfer(low, g, d)

        bz = eq(vd, ZERO)
        y = self.pool.fresh("y")
        pred = BEx(y, vd, eq(vd, Succ(Var(y))))
        chi_sa = at(Succ(va))

        def case_pred(q):
            prem = Sequent((q.ante - {pred}) | {lt(va, vd), eq(vd, Succ(va))}, q.succ)
            inner = bld.have(prem, chi_sa, lambda r: bld.wk(r, low1),
                             lambda r: bld.transport_eq(r, chi_sa, at(vd), Succ(va), vd))
            return bld.step(q, Rule("bex-left", formula=pred, eigen=ea), inner)

        left = bld.have(bullet.add(succ=[bz]), pred, lambda q: bld.q(q, "3"), case_pred)
        chi0 = at(ZERO)
        right = bld.have(bullet.add(ante=[bz]), chi0, lambda q: bld.wk(q, low0),
                         lambda q: bld.transport_eq(q, chi0, at(vd), ZERO, vd))
        dot = bld.cut(bullet, bz, left, right)
        dot.registered.add(vd)
        for bud in buds:
            bud.target = dot
        return bld.sub(cstar, {dv: t}, dot)


def _prepare(pi, n: int, allow_assumptions: bool = False):
    if not isinstance(pi, FiniteProof):
        raise TranslationError("precondition", "lift expects a finite proof")
    report = check_proof(pi)
    if report.errors:
        m, e = report.errors[0]
        raise TranslationError("precondition", f"input proof is not locally correct: {e}", m)
    if report.assumptions and not allow_assumptions:
        raise TranslationError("precondition", "input proof has open assumptions")
    try:
        validate_fragment(pi, n, "all-pi")
    except FragmentError as e:
        raise TranslationError("free-cut-precondition", e.reason, e.node) from None
    for m, node in pi.nodes.items():
        reason = lift_shape(node.sequent, n)
        if reason:
            raise TranslationError("lift-shape", reason, m)
    made = {m: PNode(nd.sequent, nd.rule, [], set(nd.registered)) for m, nd in pi.nodes.items()}
    for m, nd in pi.nodes.items():
        made[m].children = [made[k] for k in nd.children]
    ids = {id(v): m for m, v in made.items()}
    root = made[pi.root]
    pool = NamePool(tree_names(root))
    freshen_eigenvariables(root, pool)
    return root, pool, ids


def lift(pi: FiniteProof, n: int) -> LiftResult:
    root, pool, ids = _prepare(pi, n)
    low = _Lifter(n, pi.theory, pool, ids).lift(root)
    leaves = [lf.sequent for lf in assumption_leaves(low)]
    return LiftResult(to_preproof(low, pi.theory), leaves)


def _translate(pi: FiniteProof, n: int, progress: bool = True) -> CyclicPreproof:
    if not isinstance(pi, FiniteProof):
        raise TranslationError("precondition", "translate expects a finite proof")
    concl = pi.conclusion
    if concl.ante or len(concl.succ) != 1:
        raise TranslationError("precondition", "conclusion must be a single formula with empty antecedent")
    (goal,) = concl.succ
    xs, body = forall_block(goal)
    if not is_sigma(body, n):
        raise TranslationError("precondition", f"conclusion is not a universal block over Sigma_{n}")
    root, pool, ids = _prepare(pi, n)
    low = _Lifter(n, pi.theory, pool, ids, progress).lift(root)
    if assumption_leaves(low):
        raise TranslationError("internal", "lifted proof still has assumptions")
    bld = Builder(pi.theory)
    node = low
    for i in range(len(xs) - 1, -1, -1):
        f = close_forall(xs[i:], body)
        node = bld.step(Sequent((), [f]), Rule("all-right", formula=f, eigen=xs[i]), node)
    return to_preproof(node, pi.theory)


def translate(pi: FiniteProof, n: int) -> CyclicPreproof:
    """Cyclic Sigma_n proof of the universal Sigma_n conclusion of an induction proof."""
    out = _translate(pi, n)
    verdict = check(out)
    if not verdict.valid:
        raise TranslationError("internal", f"translated proof fails the checker: {verdict.errors[:1]}")
    validate_fragment(out, n, "all-sigma")
    return out


def translate_variant(pi: FiniteProof, n: int, progress: bool = False) -> CyclicPreproof:
    """As ``translate`` but with the progress points of simulated inductions
    removed; the result is locally correct and is not checked."""
    return _translate(pi, n, progress)


# ------------------------------------------------------------ dualization

def flip(s: Sequent) -> Sequent:
    """Atoms of the antecedent stay; everything else moves across, dualized."""
    atoms = frozenset(f for f in s.ante if isinstance(f, Atom))
    return Sequent(atoms | {dual(f) for f in s.succ}, {dual(f) for f in s.ante - atoms})


_MIRROR = {
    "and-left": "or-right", "or-right": "and-left", "and-right": "or-left", "or-left": "and-right",
    "ex-left": "all-right", "all-right": "ex-left", "ex-right": "all-left", "all-left": "ex-right",
    "bex-left": "ball-right", "ball-right": "bex-left", "bex-right": "ball-left",
    "ball-left": "bex-right",
}


def _side_formulas(rule: Rule):
    """Per premiss: (antecedent additions, succedent additions) made by the rule."""
    f, tag = rule.formula, rule.tag
    if tag == "and-left":
        return [([(f.left, f.right)[rule.index]], [])]
    if tag == "or-right":
        return [([], [(f.left, f.right)[rule.index]])]
    if tag == "and-right":
        return [([], [f.left]), ([], [f.right])]
    if tag == "or-left":
        return [([f.left], []), ([f.right], [])]
    if tag in ("ex-left", "all-right"):
        body = instantiate(f, Var(rule.eigen))
        return [([body], [])] if tag == "ex-left" else [([], [body])]
    if tag in ("ex-right", "all-left"):
        body = instantiate(f, rule.term)
        return [([], [body])] if tag == "ex-right" else [([body], [])]
    if tag == "bex-left":
        v = Var(rule.eigen)
        return [([lt(v, f.bound), instantiate(f, v)], [])]
    if tag == "ball-right":
        v = Var(rule.eigen)
        return [([lt(v, f.bound)], [instantiate(f, v)])]
    if tag == "bex-right":
        return [([], [instantiate(f, rule.term)])]
    if tag == "ball-left":
        return [([instantiate(f, rule.term)], [])]
    raise ValueError(tag)


class _Dualizer:
    def __init__(self, pi: CyclicPreproof):
        self.pi = pi
        self.b = Builder(pi.theory)
        self.made = {}

    def adjust(self, m: Sequent, want: Sequent, close, reg):
        """Derive m from a sequent containing ``want`` by cutting in formulas
        whose duals m already has; ``close`` finishes from the enlarged sequent."""
        todo = [(f, "ante") for f in sorted(want.ante - m.ante, key=repr) if dual(f) in m.succ]
        todo += [(f, "succ") for f in sorted(want.succ - m.succ, key=repr) if dual(f) in m.ante]

        def go(seq, i):
            if i == len(todo):
                return close(seq)
            f, side = todo[i]
            if side == "ante":
                node = self.b.cut(seq, f, self.b.axiom(seq.add(succ=[f]), "neg-right", f),
                                  go(seq.add(ante=[f]), i + 1))
            else:
                node = self.b.cut(seq, f, go(seq.add(succ=[f]), i + 1),
                                  self.b.axiom(seq.add(ante=[f]), "neg-left", f))
            node.registered |= reg
            return node
        return go(m, 0)

    def build(self) -> PNode:
        pi = self.pi
        # create all dual nodes first so buds can point at them
        for m in pi.tree_order():
            nd = pi.nodes[m]
            self.made[m] = PNode(flip(nd.sequent), nd.rule, [], set(nd.registered))
        for m in pi.tree_order():
            self._fill(m)
        return self.made[pi.root]

    def _kid(self, k):
        return k.target if isinstance(k, Bud) else k

    def _link(self, m: Sequent, k, reg):
        target = self.made[self._kid(k)]
        want = target.sequent

        def close(seq):
            child = BudRef(target) if isinstance(k, Bud) else target
            if seq == want:
                return child
            node = PNode(seq, Rule("wk"), [child], set(reg))
            return node
        return self.adjust(m, want, close, reg)

    def _fill(self, m):
        nd = self.pi.nodes[m]
        node = self.made[m]
        c, rule, reg = node.sequent, nd.rule, set(nd.registered)
        tag = rule.tag
        if tag in AXIOM_TAGS:
            for r in self._direct_axioms(nd.sequent, rule):
                try:
                    self.b.step(c, r)
                    node.rule = r
                    return
                except BuildError:
                    pass
            orig = nd.sequent

            def close(seq):
                return self.b.step(seq, rule)
            inner = self.adjust(c, orig, close, reg)
            node.rule, node.children = inner.rule, inner.children
            return
        if tag in ("wk", "sub"):
            k = nd.children[0]
            target = self.made[self._kid(k)]
            node.rule = rule
            node.children = [BudRef(target) if isinstance(k, Bud) else target]
            return
        if tag == "cut":
            f = rule.formula
            if isinstance(f, Atom):
                prems = [c.add(succ=[f]), c.add(ante=[f])]
                node.rule = Rule("cut", formula=f)
                node.children = [self._link(p, k, reg) for p, k in zip(prems, nd.children)]
            else:
                g = dual(f)
                prems = [c.add(succ=[g]), c.add(ante=[g])]
                node.rule = Rule("cut", formula=g)
                kids = [nd.children[1], nd.children[0]]
                node.children = [self._link(p, k, reg) for p, k in zip(prems, kids)]
            return
        if tag not in _MIRROR:
            raise TranslationError("unsupported", f"cannot dualize a {tag} step", m)
        g = dual(rule.formula)
        new = Rule(_MIRROR[tag], formula=g, index=rule.index, term=rule.term, eigen=rule.eigen)
        kids = []
        for (ante, succ), k in zip(_side_formulas(rule), nd.children):
            guards = [s for s in ante if tag in ("bex-left", "ball-right") and s == ante[0]]
            others = [s for s in ante if s not in guards]
            prem_ante = list(guards) + [dual(s) for s in succ]
            prem_succ = [dual(s) for s in others]
            prem = c.add(ante=prem_ante, succ=prem_succ)
            kids.append(self._link(prem, k, reg))
        node.rule, node.children = new, kids

    def _direct_axioms(self, orig: Sequent, rule: Rule):
        out = [rule]
        f = rule.formula
        if rule.tag == "id" and f is not None:
            out += [Rule("neg-left", formula=f) if isinstance(f, Atom) else Rule("id", formula=dual(f))]
        return out


def dualize(pi: CyclicPreproof, n: int) -> CyclicPreproof:
    """Swap the sides of every sequent, dualizing formulas; antecedent atoms stay put."""
    for m, nd in pi.nodes.items():
        for f in nd.sequent.formulas():
            if not is_sigma(f, n):
                raise TranslationError("fragment", f"formula outside sigma-{n}", m)
        if nd.rule.tag in ("ind", "assumption"):
            raise TranslationError("fragment", f"{nd.rule.tag} step in a cyclic proof", m)
    verdict = check(pi)
    if not verdict.valid:
        raise TranslationError("precondition", "input is not a valid cyclic proof")
    try:
        root = _Dualizer(pi).build()
    except BuildError as e:
        raise TranslationError("internal", str(e)) from None
    out = to_preproof(root, pi.theory)
    validate_fragment(out, n, "all-pi")
    return out
