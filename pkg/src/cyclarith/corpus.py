"""The bundled example proofs and the code that builds them.

The files under ``corpus/`` are generated by ``write_corpus`` and kept in
the package so the command line can check them directly; the tests compare
them against a fresh build.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .builder import Builder, BudRef, to_preproof
from .calculus import ProofNode, Rule, Sequent, Theory
from .cyclic import Bud, CyclicPreproof
from .formats import parse_proof, print_proof
from .syntax import (
    ZERO, All, And, App, Atom, BAll, BEx, Ex, NAtom, Or, Plus, Signature, Succ, Times, Var,
    apply_subst, dual, eq, instantiate, lt, neq,
)
from .translator import simulate_induction, translate, translate_variant

X, A = Var("x"), Var("a")


# ------------------------------------------------------------ 0 + x = x

def plus_zero(t):
    return eq(Plus(ZERO, t), t)


def times_zero(t):
    return eq(Times(ZERO, t), ZERO)


def plus_zero_premisses(bld: Builder, ctx_ante=(), ctx_succ=(), a=A):
    """Base and step for induction on 0 + x = x."""
    ga, gs = frozenset(ctx_ante), frozenset(ctx_succ)
    base = bld.q(Sequent(ga, gs | {plus_zero(ZERO)}), 4)
    sa = Succ(a)
    e1 = eq(Plus(ZERO, sa), Succ(Plus(ZERO, a)))
    e2 = eq(Succ(Plus(ZERO, a)), sa)
    seq = Sequent(ga | {plus_zero(a)}, gs | {plus_zero(sa)})
    step = bld.have(seq, e1, lambda q: bld.q(q, 5),
                    lambda q: bld.have(q, e2, lambda r: bld.axiom(r, "eq2", e2),
                                       lambda r: bld.axiom(r, "eq3", plus_zero(sa))))
    return base, step


def times_zero_premisses(bld: Builder, ctx_ante=(), ctx_succ=(), a=A):
    """Base and step for induction on 0 * x = 0."""
    ga, gs = frozenset(ctx_ante), frozenset(ctx_succ)
    base = bld.q(Sequent(ga, gs | {times_zero(ZERO)}), 6)
    sa = Succ(a)
    e1 = eq(Times(ZERO, sa), Plus(Times(ZERO, a), ZERO))
    e2 = eq(Plus(Times(ZERO, a), ZERO), Times(ZERO, a))
    e3 = eq(Times(ZERO, sa), Times(ZERO, a))
    seq = Sequent(ga | {times_zero(a)}, gs | {times_zero(sa)})
    step = bld.have(seq, e1, lambda q: bld.q(q, 7),
                    lambda q: bld.have(q, e2, lambda r: bld.q(r, 4),
                                       lambda r: bld.have(r, e3, lambda s: bld.axiom(s, "eq3", e3),
                                                          lambda s: bld.axiom(s, "eq3", times_zero(sa)))))
    return base, step


SIMULATIONS = {
    "plus-zero": (lambda t: plus_zero(t), plus_zero_premisses),
    "times-zero": (lambda t: times_zero(t), times_zero_premisses),
}


def simulation(name: str, progress: bool = True, retarget: bool = False) -> CyclicPreproof:
    """Induction on the named formula at the free variable x, simulated by a cycle."""
    phi_of, premisses = SIMULATIONS[name]
    base, step = premisses(Builder())
    return simulate_induction((), (), phi_of(X), "x", X, base, step, eigen="a",
                              progress=progress, retarget=retarget)


# -------------------------------------------------------- pipeline inputs

def _ind_proof(bld, phi, var, eigen, term, base, step, binders):
    """Induction at ``term``, then universal closure over ``binders``."""
    goal_seq = Sequent((), [_at(phi, var, term)])
    node = bld.step(goal_seq, Rule("ind", formula=phi, var=var, eigen=eigen, term=term), base, step)
    body = _at(phi, var, term)
    for i in range(len(binders) - 1, -1, -1):
        f = body
        for v in reversed(binders[i:]):
            f = All(v, f)
        node = bld.step(Sequent((), [f]), Rule("all-right", formula=f, eigen=binders[i]), node)
    return node


def _at(phi, var, t):
    return apply_subst({var: t}, phi)


def plus_zero_input():
    """Finite proof of  => forall x. 0 + x = x  by one induction."""
    bld = Builder()
    base, step = plus_zero_premisses(bld)
    root = _ind_proof(bld, plus_zero(X), "x", "a", X, base, step, ["x"])
    return to_preproof(root, cyclic=False)


def le_plus(x, y):
    """x <= x + y, with x <= w read as: some z has x + z = w."""
    return Ex("z", eq(Plus(x, Var("z")), Plus(x, y)))


def le_plus_input():
    """Finite proof of  => forall x forall y exists z. x + z = x + y  by induction on y."""
    bld = Builder()
    Y, E = Var("y"), Var("e")
    base_seq = Sequent((), [le_plus(X, ZERO)])
    refl = eq(Plus(X, ZERO), Plus(X, ZERO))
    base = bld.step(base_seq, Rule("ex-right", formula=le_plus(X, ZERO), term=ZERO),
                    bld.axiom(base_seq.add(succ=[refl]), "eq1", refl))
    sa, se = Succ(A), Succ(E)
    goal = le_plus(X, sa)
    hyp = eq(Plus(X, E), Plus(X, A))
    h1 = eq(Plus(X, se), Succ(Plus(X, E)))
    h2 = eq(Plus(X, sa), Succ(Plus(X, A)))
    h3 = eq(Succ(Plus(X, E)), Succ(Plus(X, A)))
    h4 = eq(Succ(Plus(X, A)), Plus(X, sa))
    h5 = eq(Succ(Plus(X, E)), Plus(X, sa))
    fin = eq(Plus(X, se), Plus(X, sa))

    def chain(q):
        return bld.have(q, h1, lambda r: bld.q(r, 5), lambda r:
               bld.have(r, h2, lambda s: bld.q(s, 5), lambda s:
               bld.have(s, h3, lambda u: bld.axiom(u, "eq2", h3), lambda u:
               bld.have(u, h4, lambda v: bld.symm(v, Plus(X, sa), Succ(Plus(X, A))), lambda v:
               bld.have(v, h5, lambda w: bld.axiom(w, "eq3", h5),
                        lambda w: bld.axiom(w, "eq3", fin))))))

    inner = Sequent([hyp], [goal])
    wit = bld.step(inner, Rule("ex-right", formula=goal, term=se), chain(inner.add(succ=[fin])))
    step_seq = Sequent([le_plus(X, A)], [goal])
    step = bld.step(step_seq, Rule("ex-left", formula=le_plus(X, A), eigen="e"), wit)
    root = _ind_proof(bld, le_plus(X, Y), "y", "a", Y, base, step, ["x", "y"])
    return to_preproof(root, cyclic=False)


PIPELINES = {
    "plus-zero": (plus_zero_input, 0),
    "le-plus": (le_plus_input, 1),
}


def pipeline(name: str, progress: bool = True) -> CyclicPreproof:
    make, n = PIPELINES[name]
    if progress:
        return translate(make(), n)
    return translate_variant(make(), n)


# ------------------------------------------------- pigeonhole over set codes
#
# Sets are coded by numbers: mem(x, S) is membership, del(S, x) removes x
# from S, gtc(A, B) compares cardinalities and f is the oracle map.  The
# elementary facts about the coding are declared as axioms.

SA, SB = Var("A"), Var("B")
_S, _T, _Y, _Z = Var("S"), Var("T"), Var("y"), Var("z")


def mem(x, s):
    return Atom("mem", (x, s))


def nmem(x, s):
    return NAtom("mem", (x, s))


def gtc(s, t):
    return Atom("gtc", (s, t))


def delete(s, x):
    return App("del", (s, x))


def fapp(x):
    return App("f", (x,))


def maps_into(s, t):
    """f(S) is contained in T."""
    return BAll("x", s, Or(nmem(Var("x"), s), mem(fapp(Var("x")), t)))


def collision(s):
    """Two distinct members of S with the same image."""
    x, y = Var("x"), Var("y")
    return BEx("x", s, BEx("y", s, And(mem(x, s), And(mem(y, s), And(neq(x, y), eq(fapp(x), fapp(y)))))))


def nonempty(s):
    return BEx("y", s, mem(_Y, s))


def hit(s, b):
    """Some member of S maps to b."""
    return BEx("x", s, And(mem(Var("x"), s), eq(fapp(Var("x")), b)))


def other_hit(s, a, b):
    """Some member of S other than a maps to b."""
    x = Var("x")
    return BEx("x", s, And(mem(x, s), And(neq(x, a), eq(fapp(x), b))))


PHP_THEORY = Theory(
    Signature(functions=(("f", 1), ("del", 2)), predicates=(("mem", 2), ("gtc", 2))),
    (
        ("nonempty", Sequent((), [eq(_S, ZERO), nonempty(_S)])),
        ("card-pos", Sequent([gtc(_S, _T)], [nonempty(_S)])),
        ("empty", Sequent([mem(_Y, ZERO)], ())),
        ("mem-lt", Sequent([mem(_Y, _S)], [lt(_Y, _S)])),
        ("del-lt", Sequent([mem(_Y, _S)], [lt(delete(_S, _Y), _S)])),
        ("del-sub", Sequent([mem(_Y, delete(_S, _Z))], [mem(_Y, _S)])),
        ("del-ne", Sequent([mem(_Y, delete(_S, _Z)), eq(_Y, _Z)], ())),
        ("del-intro", Sequent([mem(_Y, _S)], [eq(_Y, _Z), mem(_Y, delete(_S, _Z))])),
        ("card-dec", Sequent([gtc(_S, _T), mem(_Y, _S), mem(_Z, _T)],
                             [gtc(delete(_S, _Y), delete(_T, _Z))])),
        ("card-dec-right", Sequent([gtc(_S, _T), mem(_Z, _T)], [gtc(_S, delete(_T, _Z))])),
    ),
)


class _PHP:
    def __init__(self, progress: bool):
        self.bld = Builder(PHP_THEORY)
        self.progress = progress

    # small helpers
    def unpack(self, seq, f, then):
        """Split a conjunction in the antecedent into its literals."""
        if not isinstance(f, And):
            return then(seq)
        bld = self.bld
        s1 = seq.add(ante=[f.left])
        s2 = s1.add(ante=[f.right])
        inner = self.unpack(s2, f.left, lambda q: self.unpack(q, f.right, then))
        return bld.step(seq, Rule("and-left", formula=f, index=0),
                        bld.step(s1, Rule("and-left", formula=f, index=1), inner))

    def conj(self, seq, f, leaf):
        """Prove a conjunction in the succedent, closing each conjunct with ``leaf``."""
        if not isinstance(f, And):
            return leaf(seq, f)
        rest = seq.succ - {f}
        kids = [self.conj(Sequent(seq.ante, rest | {part}), part, leaf) for part in (f.left, f.right)]
        return self.bld.step(seq, Rule("and-right", formula=f), *kids)

    def ident(self, seq, f):
        if f in seq.ante:
            return self.bld.axiom(seq, "id", f)
        return self.bld.axiom(seq, "neg-right", f)

    def split_or(self, seq, f):
        """Premiss of or-right twice: both disjuncts replace f."""
        s1 = seq.add(succ=[f.left])
        s2 = Sequent(s1.ante, (s1.succ - {f}) | {f.right})
        return s1, s2

    def progress_cut(self, seq, s, x, kid_seq, kid):
        """Record del(s, x) < s before handing over to the bud side."""
        bld = self.bld
        if not self.progress:
            return bld.wk(seq, kid)
        f = lt(delete(s, x), s)
        return bld.have(seq, f, lambda q: bld.named(q, "del-lt"), lambda q: bld.wk(q, kid))

    # the two cases of the recursion
    def image_shrinks(self, q, a_set, b, eigen, close_hit):
        """q has maps_into(a_set, del(B, b)) in the succedent; ``close_hit``
        proves the remaining goal once f(c) = b is known."""
        bld = self.bld
        goal = maps_into(a_set, delete(SB, b))
        c = Var(eigen)
        body = instantiate(goal, c)
        s0 = Sequent(q.ante | {lt(c, a_set)}, (q.succ - {goal}) | {body})
        s1, s2 = self.split_or(s0, body)
        fc = fapp(c)
        hyp = maps_into(SA, SB)

        def after_member(r):  # r has mem(c, A) and c < A available
            inst = instantiate(hyp, c)
            r1 = r.add(ante=[inst])
            s_no, s_yes = r1.add(ante=[inst.left]), r1.add(ante=[inst.right])
            no = bld.axiom(s_no, "id" if inst.left in s_no.succ else "neg-left", inst.left)
            yes = bld.have(s_yes, eq(fc, b), lambda u: bld.named(u, "del-intro"), close_hit)
            return bld.step(r, Rule("ball-left", formula=hyp, term=c),
                            bld.step(r1, Rule("or-left", formula=inst), no, yes))

        inner = self._member_facts(s2, c, a_set, after_member)
        chain = bld.step(s0, Rule("or-right", formula=body, index=0),
                         bld.step(s1, Rule("or-right", formula=body, index=1), inner))
        return bld.step(q, Rule("ball-right", formula=goal, eigen=eigen), chain)

    def _member_facts(self, seq, c, a_set, then):
        bld = self.bld
        if a_set == SA:  # c < A is already the bound; mem(c, A) is the negated disjunct
            return then(seq)
        m = mem(c, a_set)

        def with_mem(r):
            return bld.have(r, mem(c, SA), lambda u: bld.named(u, "del-sub"),
                            lambda u: bld.have(u, lt(c, SA), lambda v: bld.named(v, "mem-lt"), then))
        return bld.have(seq, m, lambda r: bld.axiom(r, "neg-right", m), with_mem)

    def build(self):
        bld = self.bld
        G, S, N = gtc(SA, SB), maps_into(SA, SB), collision(SA)
        core = Sequent([G, S], [N])
        bud_x, bud_y = BudRef(), BudRef()
        b, a, a2 = Var("b"), Var("a"), Var("a2")
        delA, delB = delete(SA, a), delete(SB, b)

        # B is empty: some member of A is mapped into the empty set
        def empty_case(q):
            g = Var("g")
            e = nonempty(SA)

            def use(r):
                r1 = r.add(ante=[lt(g, SA), mem(g, SA)])
                inst = instantiate(S, g)
                r2 = r1.add(ante=[inst])
                no = bld.axiom(r2.add(ante=[inst.left]), "neg-left", inst.left)
                r3 = r2.add(ante=[inst.right])
                m0 = mem(fapp(g), ZERO)
                yes = bld.have(r3, m0, lambda u: bld.axiom(u, "eq3", m0), lambda u: bld.named(u, "empty"))
                return bld.step(r, Rule("bex-left", formula=e, eigen="g"),
                                bld.step(r1, Rule("ball-left", formula=S, term=g),
                                         bld.step(r2, Rule("or-left", formula=inst), no, yes)))
            return bld.have(q, e, lambda r: bld.named(r, "card-pos"), use)

        # a and a2 are distinct members of A with the same image b
        def collide(q):
            inner = instantiate(N, a2)
            body = instantiate(inner, a)
            q1 = q.add(succ=[inner])
            q2 = q1.add(succ=[body])

            def leaf(r, part):
                if part == eq(fapp(a2), fapp(a)):
                    return bld.with_eq(r, b, fapp(a), lambda u: bld.axiom(u, "eq3", part))
                return self.ident(r, part)
            return bld.step(q, Rule("bex-right", formula=N, term=a2),
                            bld.step(q1, Rule("bex-right", formula=inner, term=a), self.conj(q2, body, leaf)))

        # a collision in A minus a is one in A
        def transfer(q):
            d1, d2 = Var("d1"), Var("d2")
            n1 = collision(delA)
            inner = instantiate(n1, d1)
            body = instantiate(inner, d2)
            q1 = q.add(ante=[lt(d1, delA), inner])
            q2 = q1.add(ante=[lt(d2, delA), body])

            def close(r):
                facts = [(mem(d1, SA), "del-sub"), (mem(d2, SA), "del-sub"),
                         (lt(d1, SA), "mem-lt"), (lt(d2, SA), "mem-lt")]

                def go(u, i):
                    if i == len(facts):
                        goal_inner = instantiate(N, d1)
                        goal_body = instantiate(goal_inner, d2)
                        u1 = u.add(succ=[goal_inner])
                        u2 = u1.add(succ=[goal_body])
                        return bld.step(u, Rule("bex-right", formula=N, term=d1),
                                        bld.step(u1, Rule("bex-right", formula=goal_inner, term=d2),
                                                 self.conj(u2, goal_body, self.ident)))
                    f, name = facts[i]
                    return bld.have(u, f, lambda v: bld.named(v, name), lambda v: go(v, i + 1))
                return go(r, 0)
            return bld.step(q, Rule("bex-left", formula=n1, eigen="d1"),
                            bld.step(q1, Rule("bex-left", formula=inner, eigen="d2"),
                                     self.unpack(q2, body, close)))

        # f(a) = b and no other member of A maps to b: recurse on A - a, B - b
        def shrink_both(q):
            H = other_hit(SA, a, b)
            Gx, Sx, Nx = gtc(delA, delB), maps_into(delA, delB), collision(delA)
            comp = Sequent([Gx, Sx], [Nx])
            sub_node = bld.sub(comp, {"A": delA, "B": delB}, bud_x)

            def close_hit(u):  # f(c) = b: c witnesses H
                c = Var("c")
                body = instantiate(H, c)
                u1 = u.add(succ=[body])

                def leaf(r, part):
                    if part == neq(c, a):
                        e = eq(c, a)
                        return bld.have(r, e, lambda v: bld.axiom(v, "neg-right", e),
                                        lambda v: bld.named(v, "del-ne"))
                    return self.ident(r, part)
                return bld.step(u, Rule("bex-right", formula=H, term=c), self.conj(u1, body, leaf))

            def after_images(r):
                return self.progress_cut(r, SB, b, comp, sub_node)
            return bld.have(q, Nx,
                            lambda r: bld.have(r, Gx, lambda u: bld.named(u, "card-dec"),
                                               lambda u: bld.have(u, Sx,
                                                                  lambda v: self.image_shrinks(v, delA, b, "c", close_hit),
                                                                  after_images)),
                            transfer)

        # nothing in A maps to b: recurse on A, B - b
        def shrink_right(q):
            F = hit(SA, b)
            Gy, Sy = gtc(SA, delB), maps_into(SA, delB)
            comp = Sequent([Gy, Sy], [N])
            sub_node = bld.sub(comp, {"B": delB}, bud_y)

            def close_hit(u):
                e = Var("e")
                body = instantiate(F, e)
                return bld.step(u, Rule("bex-right", formula=F, term=e),
                                self.conj(u.add(succ=[body]), body, self.ident))
            return bld.have(q, Gy, lambda u: bld.named(u, "card-dec-right"),
                            lambda u: bld.have(u, Sy, lambda v: self.image_shrinks(v, SA, b, "e", close_hit),
                                               lambda v: self.progress_cut(v, SB, b, comp, sub_node)))

        def member_b(q):  # q: b < B, mem(b, B), G, S => N
            F = hit(SA, b)
            fa = instantiate(F, a)

            def has_preimage(r):
                r1 = r.add(ante=[lt(a, SA), fa])
                H = other_hit(SA, a, b)

                def two(u):
                    h = instantiate(H, a2)
                    u1 = u.add(ante=[lt(a2, SA), h])
                    return bld.step(u, Rule("bex-left", formula=H, eigen="a2"),
                                    self.unpack(u1, h, collide))
                return bld.step(r, Rule("bex-left", formula=F, eigen="a"),
                                self.unpack(r1, fa, lambda u: bld.have(u, H, shrink_both, two)))
            return bld.have(q, F, shrink_right, has_preimage)

        def split(q):  # q: G, S => N, B = 0
            e = nonempty(SB)

            def pick(r):
                r1 = Sequent(r.ante | {lt(b, SB), mem(b, SB)}, r.succ)
                base = Sequent(core.ante | {lt(b, SB), mem(b, SB)}, core.succ)
                return bld.step(r, Rule("bex-left", formula=e, eigen="b"), bld.wk(r1, member_b(base)))
            return bld.have(q, e, lambda r: bld.named(r, "nonempty"), pick)

        top = bld.have(core, eq(SB, ZERO), split, empty_case)
        bud_x.target = bud_y.target = top

        # close: => forall A forall B (not G or (not S or N))
        nG, nS = dual(G), dual(S)
        inner = Or(nS, N)
        phi = Or(nG, inner)
        s3 = Sequent((), [nG, nS, N])
        with_g = bld.have(s3, G, lambda r: bld.axiom(r, "neg-right", G),
                          lambda r: bld.wk(r, bld.have(Sequent([G], [nS, N]), S,
                                                       lambda u: bld.axiom(u, "neg-right", S),
                                                       lambda u: bld.wk(u, top))))
        s2 = Sequent((), [nG, inner, nS])
        s1 = Sequent((), [nG, inner])
        s0 = Sequent((), [phi, nG])
        node = bld.step(s2, Rule("or-right", formula=inner, index=1), with_g)
        node = bld.step(s1, Rule("or-right", formula=inner, index=0), node)
        node = bld.step(s0, Rule("or-right", formula=phi, index=1), node)
        node = bld.step(Sequent((), [phi]), Rule("or-right", formula=phi, index=0), node)
        fb = All("B", phi)
        node = bld.step(Sequent((), [fb]), Rule("all-right", formula=fb, eigen="B"), node)
        fa = All("A", fb)
        root = bld.step(Sequent((), [fa]), Rule("all-right", formula=fa, eigen="A"), node)
        return to_preproof(root, PHP_THEORY)


def php(progress: bool = True) -> CyclicPreproof:
    """Cyclic proof that an injective f cannot map a larger set into a smaller one."""
    return _PHP(progress).build()


# ------------------------------------------------------- an unsound preproof

def unsound() -> CyclicPreproof:
    """A locally correct preproof of  => 0 = 1  whose only trace progresses once.

    The root substitutes 1 for x in  => 0 = x.  That sequent is cut against
    "some z below x", whose left side loops straight back and whose right
    side introduces a < x and then spins on an identity substitution.
    """
    bld = Builder(check=True)
    z = Var("z")
    one = Succ(ZERO)
    goal = Sequent((), [eq(ZERO, X)])
    below = BEx("z", X, eq(z, z))
    back, spin = BudRef(), BudRef()
    loop = bld.sub(goal, {}, spin)
    loop.registered.add(A)
    spin.target = loop
    picked = Sequent([lt(A, X), eq(A, A)], [eq(ZERO, X)])
    right = bld.step(goal.add(ante=[below]), Rule("bex-left", formula=below, eigen="a"),
                     bld.wk(picked, loop))
    left = bld.step(goal.add(succ=[below]), Rule("wk"), back)
    mid = bld.cut(goal, below, left, right)
    back.target = mid
    root = bld.sub(Sequent((), [eq(ZERO, one)]), {"x": one}, mid)
    return to_preproof(root)


# ------------------------------------------------------------- mutations

def retarget_bud(pi: CyclicPreproof) -> CyclicPreproof:
    """Point the first bud back at its own source, which becomes an identity
    substitution.  The result is still locally correct, but the new loop
    carries no progressing trace."""
    edge, _ = pi.buds()[0]
    node = pi.nodes[edge.source]
    nodes = dict(pi.nodes)
    nodes[edge.source] = ProofNode(node.sequent, Rule("sub", subst=()), (Bud(edge.source),),
                                   node.registered)
    return CyclicPreproof(nodes, pi.root, pi.theory)


# ------------------------------------------------------------- the files

def _pipeline_output(name, progress=True):
    return lambda: pipeline(name, progress)


# file name -> (builder, expected to be valid)
ENTRIES = {
    "sim-plus-zero.cyc": (lambda: simulation("plus-zero"), True),
    "sim-plus-zero-broken.cyc": (lambda: simulation("plus-zero", progress=False), False),
    "sim-plus-zero-retarget.cyc": (lambda: simulation("plus-zero", retarget=True), False),
    "sim-times-zero.cyc": (lambda: simulation("times-zero"), True),
    "sim-times-zero-broken.cyc": (lambda: simulation("times-zero", progress=False), False),
    "sim-times-zero-retarget.cyc": (lambda: simulation("times-zero", retarget=True), False),
    "plus-zero.prf": (plus_zero_input, True),
    "plus-zero-translated.cyc": (_pipeline_output("plus-zero"), True),
    "plus-zero-translated-broken.cyc": (_pipeline_output("plus-zero", False), False),
    "plus-zero-translated-retarget.cyc": (lambda: retarget_bud(pipeline("plus-zero")), False),
    "le-plus.prf": (le_plus_input, True),
    "le-plus-translated.cyc": (_pipeline_output("le-plus"), True),
    "le-plus-translated-broken.cyc": (_pipeline_output("le-plus", False), False),
    "le-plus-translated-retarget.cyc": (lambda: retarget_bud(pipeline("le-plus")), False),
    "php.cyc": (lambda: php(True), True),
    "php-broken.cyc": (lambda: php(False), False),
    "php-retarget.cyc": (lambda: retarget_bud(php(True)), False),
    "unsound.cyc": (unsound, False),
}

# levels for the translate/dualize pipelines, keyed by input file
LEVELS = {"plus-zero.prf": 0, "le-plus.prf": 1}


def corpus_dir() -> Path:
    return Path(str(resources.files("cyclarith") / "corpus"))


def build(name: str):
    return ENTRIES[name][0]()


def load(name: str):
    return parse_proof((corpus_dir() / name).read_text())


def write_corpus(target: Path | None = None) -> list:
    """Regenerate every corpus file; returns the paths written."""
    target = Path(target) if target is not None else corpus_dir()
    target.mkdir(parents=True, exist_ok=True)
    out = []
    for name, (make, _) in ENTRIES.items():
        path = target / name
        path.write_text(print_proof(make()))
        out.append(path)
    return out
