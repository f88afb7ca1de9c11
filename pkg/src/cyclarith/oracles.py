"""Independent reference implementations and random instance generators.

Nothing here shares code with the routines it is used to test: formulas are
evaluated by compiling them to Python expressions, automata by plain
state-set simulation.
"""
from __future__ import annotations

import itertools
import random

from .automata import DBA, DRA, NBA, LassoWord
from .syntax import (
    EQ, LT, All, And, App, Atom, BAll, BEx, Ex, NAtom, Or, Plus, Succ, Times, Var, Zero, eq, lt,
    neq, nlt,
)


# ------------------------------------------------------ bounded formulas

class _Compiler:
    def __init__(self):
        self.names = {}
        self.free = {}
        self.fresh = 0

    def var(self, name: str) -> str:
        if name not in self.names:
            self.names[name] = self.free[name] = f"v{len(self.free)}"
        return self.names[name]

    def term(self, t) -> str:
        if isinstance(t, Var):
            return self.var(t.name)
        if isinstance(t, Zero):
            return "0"
        if isinstance(t, Succ):
            return f"({self.term(t.arg)} + 1)"
        if isinstance(t, Plus):
            return f"({self.term(t.left)} + {self.term(t.right)})"
        if isinstance(t, Times):
            return f"({self.term(t.left)} * {self.term(t.right)})"
        if isinstance(t, App):
            return f"F[{t.fn!r}](" + ", ".join(self.term(a) for a in t.args) + ")"
        raise TypeError(t)

    def atom(self, pred, args) -> str:
        xs = [self.term(a) for a in args]
        if pred == EQ:
            return f"({xs[0]} == {xs[1]})"
        if pred == LT:
            return f"({xs[0]} < {xs[1]})"
        return f"bool(P[{pred!r}](" + ", ".join(xs) + "))"

    def formula(self, f) -> str:
        if isinstance(f, Atom):
            return self.atom(f.pred, f.args)
        if isinstance(f, NAtom):
            return f"(not {self.atom(f.pred, f.args)})"
        if isinstance(f, And):
            return f"({self.formula(f.left)} and {self.formula(f.right)})"
        if isinstance(f, Or):
            return f"({self.formula(f.left)} or {self.formula(f.right)})"
        if isinstance(f, (BEx, BAll)):
            bound = self.term(f.bound)
            saved = self.names.get(f.var)
            self.fresh += 1
            self.names[f.var] = v = f"b{self.fresh}"
            body = self.formula(f.body)
            if saved is None:
                del self.names[f.var]
            else:
                self.names[f.var] = saved
            q = "any" if isinstance(f, BEx) else "all"
            return f"{q}({body} for {v} in range({bound}))"
        raise ValueError("unbounded quantifier in a bounded formula")


def delta0_truth(rho: dict, phi, functions=None, predicates=None) -> bool:
    """Truth of a bounded formula by brute-force enumeration."""
    c = _Compiler()
    src = c.formula(phi)
    env = {"F": functions or {}, "P": predicates or {}}
    for name, py in c.free.items():
        env[py] = rho[name]
    return eval(src, env)  # noqa: S307 - source is generated above


# ------------------------------------------------------- random formulas

def random_term(rng: random.Random, names, depth: int = 2):
    r = rng.random()
    if depth == 0 or r < 0.35:
        return Var(rng.choice(names)) if names and rng.random() < 0.7 else Zero()
    if r < 0.6:
        return Succ(random_term(rng, names, depth - 1))
    if r < 0.85:
        return Plus(random_term(rng, names, depth - 1), random_term(rng, names, depth - 1))
    return Times(random_term(rng, names, depth - 1), random_term(rng, names, depth - 1))


def random_delta0(rng: random.Random, names, depth: int = 3):
    """A random bounded formula whose free variables lie in ``names``."""
    r = rng.random()
    if depth == 0 or r < 0.3:
        mk = rng.choice([eq, lt, neq, nlt])
        return mk(random_term(rng, names, 1), random_term(rng, names, 1))
    if r < 0.5:
        return And(random_delta0(rng, names, depth - 1), random_delta0(rng, names, depth - 1))
    if r < 0.7:
        return Or(random_delta0(rng, names, depth - 1), random_delta0(rng, names, depth - 1))
    v = f"q{depth}"
    bound = random_term(rng, names, 1)
    body = random_delta0(rng, list(names) + [v], depth - 1)
    return (BEx if rng.random() < 0.5 else BAll)(v, bound, body)


def random_sigma1(rng: random.Random, names, depth: int = 3):
    v = "w"
    return Ex(v, random_delta0(rng, list(names) + [v], depth))


def random_pi1(rng: random.Random, names, depth: int = 3):
    v = "w"
    return All(v, random_delta0(rng, list(names) + [v], depth))


# --------------------------------------------------------------- automata

def random_nba(rng: random.Random, n: int, alphabet=("a", "b"), density: float = 0.35) -> NBA:
    states = [f"q{i}" for i in range(n)]
    trans = {(q, s, r) for q in states for s in alphabet for r in states if rng.random() < density}
    finals = [q for q in states if rng.random() < 0.4]
    return NBA(alphabet, states, trans, states[0], finals)


def random_dba(rng: random.Random, n: int, alphabet=("a", "b")) -> DBA:
    states = [f"q{i}" for i in range(n)]
    trans = {(q, s, rng.choice(states)) for q in states for s in alphabet}
    finals = [q for q in states if rng.random() < 0.4]
    return DBA(alphabet, states, trans, states[0], finals)


def random_dra(rng: random.Random, n: int, alphabet=("a", "b"), colours: int = 4) -> DRA:
    states = [f"q{i}" for i in range(n)]
    trans = {(q, s, rng.choice(states)) for q in states for s in alphabet}
    colour = {q: rng.randrange(colours) for q in states}
    return DRA(alphabet, states, trans, states[0], colour)


def all_lassos(alphabet, max_spoke: int, max_loop: int):
    for nu in range(max_spoke + 1):
        for u in itertools.product(alphabet, repeat=nu):
            for nv in range(1, max_loop + 1):
                for v in itertools.product(alphabet, repeat=nv):
                    yield LassoWord(u, v)


def random_lasso(rng: random.Random, alphabet, max_spoke: int = 3, max_loop: int = 4) -> LassoWord:
    u = [rng.choice(alphabet) for _ in range(rng.randint(0, max_spoke))]
    v = [rng.choice(alphabet) for _ in range(rng.randint(1, max_loop))]
    return LassoWord(u, v)


def run_profile(a, word) -> dict:
    """For each start p: the set of (q, saw_final) reachable by reading ``word``."""
    out = {}
    for p in a.states:
        cur = {(p, False)}
        for sym in word:
            cur = {(r, seen or r in a.finals) for q, seen in cur for r in a.successors(q, sym)}
        out[p] = frozenset(cur)
    return out


def matrix_entries(a, word) -> dict:
    """The {0, 1, inf} entries of the transition matrix, from ``run_profile``."""
    prof = run_profile(a, word)
    out = {}
    for p in a.states:
        for q in a.states:
            hits = {seen for r, seen in prof[p] if r == q}
            out[(p, q)] = 0 if not hits else ("inf" if True in hits else 1)
    return out


def accepts_by_unrolling(a, w: LassoWord) -> bool:
    """Lasso membership on the explicit graph of (state, position) pairs:
    some reachable pair just entered through a final state returns to itself."""
    u, v = w.spoke, w.loop
    n = len(u) + len(v)

    def sym(i):
        return u[i] if i < len(u) else v[i - len(u)]

    def nxt(i):
        return i + 1 if i + 1 < n else len(u)

    def succ(cfg):
        q, i = cfg
        return {(r, nxt(i)) for r in a.successors(q, sym(i))}

    def closure(starts):
        seen, todo = set(), list(starts)
        while todo:
            c = todo.pop()
            if c not in seen:
                seen.add(c)
                todo.extend(succ(c))
        return seen

    reach = closure([(a.initial, 0)])
    for q, i in reach:
        if i < len(u) or q not in a.finals:
            continue
        # (q, i) with q final was entered by a letter unless it is the start
        if (q, i) in closure(succ((q, i))):
            return True
    return False


def dra_run_accepts(a: DRA, w: LassoWord) -> bool:
    """Run until a (state, loop position) pair repeats; the least colour on
    the repeated stretch decides."""
    step = {(q, s): r for q, s, r in a.transitions}
    colour = dict(a.colour)
    q = a.initial
    for sym in w.spoke:
        q = step[(q, sym)]
    seen, trail, i = {}, [], 0
    while (q, i) not in seen:
        seen[(q, i)] = len(trail)
        trail.append(colour[q])
        q = step[(q, w.loop[i])]
        i = (i + 1) % len(w.loop)
    return min(trail[seen[(q, i)]:]) % 2 == 0


def dra_accepts_all_bounded(a: DRA, max_len: int) -> bool:
    return all(dra_run_accepts(a, w) for w in all_lassos(a.alphabet, max_len, max_len))
