"""Omega-automata, lasso-word semantics and the complementation machinery.

Every claim about an omega-language is decided on ultimately periodic words
u.v^omega (``LassoWord``).  Transition matrices over {0, 1, inf} are stored
as two tuples of row bitmasks: ``reach`` (entry > 0) and ``fin`` (entry inf).
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Optional

INF = math.inf


class AlphabetError(ValueError):
    pass


class AutomatonError(ValueError):
    pass


class InvariantBreach(RuntimeError):
    """An internal certificate failed to verify."""


@dataclass(frozen=True)
class LassoWord:
    spoke: tuple
    loop: tuple

    def __init__(self, spoke: Iterable = (), loop: Iterable = ()):
        object.__setattr__(self, "spoke", tuple(spoke))
        object.__setattr__(self, "loop", tuple(loop))
        if not self.loop:
            raise ValueError("the loop of a lasso word must be nonempty")

    def symbol(self, i: int):
        u, v = self.spoke, self.loop
        return u[i] if i < len(u) else v[(i - len(u)) % len(v)]

    def prefix(self, n: int) -> tuple:
        return tuple(self.symbol(i) for i in range(n))

    def symbols(self) -> set:
        return set(self.spoke) | set(self.loop)


# ------------------------------------------------------------------ automata

@dataclass(frozen=True)
class NBA:
    alphabet: tuple
    states: tuple
    transitions: frozenset
    initial: Hashable
    finals: frozenset

    def __init__(self, alphabet, states, transitions, initial, finals):
        set_ = object.__setattr__
        set_(self, "alphabet", tuple(dict.fromkeys(alphabet)))
        set_(self, "states", tuple(dict.fromkeys(states)))
        set_(self, "transitions", frozenset(transitions))
        set_(self, "initial", initial)
        set_(self, "finals", frozenset(finals))
        qs, al = set(self.states), set(self.alphabet)
        if initial not in qs:
            raise AutomatonError("initial state is not a state")
        if not self.finals <= qs:
            raise AutomatonError("final states must be states")
        for q, a, r in self.transitions:
            if q not in qs or r not in qs or a not in al:
                raise AutomatonError(f"bad transition {(q, a, r)!r}")
        self._validate()

    def _validate(self):
        pass

    @cached_property
    def _succ(self) -> dict:
        out = {}
        for q, a, r in sorted(self.transitions, key=repr):
            out.setdefault((q, a), []).append(r)
        return {k: tuple(v) for k, v in out.items()}

    def successors(self, q, a) -> tuple:
        return self._succ.get((q, a), ())

    @cached_property
    def index(self) -> dict:
        return {q: i for i, q in enumerate(self.states)}


class DBA(NBA):
    """A Buchi automaton whose transition relation is a total function."""

    def _validate(self):
        for q in self.states:
            for a in self.alphabet:
                if len(self.successors(q, a)) != 1:
                    raise AutomatonError(f"not deterministic and total at {(q, a)!r}")

    def step(self, q, a):
        return self.successors(q, a)[0]


@dataclass(frozen=True)
class DRA:
    alphabet: tuple
    states: tuple
    transitions: frozenset
    initial: Hashable
    colour: tuple

    def __init__(self, alphabet, states, transitions, initial, colour):
        object.__setattr__(self, "alphabet", tuple(dict.fromkeys(alphabet)))
        object.__setattr__(self, "states", tuple(dict.fromkeys(states)))
        object.__setattr__(self, "transitions", frozenset(transitions))
        object.__setattr__(self, "initial", initial)
        colour = dict(colour)
        object.__setattr__(self, "colour", tuple((q, colour[q]) for q in self.states))
        succ = {}
        for q, a, r in self.transitions:
            succ.setdefault((q, a), []).append(r)
        for q in self.states:
            for a in self.alphabet:
                if len(succ.get((q, a), ())) != 1:
                    raise AutomatonError(f"not deterministic and total at {(q, a)!r}")
        if initial not in self.states:
            raise AutomatonError("initial state is not a state")

    @cached_property
    def _step(self) -> dict:
        return {(q, a): r for q, a, r in self.transitions}

    def step(self, q, a):
        return self._step[(q, a)]

    def c(self, q) -> int:
        return dict(self.colour)[q]


def embed(a: DBA) -> NBA:
    return NBA(a.alphabet, a.states, a.transitions, a.initial, a.finals)


def _check_word(alphabet, w: LassoWord):
    bad = w.symbols() - set(alphabet)
    if bad:
        raise AlphabetError(f"symbols outside the alphabet: {sorted(map(str, bad))}")


# ------------------------------------------------------------ graph helpers

def _sccs(nodes: Iterable, succ) -> list:
    """Strongly connected components (iterative Tarjan)."""
    index, low, on, stack, out = {}, {}, set(), [], []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def _reach(starts: Iterable, succ) -> dict:
    """BFS; maps each reached node to its predecessor (None for starts)."""
    parent = {}
    dq = deque()
    for s in starts:
        if s not in parent:
            parent[s] = None
            dq.append(s)
    while dq:
        v = dq.popleft()
        for w in succ(v):
            if w not in parent:
                parent[w] = v
                dq.append(w)
    return parent


def _has_final_cycle(starts, succ, is_final) -> bool:
    reached = _reach(starts, succ)
    for comp in _sccs(list(reached), lambda v: [w for w in succ(v) if w in reached]):
        if len(comp) == 1:
            v = comp[0]
            if v not in succ(v):
                continue
        if any(is_final(v) for v in comp):
            return True
    return False


# ------------------------------------------------------- lasso membership

def _after_spoke(a, u) -> set:
    cur = {a.initial}
    for sym in u:
        cur = {r for q in cur for r in a.successors(q, sym)}
    return cur


def nba_accepts_lasso(a, w: LassoWord) -> bool:
    """Does some run of ``a`` on u.v^omega visit final states infinitely often?

    Works for any object exposing ``alphabet``, ``initial``, ``finals`` and
    ``successors(q, sym)``.  Runs are cut at the loop boundaries: an edge
    p -> r means r is reachable from p by reading v once, and it is marked
    when some such run enters a final state.  The word is accepted iff a
    marked edge lies on a cycle reachable from the states after u.
    """
    _check_word(a.alphabet, w)
    v = w.loop
    post = {}

    def edges(p):
        got = post.get(p)
        if got is None:
            cur = {p: False}
            for sym in v:
                nxt = {}
                for q, seen in cur.items():
                    for r in a.successors(q, sym):
                        mark = seen or r in a.finals
                        if not nxt.get(r, False):
                            nxt[r] = mark
                cur = nxt
            got = post[p] = cur
        return got

    reached = _reach(_after_spoke(a, w.spoke), lambda p: edges(p).keys())
    comp_of = {}
    for i, comp in enumerate(_sccs(list(reached), lambda p: edges(p).keys())):
        for p in comp:
            comp_of[p] = i
    return any(mark and comp_of[p] == comp_of[r]
               for p in reached for r, mark in edges(p).items())


def _det_cycle(a, w: LassoWord) -> list:
    """States of the eventual cycle of a deterministic run on w."""
    _check_word(a.alphabet, w)
    q = a.initial
    for sym in w.spoke:
        q = a.step(q, sym)
    v, seen, trail, i = w.loop, {}, [], 0
    while (q, i) not in seen:
        seen[(q, i)] = len(trail)
        trail.append(q)
        q = a.step(q, v[i])
        i = (i + 1) % len(v)
    return trail[seen[(q, i)]:]


def dba_accepts_lasso(a: DBA, w: LassoWord) -> bool:
    return any(q in a.finals for q in _det_cycle(a, w))


def dra_accepts_lasso(a: DRA, w: LassoWord) -> bool:
    cyc = _det_cycle(a, w)
    return min(a.c(q) for q in cyc) % 2 == 0


def dra_accepts_lasso_negative(a: DRA, w: LassoWord) -> bool:
    """Acceptance in the form: every state seen infinitely often whose colour
    is eventually a lower bound has an even colour."""
    cyc = _det_cycle(a, w)
    inf_states = set(cyc)
    for q in a.states:
        if q in inf_states and all(a.c(r) >= a.c(q) for r in cyc):
            if a.c(q) % 2:
                return False
    return True


# ------------------------------------------------------------ constructions

def union(a1: NBA, a2: NBA) -> NBA:
    """Disjoint union with a fresh, non-final initial state."""
    if set(a1.alphabet) != set(a2.alphabet):
        raise AlphabetError("union needs equal alphabets")
    init = ("init",)
    states = [init] + [(1, q) for q in a1.states] + [(2, q) for q in a2.states]
    trans = set()
    for tag, a in ((1, a1), (2, a2)):
        for q, s, r in a.transitions:
            trans.add(((tag, q), s, (tag, r)))
            if q == a.initial:
                trans.add((init, s, (tag, r)))
    finals = [(1, q) for q in a1.finals] + [(2, q) for q in a2.finals]
    return NBA(a1.alphabet, states, trans, init, finals)


def dba_complement(a: DBA) -> NBA:
    if not isinstance(a, DBA):
        raise AutomatonError("dba_complement needs a deterministic, total automaton")
    nonfinal = [q for q in a.states if q not in a.finals]
    states = [(q, 0) for q in a.states] + [(q, 1) for q in nonfinal]
    trans = set()
    for q, s, r in a.transitions:
        trans.add(((q, 0), s, (r, 0)))
        if r not in a.finals:
            trans.add(((q, 0), s, (r, 1)))
            if q not in a.finals:
                trans.add(((q, 1), s, (r, 1)))
    return NBA(a.alphabet, states, trans, (a.initial, 0), [(q, 1) for q in nonfinal])


# -------------------------------------------------------- transition matrices

@dataclass(frozen=True)
class TransitionMatrix:
    states: tuple
    reach: tuple
    fin: tuple

    def entry(self, q, r):
        i, j = self.states.index(q), self.states.index(r)
        if not (self.reach[i] >> j) & 1:
            return 0
        return INF if (self.fin[i] >> j) & 1 else 1

    @property
    def entries(self) -> dict:
        return {(q, r): self.entry(q, r) for q in self.states for r in self.states}

    def __matmul__(self, other: "TransitionMatrix") -> "TransitionMatrix":
        return matrix_product(self, other)


def identity_matrix(states: tuple) -> TransitionMatrix:
    n = len(states)
    return TransitionMatrix(tuple(states), tuple(1 << i for i in range(n)), (0,) * n)


def letter_matrix(a, sym) -> TransitionMatrix:
    idx = {q: i for i, q in enumerate(a.states)}
    reach = [0] * len(a.states)
    fin = [0] * len(a.states)
    for q in a.states:
        i = idx[q]
        for r in a.successors(q, sym):
            reach[i] |= 1 << idx[r]
            if r in a.finals:
                fin[i] |= 1 << idx[r]
    return TransitionMatrix(tuple(a.states), tuple(reach), tuple(fin))


def _mul_rows(reach, fin, breach, bfin):
    out_r, out_f = [], []
    for r, f in zip(reach, fin):
        acc_r = acc_f = 0
        x = r
        while x:
            low = x & -x
            p = low.bit_length() - 1
            x ^= low
            acc_r |= breach[p]
            acc_f |= bfin[p]
            if (f >> p) & 1:
                acc_f |= breach[p]
        out_r.append(acc_r)
        out_f.append(acc_f)
    return tuple(out_r), tuple(out_f)


def matrix_product(m1: TransitionMatrix, m2: TransitionMatrix) -> TransitionMatrix:
    """(m1 m2)(q, r) = max_p m1(q, p) * m2(p, r) over {0, 1, inf}, 0 absorbing."""
    r, f = _mul_rows(m1.reach, m1.fin, m2.reach, m2.fin)
    return TransitionMatrix(m1.states, r, f)


def transition_matrix(a, word: Iterable) -> TransitionMatrix:
    m = identity_matrix(tuple(a.states))
    for sym in word:
        m = matrix_product(m, letter_matrix(a, sym))
    return m


class Semigroup:
    """The closure of the letter matrices under product, with witness words.

    Elements are numbered in discovery order; ``mul[i][k]`` is the index of
    element i times the matrix of letter k.
    """

    def __init__(self, a, limit: Optional[int] = None):
        self.automaton = a
        self.letters = tuple(a.alphabet)
        lm = [letter_matrix(a, s) for s in self.letters]
        self.elements, self.witness, self.index, self.mul = [], [], {}, []
        dq = deque()
        for k, m in enumerate(lm):
            if m not in self.index:
                self._add(m, (self.letters[k],))
                dq.append(self.index[m])
        while dq:
            i = dq.popleft()
            row = []
            for k, m in enumerate(lm):
                p = matrix_product(self.elements[i], m)
                if p not in self.index:
                    if limit is not None and len(self.elements) >= limit:
                        raise OverflowError(f"semigroup closure exceeds {limit} elements")
                    self._add(p, self.witness[i] + (self.letters[k],))
                    dq.append(self.index[p])
                row.append(self.index[p])
            self.mul.append(row)
        # rows were appended in discovery order because BFS pops in that order
        self.letter_index = {s: self.index[m] for s, m in zip(self.letters, lm)}

    def _add(self, m, word):
        self.index[m] = len(self.elements)
        self.elements.append(m)
        self.witness.append(word)

    def times_letter(self, i: int, sym) -> int:
        return self.mul[i][self.letters.index(sym)]

    def __len__(self):
        return len(self.elements)


def semigroup_closure(a) -> dict:
    """Matrices of all nonempty words, each with a witness word."""
    sg = Semigroup(a)
    return dict(zip(sg.elements, sg.witness))


def is_rejecting_pair(a, beta: TransitionMatrix, gamma: TransitionMatrix) -> bool:
    if matrix_product(beta, gamma) != beta or matrix_product(gamma, gamma) != gamma:
        return False
    i0 = list(a.states).index(a.initial)
    row = beta.reach[i0]
    for q in range(len(a.states)):
        if (row >> q) & 1 and (gamma.fin[q] >> q) & 1:
            return False
    return True


def _rejecting_row(sg: Semigroup, i0: int, row: int, g: int) -> bool:
    """Clause 3 for a beta whose initial row is ``row``."""
    gamma = sg.elements[g]
    x = row
    while x:
        low = x & -x
        q = low.bit_length() - 1
        x ^= low
        if (gamma.fin[q] >> q) & 1:
            return False
    return True


class RamseyComplement:
    """The complement NBA guessing a rejecting Ramseyan factorisation.

    States: ``("q0",)``, ``("pre", b, g, z)``, ``("loop", g)`` and
    ``("mid", g, z)`` where b, g, z index elements of the semigroup closure.
    Transitions are generated on demand; ``materialize`` builds the
    reachable part as an explicit NBA.
    """

    def __init__(self, a: NBA):
        self.source = a
        self.sg = sg = Semigroup(a)
        self.alphabet = a.alphabet
        self.initial = ("q0",)
        i0 = list(a.states).index(a.initial)
        idem = [g for g in range(len(sg)) if sg.index[matrix_product(sg.elements[g], sg.elements[g])] == g]
        self.idempotents = idem
        pairs = []
        for b, beta in enumerate(sg.elements):
            for g in idem:
                if sg.index.get(matrix_product(beta, sg.elements[g])) == b and \
                        _rejecting_row(sg, i0, beta.reach[i0], g):
                    pairs.append((b, g))
        self.pairs = pairs
        self._by_beta = {}
        for b, g in pairs:
            self._by_beta.setdefault(b, []).append(g)

    @property
    def finals(self):
        return _LoopStates()

    def matrix(self, i: int) -> TransitionMatrix:
        return self.sg.elements[i]

    def successors(self, q, sym) -> list:
        sg = self.sg
        d = sg.letter_index[sym]
        kind = q[0]
        if kind == "q0":
            return [("pre", b, g, d) for b, g in self.pairs]
        if kind == "pre":
            _, b, g, z = q
            nz = sg.times_letter(z, sym)
            out = [("pre", b, g, nz)]
            if nz == b:
                out.append(("loop", g))
            return out
        if kind == "loop":
            g = q[1]
            out = [("mid", g, d)]
            if d == g:
                out.append(("loop", g))
            return out
        _, g, z = q
        nz = sg.times_letter(z, sym)
        out = [("mid", g, nz)]
        if nz == g:
            out.append(("loop", g))
        return out

    def materialize(self) -> NBA:
        parent = _reach([self.initial],
                        lambda q: [r for s in self.alphabet for r in self.successors(q, s)])
        states = sorted(parent, key=repr)
        trans = {(q, s, r) for q in states for s in self.alphabet for r in self.successors(q, s)}
        finals = [q for q in states if q[0] == "loop"]
        return NBA(self.alphabet, [self.initial] + [q for q in states if q != self.initial],
                   trans, self.initial, finals)


class _LoopStates:
    def __contains__(self, q):
        return q[0] == "loop"


def nba_complement(a: NBA) -> RamseyComplement:
    """Complement of an NBA by the Ramsey construction (transitions on demand)."""
    return RamseyComplement(a)


def ramsey_factorize_lasso(a, w: LassoWord):
    """(beta, gamma, i0, stride) with delta(w[0,i)) = beta and delta(w[i,j)) = gamma
    for all i < j in the progression i0 + stride*m."""
    _check_word(a.alphabet, w)
    m = transition_matrix(a, w.loop)
    power, k = m, 1
    while matrix_product(power, power) != power:
        power = matrix_product(power, m)
        k += 1
        if k > 3 ** (len(a.states) ** 2) + 1:  # pragma: no cover - finiteness
            raise InvariantBreach("no idempotent power found")
    gamma = power
    beta = matrix_product(transition_matrix(a, w.spoke), gamma)
    return beta, gamma, len(w.spoke) + k * len(w.loop), k * len(w.loop)


# ------------------------------------------------------------------ emptiness

def empty(a) -> tuple:
    """(True, None) if L(a) is empty, else (False, witness lasso)."""
    succ = lambda q: [(s, r) for s in a.alphabet for r in a.successors(q, s)]
    parent = _reach([a.initial], lambda q: [r for _, r in succ(q)])
    reached = set(parent)
    for f in sorted((q for q in reached if q in a.finals), key=repr):
        # shortest cycle through f
        back = {}
        dq = deque()
        for s, r in succ(f):
            if r not in back:
                back[r] = (f, s)
                dq.append(r)
        while dq and f not in back or (dq and f not in back):
            v = dq.popleft()
            for s, r in succ(v):
                if r not in back:
                    back[r] = (v, s)
                    dq.append(r)
        if f not in back:
            continue
        loop, v = [], f
        while True:
            p, s = back[v]
            loop.append(s)
            v = p
            if v == f:
                break
        loop.reverse()
        spoke = _path_word(a, parent, f)
        w = LassoWord(spoke, loop)
        return False, w
    return True, None


def _path_word(a, parent, target) -> list:
    """Letters along the BFS tree path from the initial state to target."""
    path = [target]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()
    word = []
    for q, r in zip(path, path[1:]):
        word.append(next(s for s in a.alphabet if r in a.successors(q, s)))
    return word


# ------------------------------------------------------------------ inclusion

def _complement_witness(a) -> Optional[LassoWord]:
    """A word outside L(a), read off a rejecting pair of the closure, or None."""
    sg = Semigroup(a)
    i0 = list(a.states).index(a.initial)
    rows = {}
    for i, m in enumerate(sg.elements):
        rows.setdefault(m.reach[i0], i)
    for g, gamma in enumerate(sg.elements):
        if matrix_product(gamma, gamma) != gamma:
            continue
        for row, i in sorted(rows.items()):
            prow, _ = _mul_rows((row,), (0,), gamma.reach, gamma.fin)
            if _rejecting_row(sg, i0, prow[0], g):
                return LassoWord(sg.witness[i] + sg.witness[g], sg.witness[g])
    return None


def _live_states(a: DBA) -> set:
    """States from which some run visits a final state infinitely often."""
    succ = {q: {a.step(q, s) for s in a.alphabet} for q in a.states}
    good = set()
    for comp in _sccs(list(a.states), lambda q: succ[q]):
        if (len(comp) > 1 or comp[0] in succ[comp[0]]) and any(q in a.finals for q in comp):
            good |= set(comp)
    pred = {}
    for q, rs in succ.items():
        for r in rs:
            pred.setdefault(r, set()).add(q)
    return set(_reach(good, lambda q: pred.get(q, ())))


def _word(parent: dict, key) -> tuple:
    out = []
    while parent[key] is not None:
        key, sym = parent[key]
        out.append(sym)
    return tuple(reversed(out))


def _inclusion_witness(a1: DBA, a2) -> Optional[LassoWord]:
    """A lasso accepted by a1 and rejected by a2, or None.

    Only words that keep a1 inside its live states matter, so the closure
    is taken over triples (a1 state reached, final seen, a2 matrix) per
    loop start instead of over all a2 matrices.
    """
    live = _live_states(a1)
    if a1.initial not in live:
        return None
    lm = {s: letter_matrix(a2, s) for s in a1.alphabet}
    moves = {q: [(s, a1.step(q, s)) for s in a1.alphabet if a1.step(q, s) in live] for q in live}
    i0 = list(a2.states).index(a2.initial)

    # rows of a2 reachable from its initial state, per a1 state
    start = (a1.initial, 1 << i0)
    pre = {start: None}
    dq = deque([start])
    while dq:
        q, row = key = dq.popleft()
        for s, q2 in moves[q]:
            m = lm[s]
            (r2,), _ = _mul_rows((row,), (0,), m.reach, m.fin)
            nk = (q2, r2)
            if nk not in pre:
                pre[nk] = (key, s)
                dq.append(nk)
    rows = {}
    for q, row in pre:
        rows.setdefault(q, []).append(row)

    for m0 in sorted(rows, key=repr):
        # par maps each element to (previous element or None, last letter)
        par = {}
        dq = deque()
        for s, q2 in moves[m0]:
            k = (q2, q2 in a1.finals, lm[s])
            if k not in par:
                par[k] = (None, s)
                dq.append(k)
        while dq:
            key = dq.popleft()
            q, seen, g = key
            for s, q2 in moves[q]:
                nk = (q2, seen or q2 in a1.finals, matrix_product(g, lm[s]))
                if nk not in par:
                    par[nk] = (key, s)
                    dq.append(nk)
        for key in par:
            q, seen, g = key
            if q != m0 or not seen or matrix_product(g, g) != g:
                continue
            for row in rows[m0]:
                (prow,), _ = _mul_rows((row,), (0,), g.reach, g.fin)
                if all(not (g.fin[p] >> p) & 1 for p in range(len(g.states)) if (prow >> p) & 1):
                    loop = []
                    k = key
                    while k is not None:
                        k, sym = par[k]
                        loop.append(sym)
                    return LassoWord(_word(pre, (m0, row)), tuple(reversed(loop)))
    return None


def includes(a1: DBA, a2) -> tuple:
    """Decide whether L(a1) is contained in L(a2).

    Returns (True, None) or (False, certified counterexample).
    """
    if not isinstance(a1, DBA):
        raise AutomatonError("includes needs a DBA on the left")
    if set(a1.alphabet) != set(a2.alphabet):
        raise AlphabetError("includes needs equal alphabets")
    w = _inclusion_witness(a1, a2)
    if w is None:
        return True, None
    return False, _certify(a1, a2, w)


def includes_via_complement(a1: DBA, a2) -> tuple:
    """The same decision through emptiness of the complement of (a1^c union a2)."""
    if set(a1.alphabet) != set(a2.alphabet):
        raise AlphabetError("includes needs equal alphabets")
    u = union(dba_complement(a1), a2)
    w = _complement_witness(u)
    if w is None:
        return True, None
    return False, _certify(a1, a2, w)


def _certify(a1, a2, w):
    w = shrink_counterexample(w, lambda x: dba_accepts_lasso(a1, x) and not nba_accepts_lasso(a2, x))
    if not dba_accepts_lasso(a1, w) or nba_accepts_lasso(a2, w):
        raise InvariantBreach("inclusion counterexample failed certification")
    return w


def shrink_counterexample(w: LassoWord, good) -> LassoWord:
    """Drop repeated loop blocks and shorten the spoke while ``good`` holds."""
    if not good(w):
        return w
    changed = True
    while changed:
        changed = False
        v = w.loop
        for d in range(1, len(v)):
            if len(v) % d == 0 and v[:d] * (len(v) // d) == v:
                cand = LassoWord(w.spoke, v[:d])
                if good(cand):
                    w, changed = cand, True
                    break
        if changed:
            continue
        u = w.spoke
        # a spoke ending with the loop's last letter can be rotated into the loop
        if u and u[-1] == w.loop[-1]:
            cand = LassoWord(u[:-1], (u[-1],) + w.loop[:-1])
            if good(cand):
                w, changed = cand, True
                continue
        for cut in range(len(u)):
            cand = LassoWord(u[:cut], w.loop)
            if good(cand):
                w, changed = cand, True
                break
    return w


# --------------------------------------------------------------- ArAcc

def ar_acc_lasso(a, w: LassoWord) -> bool:
    """Some finite run on a prefix ends in a final state, and from that
    configuration a final-visiting cycle is reachable."""
    _check_word(a.alphabet, w)
    v, n = w.loop, len(w.loop)
    # configurations while still on the spoke are (state, -k-1) markers
    cfgs = [(a.initial, ("u", 0))]

    def succ(cfg):
        q, (where, i) = cfg
        if where == "u":
            sym = w.spoke[i] if i < len(w.spoke) else None
            if sym is None:
                return []
            nxt = ("u", i + 1) if i + 1 < len(w.spoke) else ("v", 0)
            return [(r, nxt) for r in a.successors(q, sym)]
        j = (i + 1) % n
        return [(r, ("v", j)) for r in a.successors(q, v[i])]

    def norm(cfg):
        q, (where, i) = cfg
        if where == "u" and i == len(w.spoke):
            return (q, ("v", 0))
        return cfg

    start = norm(cfgs[0])
    reached = _reach([start], lambda c: [norm(x) for x in succ(c)])
    # only configurations entered after at least one letter count as run ends
    ends = [c for c in reached if c[0] in a.finals and c != start or
            (c == start and c[0] in a.finals and _returns(start, succ, norm))]
    for c in ends:
        if _has_final_cycle([c], lambda x: [norm(y) for y in succ(x)],
                            lambda x: x[0] in a.finals):
            return True
    return False


def _returns(start, succ, norm) -> bool:
    seen = _reach([norm(x) for x in succ(start)], lambda c: [norm(y) for y in succ(c)])
    return start in seen


# -------------------------------------------------------------- universality

def dra_universal(a: DRA) -> bool:
    """Every simple loop about a reachable odd-coloured state q contains an
    even colour below c(q)."""
    succ = {q: sorted({a.step(q, s) for s in a.alphabet}, key=repr) for q in a.states}
    reachable = _reach([a.initial], lambda q: succ[q])
    for q in a.states:
        if q not in reachable or a.c(q) % 2 == 0:
            continue
        cq = a.c(q)
        good = lambda r: a.c(r) % 2 == 0 and a.c(r) < cq

        # DFS over simple paths from q avoiding "good" states
        stack = [(q, frozenset())]
        while stack:
            v, visited = stack.pop()
            for r in succ[v]:
                if good(r):
                    continue
                if r == q:
                    return False
                if r not in visited:
                    stack.append((r, visited | {r}))
    return True
