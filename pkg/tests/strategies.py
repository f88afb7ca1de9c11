"""Hypothesis strategies shared by the test modules."""
import functools

from hypothesis import strategies as st

from cyclarith.automata import DBA, NBA, LassoWord
from cyclarith.syntax import (
    EQ, LT, ZERO, All, And, Atom, BAll, BEx, Ex, NAtom, Or, Plus, Succ, Times, Var, apply_subst,
)

NAMES = ("x", "y", "z")
ALPHABET = ("a", "b")


@functools.lru_cache(maxsize=None)
def terms(names=NAMES):
    leaves = st.one_of(st.just(ZERO), st.sampled_from(names).map(Var))
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            sub.map(Succ),
            st.builds(Plus, sub, sub),
            st.builds(Times, sub, sub),
        ),
        max_leaves=3,
    )


def _atoms(names):
    return st.builds(
        lambda kind, pred, s, t: kind(pred, (s, t)),
        st.sampled_from([Atom, NAtom]), st.sampled_from([EQ, LT]), terms(names), terms(names),
    )


def _bounded(names):
    """A bounded quantifier whose bound avoids its own variable."""
    def make(q, v, body, bound):
        return q(v, apply_subst({v: ZERO}, bound), body)
    return lambda sub: st.builds(
        make, st.sampled_from([BEx, BAll]), st.sampled_from(names), sub, terms(names))


@functools.lru_cache(maxsize=None)
def formulas(names=NAMES, bounded_only=False):
    def extend(sub):
        parts = [
            st.builds(And, sub, sub),
            st.builds(Or, sub, sub),
            _bounded(names)(sub),
        ]
        if not bounded_only:
            parts.append(st.builds(lambda q, v, b: q(v, b),
                                   st.sampled_from([Ex, All]), st.sampled_from(names), sub))
        return st.one_of(parts)
    return st.recursive(_atoms(names), extend, max_leaves=6)


def substitutions(names=NAMES):
    return st.dictionaries(st.sampled_from(names), terms(names), max_size=2)


def lassos(alphabet=ALPHABET, max_spoke=3, max_loop=4):
    return st.builds(
        LassoWord,
        st.lists(st.sampled_from(alphabet), max_size=max_spoke).map(tuple),
        st.lists(st.sampled_from(alphabet), min_size=1, max_size=max_loop).map(tuple),
    )


@st.composite
def nbas(draw, max_states=3, alphabet=ALPHABET):
    n = draw(st.integers(1, max_states))
    states = [f"q{i}" for i in range(n)]
    triples = [(p, s, q) for p in states for s in alphabet for q in states]
    trans = draw(st.sets(st.sampled_from(triples), max_size=len(triples)))
    finals = draw(st.sets(st.sampled_from(states)))
    return NBA(alphabet, states, trans, states[0], finals)


@st.composite
def dbas(draw, max_states=4, alphabet=ALPHABET):
    n = draw(st.integers(1, max_states))
    states = [f"q{i}" for i in range(n)]
    trans = {(p, s, draw(st.sampled_from(states))) for p in states for s in alphabet}
    finals = draw(st.sets(st.sampled_from(states)))
    return DBA(alphabet, states, trans, states[0], finals)
