"""Lasso semantics, the constructions, and their agreement with the unrolling oracle."""

import pytest
from hypothesis import given, settings, strategies as st

from cyclarith.automata import (
    DBA, DRA, INF, NBA, AlphabetError, AutomatonError, LassoWord, ar_acc_lasso, dba_accepts_lasso,
    dba_complement, dra_accepts_lasso, dra_accepts_lasso_negative, dra_universal, embed, empty,
    includes, includes_via_complement, is_rejecting_pair, letter_matrix, matrix_product,
    nba_accepts_lasso, nba_complement, ramsey_factorize_lasso, semigroup_closure,
    transition_matrix, union,
)
from cyclarith.oracles import accepts_by_unrolling, all_lassos, dra_run_accepts, matrix_entries
from strategies import ALPHABET, dbas, lassos, nbas

AB = ("a", "b")


def loop_a(final=True):
    return NBA(("a",), ["q"], {("q", "a", "q")}, "q", ["q"] if final else [])


def universal_nba():
    return NBA(AB, ["q"], {("q", s, "q") for s in AB}, "q", ["q"])


def universal_dba(final=True):
    return DBA(AB, ["q"], {("q", s, "q") for s in AB}, "q", ["q"] if final else [])


def empty_nba():
    return NBA(AB, ["q"], set(), "q", [])


def short_lassos(alphabet=AB, n=3):
    return list(all_lassos(alphabet, n, n))


def _entries(m):
    return {k: ("inf" if v == INF else v) for k, v in m.entries.items()}


# ------------------------------------------------------------ acceptance

def test_accepts_final_self_loop():
    assert nba_accepts_lasso(loop_a(), LassoWord((), ("a",)))


def test_run_dies_without_transition():
    a = NBA(AB, ["q"], {("q", "a", "q")}, "q", ["q"])
    assert not nba_accepts_lasso(a, LassoWord((), ("b",)))
    assert not nba_accepts_lasso(a, LassoWord(("a",), ("a", "b")))


def test_alphabet_mismatch():
    with pytest.raises(AlphabetError):
        nba_accepts_lasso(loop_a(), LassoWord((), ("c",)))


def test_empty_loop_rejected():
    with pytest.raises(ValueError):
        LassoWord(("a",), ())


def test_dba_must_be_total():
    with pytest.raises(AutomatonError):
        DBA(AB, ["q"], {("q", "a", "q")}, "q", [])


def test_dba_all_final_accepts_everything():
    a = universal_dba()
    assert all(dba_accepts_lasso(a, w) for w in short_lassos())


def test_dra_odd_single_state_rejects_everything():
    a = DRA(AB, ["q"], {("q", s, "q") for s in AB}, "q", {"q": 1})
    assert not any(dra_accepts_lasso(a, w) for w in short_lassos())


@settings(max_examples=200)
@given(nbas(), lassos())
def test_nba_acceptance_matches_unrolling(a, w):
    assert nba_accepts_lasso(a, w) == accepts_by_unrolling(a, w)


@settings(max_examples=200)
@given(dbas(), lassos())
def test_dba_acceptance_matches_nba_reading(a, w):
    assert dba_accepts_lasso(a, w) == nba_accepts_lasso(a, w)


@st.composite
def dras(draw, max_states=4):
    n = draw(st.integers(1, max_states))
    states = [f"q{i}" for i in range(n)]
    trans = {(p, s, draw(st.sampled_from(states))) for p in states for s in AB}
    colour = {q: draw(st.integers(0, 3)) for q in states}
    return DRA(AB, states, trans, states[0], colour)


@settings(max_examples=200)
@given(dras(), lassos())
def test_dra_two_formulations_agree(a, w):
    """Least colour seen infinitely often is even, read both ways, and by a plain run."""
    got = dra_accepts_lasso(a, w)
    assert got == dra_accepts_lasso_negative(a, w) == dra_run_accepts(a, w)


# ----------------------------------------------------------------- union

def test_union_with_itself():
    a = NBA(AB, ["p", "q"], {("p", "a", "q"), ("q", "b", "p"), ("q", "a", "q")}, "p", ["q"])
    u = union(a, a)
    assert all(nba_accepts_lasso(u, w) == nba_accepts_lasso(a, w) for w in short_lassos())


def test_union_with_empty():
    a = universal_nba()
    u = union(a, empty_nba())
    assert all(nba_accepts_lasso(u, w) == nba_accepts_lasso(a, w) for w in short_lassos())


def test_union_alphabet_mismatch():
    with pytest.raises(AlphabetError):
        union(loop_a(), universal_nba())


@settings(max_examples=100)
@given(nbas(), nbas(), lassos())
def test_union_is_disjunction(a1, a2, w):
    assert nba_accepts_lasso(union(a1, a2), w) == (accepts_by_unrolling(a1, w) or accepts_by_unrolling(a2, w))


# ----------------------------------------------------------- complements

def test_dba_complement_all_final():
    c = dba_complement(DBA(AB, ["q"], {("q", s, "q") for s in AB}, "q", ["q"]))
    assert len(c.states) == 1 and not c.finals
    assert empty(c) == (True, None)


def test_dba_complement_no_finals():
    c = dba_complement(universal_dba(final=False))
    assert all(nba_accepts_lasso(c, w) for w in short_lassos())


def test_dba_complement_rejects_nba():
    with pytest.raises(AutomatonError):
        dba_complement(universal_nba())


@settings(max_examples=150)
@given(dbas(max_states=6))
def test_dba_complement_exact(a):
    """Membership in the complement is the negation, and the state count is 2|Q| - |F|."""
    c = dba_complement(a)
    assert len(c.states) == 2 * len(a.states) - len(a.finals)
    for w in short_lassos(n=2):
        assert nba_accepts_lasso(c, w) != accepts_by_unrolling(a, w)


def test_ramsey_complement_of_universal_is_empty():
    c = nba_complement(universal_nba()).materialize()
    assert not any(nba_accepts_lasso(c, w) for w in short_lassos())


def test_ramsey_complement_without_finals_is_universal():
    a = NBA(AB, ["p", "q"], {("p", "a", "q"), ("q", "b", "p")}, "p", [])
    c = nba_complement(a).materialize()
    assert all(nba_accepts_lasso(c, w) for w in short_lassos())


@settings(max_examples=60, deadline=None)
@given(nbas(max_states=3))
def test_ramsey_complement_exact(a):
    comp = nba_complement(a)
    full = comp.materialize()
    for w in short_lassos(n=2):
        expect = not accepts_by_unrolling(a, w)
        assert nba_accepts_lasso(comp, w) == expect
        assert nba_accepts_lasso(full, w) == expect


# -------------------------------------------------------------- matrices

def test_letter_matrix_final_self_loop():
    a = loop_a()
    assert letter_matrix(a, "a").entry("q", "q") == INF


def test_zero_row_absorbs():
    a = NBA(AB, ["p", "q"], {("q", "a", "p"), ("q", "b", "q"), ("p", "b", "q")}, "p", ["q"])
    m = letter_matrix(a, "a")  # row p is all zero
    for word in ["a", "b", "ab", "ba"]:
        prod = matrix_product(m, transition_matrix(a, word))
        assert all(prod.entry("p", r) == 0 for r in a.states)


def test_empty_word_is_identity():
    a = NBA(AB, ["p", "q"], {("p", "a", "q")}, "p", ["q"])
    m = transition_matrix(a, ())
    assert _entries(m) == {("p", "p"): 1, ("p", "q"): 0, ("q", "p"): 0, ("q", "q"): 1}


words = st.lists(st.sampled_from(ALPHABET), max_size=6)


@settings(max_examples=200)
@given(nbas(), words, words)
def test_matrix_homomorphism(a, s, t):
    ms, mt = transition_matrix(a, s), transition_matrix(a, t)
    assert transition_matrix(a, s + t) == matrix_product(ms, mt)
    if s:
        assert _entries(ms) == matrix_entries(a, s)


def test_closure_single_idempotent_letter():
    assert len(semigroup_closure(loop_a())) == 1


@settings(max_examples=50, deadline=None)
@given(nbas(max_states=3))
def test_closure_witnesses(a):
    """Each closure element is the matrix of its stored nonempty witness word."""
    closure = semigroup_closure(a)
    assert len(closure) <= 3 ** (len(a.states) ** 2)
    for m, w in closure.items():
        assert w and transition_matrix(a, w) == m


def test_rejecting_pair_needs_idempotent():
    a = NBA(AB, ["p", "q"], {("p", "a", "q"), ("q", "a", "p")}, "p", [])
    m = letter_matrix(a, "a")
    assert matrix_product(m, m) != m
    assert not is_rejecting_pair(a, m, m)


def test_rejecting_pair_zero_matrices():
    a = NBA(AB, ["p"], set(), "p", ["p"])
    z = letter_matrix(a, "a")
    assert is_rejecting_pair(a, z, z)


# ---------------------------------------------------------- factorisation

def test_factorise_idempotent_loop():
    a = loop_a()
    beta, gamma, i0, stride = ramsey_factorize_lasso(a, LassoWord((), ("a",)))
    assert gamma == letter_matrix(a, "a") and stride == 1 and i0 == 1


def test_factorise_empty_spoke():
    a = NBA(AB, ["p", "q"], {("p", "a", "q"), ("q", "b", "p"), ("q", "a", "p")}, "p", ["q"])
    beta, gamma, _, _ = ramsey_factorize_lasso(a, LassoWord((), ("a", "b")))
    assert beta == gamma


@settings(max_examples=200)
@given(nbas(), lassos())
def test_factorisation_sound(a, w):
    """The pair is a Ramseyan factorisation, and it rejects exactly the rejected words."""
    beta, gamma, i0, stride = ramsey_factorize_lasso(a, w)
    assert matrix_product(beta, gamma) == beta
    assert matrix_product(gamma, gamma) == gamma
    for m in range(3):
        i = i0 + stride * m
        assert transition_matrix(a, w.prefix(i)) == beta
        j = i + stride * (m + 1)
        assert transition_matrix(a, w.prefix(j)[i:]) == gamma
    assert is_rejecting_pair(a, beta, gamma) == (not accepts_by_unrolling(a, w))


# ------------------------------------------------------------ emptiness

def test_empty_without_finals():
    assert empty(NBA(AB, ["q"], {("q", "a", "q")}, "q", [])) == (True, None)


def test_empty_final_self_loop():
    assert empty(loop_a()) == (False, LassoWord((), ("a",)))


@settings(max_examples=200)
@given(nbas(max_states=4))
def test_empty_matches_bounded_search(a):
    n = len(a.states)
    is_empty, w = empty(a)
    found = any(accepts_by_unrolling(a, x) for x in all_lassos(a.alphabet, n - 1, n))
    assert is_empty == (not found)
    if w is not None:
        assert len(w.spoke) < n and len(w.loop) <= n
        assert nba_accepts_lasso(a, w)


# ------------------------------------------------------------ inclusion

def test_includes_reflexive():
    a = DBA(AB, ["p", "q"], {("p", "a", "q"), ("p", "b", "p"), ("q", "a", "p"), ("q", "b", "q")},
            "p", ["q"])
    assert includes(a, embed(a)) == (True, None)


def test_includes_universal_in_empty():
    ok, w = includes(universal_dba(), empty_nba())
    assert not ok and dba_accepts_lasso(universal_dba(), w) and not nba_accepts_lasso(empty_nba(), w)


def test_includes_needs_dba():
    with pytest.raises(AutomatonError):
        includes(universal_nba(), universal_nba())


@settings(max_examples=100, deadline=None)
@given(dbas(max_states=3), nbas(max_states=3))
def test_includes_two_routes(a1, a2):
    """The direct search and the complement route agree; negatives are certified,
    positives survive bounded lasso enumeration."""
    ok, w = includes(a1, a2)
    ok2, w2 = includes_via_complement(a1, a2)
    assert ok == ok2
    if ok:
        for x in short_lassos(n=3):
            assert not dba_accepts_lasso(a1, x) or accepts_by_unrolling(a2, x)
    else:
        for cex in (w, w2):
            assert dba_accepts_lasso(a1, cex) and not accepts_by_unrolling(a2, cex)


# --------------------------------------------------------------- ArAcc

def test_ar_acc_on_accepted_word():
    assert ar_acc_lasso(loop_a(), LassoWord((), ("a",)))


def test_ar_acc_unreachable_finals():
    a = NBA(AB, ["p", "q"], {("p", "a", "p"), ("q", "a", "q")}, "p", ["q"])
    assert not ar_acc_lasso(a, LassoWord((), ("a",)))


@settings(max_examples=200)
@given(nbas(), lassos())
def test_ar_acc_equivalent_on_lassos(a, w):
    assert ar_acc_lasso(a, w) == accepts_by_unrolling(a, w)


# ---------------------------------------------------------- universality

def test_universal_single_state():
    even = DRA(AB, ["q"], {("q", s, "q") for s in AB}, "q", {"q": 0})
    odd = DRA(AB, ["q"], {("q", s, "q") for s in AB}, "q", {"q": 1})
    assert dra_universal(even) and not dra_universal(odd)


@settings(max_examples=150, deadline=None)
@given(dras(max_states=5))
def test_universal_matches_lassos(a):
    n = len(a.states)
    assert dra_universal(a) == all(dra_run_accepts(a, w) for w in all_lassos(AB, n, n))
