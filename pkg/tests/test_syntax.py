"""Terms, formulas, duality, substitution and the hierarchy."""
import pytest
from hypothesis import given, settings

from cyclarith.syntax import (
    DELTA0, EQ, ZERO, All, And, App, Atom, BAll, Ex, Or, Plus, Signature,
    SignatureError, Succ, Var, apply_subst, classify, dual, eq, free_vars, is_in_level, lt,
    merge_forall_block, neq, nlt, pi, sigma,
)
from strategies import formulas, substitutions

x, y, t = Var("x"), Var("y"), Var("t")


def A(v):
    return Atom("A", (Var(v),))


def B(v):
    return Atom("B", (Var(v),))


def test_dual_and():
    """The dual of a conjunction is the disjunction of the duals."""
    a, b = eq(x, y), lt(x, y)
    assert dual(And(a, b)) == Or(dual(a), dual(b))


def test_dual_negated_atom():
    assert dual(neq(x, y)) == Atom(EQ, (x, y))


def test_dual_forall():
    assert dual(All("x", lt(x, y))) == Ex("x", nlt(x, y))


def test_classify_examples():
    assert classify(BAll("x", t, eq(x, x))) == DELTA0
    assert classify(Ex("x", eq(x, x))) == sigma(1)
    assert classify(All("y", Ex("x", eq(x, y)))) == pi(2)


def test_subst_examples():
    assert apply_subst({"x": ZERO}, lt(x, y)) == lt(ZERO, y)
    phi = Ex("x", eq(x, y))
    assert apply_subst({}, phi) == phi


def test_subst_avoids_capture():
    """Substituting x for y under a binder on x renames the binder."""
    got = apply_subst({"y": x}, Ex("x", eq(x, y)))
    assert got == Ex("x'", eq(Var("x'"), x))


def test_free_vars_examples():
    assert free_vars(Ex("x", lt(x, y))) == {"y"}
    assert free_vars(ZERO) == frozenset()
    assert free_vars(Plus(x, Succ(x))) == {"x"}


def test_merge_forall_block_examples():
    assert merge_forall_block(All("x", A("x")), All("y", B("y"))) == \
        All("x", All("y", And(A("x"), B("y"))))
    xp = "x'"
    assert merge_forall_block(All("x", A("x")), All("x", B("x"))) == \
        All("x", All(xp, And(A("x"), B(xp))))
    assert merge_forall_block(A("x"), B("y")) == And(A("x"), B("y"))


def test_signature_rejects_base_redeclaration():
    with pytest.raises(SignatureError):
        Signature(functions={"succ": 1})
    with pytest.raises(SignatureError):
        Signature(predicates={EQ: 2})


def test_signature_checks_arity():
    sig = Signature(functions={"f": 1})
    sig.check_term(App("f", (x,)))
    with pytest.raises(SignatureError):
        sig.check_term(App("f", (x, y)))
    with pytest.raises(SignatureError):
        sig.check_formula(Atom("P", (x,)))


@given(formulas())
def test_dual_is_involution(phi):
    assert dual(dual(phi)) == phi


@given(formulas())
def test_dual_swaps_levels(phi):
    """Dualising exchanges the sigma and pi classes and keeps bounded formulas bounded."""
    lvl, dlvl = classify(phi), classify(dual(phi))
    assert dlvl.level == lvl.level
    swap = {"delta0": "delta0", "sigma": "pi", "pi": "sigma"}
    assert dlvl.kind == swap[lvl.kind]


@given(substitutions(), formulas())
def test_subst_commutes_with_dual(theta, phi):
    assert apply_subst(theta, dual(phi)) == dual(apply_subst(theta, phi))


@given(formulas())
def test_level_monotone(phi):
    for n in range(4):
        if is_in_level(phi, sigma(n)):
            assert is_in_level(phi, sigma(n + 1))
            assert is_in_level(phi, pi(n + 1))
        if is_in_level(phi, pi(n)):
            assert is_in_level(phi, pi(n + 1))
            assert is_in_level(phi, sigma(n + 1))


@given(formulas())
def test_classify_is_least(phi):
    lvl = classify(phi)
    assert is_in_level(phi, lvl)
    if lvl.level > 0:
        assert not is_in_level(phi, sigma(lvl.level - 1))
        assert not is_in_level(phi, pi(lvl.level - 1))


@settings(max_examples=200)
@given(substitutions(), formulas())
def test_subst_free_vars(theta, phi):
    """Free variables after substitution come from the image or the untouched part."""
    out = free_vars(apply_subst(theta, phi))
    fv = free_vars(phi)
    expect = set(fv - set(theta))
    for v in fv & set(theta):
        expect |= free_vars(theta[v])
    assert out == expect
