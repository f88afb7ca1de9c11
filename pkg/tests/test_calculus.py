"""Local rule checking, axiom recognition and fragment validation."""
import pytest
from hypothesis import given, strategies as st

from cyclarith.calculus import (
    FiniteProof, FragmentError, ProofNode, Rule, Sequent, StepError, check_proof, check_step,
    is_q_axiom, validate_fragment,
)
from cyclarith.corpus import PHP_THEORY, SB, php
from cyclarith.cyclic import Bud
from cyclarith.syntax import (
    ZERO, All, And, BAll, BEx, Ex, Or, Plus, Succ, Times, Var, eq, lt, numeral,
)
from strategies import terms

a, b, x, y, t = (Var(n) for n in "abxyt")


def phi(v):
    return eq(Plus(ZERO, v), v)


def test_forall_right_eigenvariable_must_be_fresh():
    """The eigenvariable of all-right cannot be free in the conclusion."""
    conc = Sequent([eq(a, a)], [All("x", eq(x, a))])
    prem = Sequent([eq(a, a)], [eq(a, a)])
    with pytest.raises(StepError) as err:
        check_step(conc, Rule("all-right", formula=All("x", eq(x, a)), eigen="a"), [prem])
    assert err.value.kind == "eigenvariable-not-fresh"


def test_identity_substitution():
    s = Sequent([eq(x, y)], [lt(x, y)])
    check_step(s, Rule("sub", subst={}), [s])


def test_ind_step():
    gamma, delta = [eq(y, y)], [lt(y, y)]
    conc = Sequent(gamma, delta + [phi(t)])
    base = Sequent(gamma, delta + [phi(ZERO)])
    step = Sequent(gamma + [phi(a)], delta + [phi(Succ(a))])
    rule = Rule("ind", formula=phi(x), var="x", eigen="a", term=t)
    check_step(conc, rule, [base, step])
    with pytest.raises(StepError) as err:
        check_step(conc, Rule("ind", formula=phi(x), var="x", eigen="y", term=t),
                   [base.subst({}), Sequent(gamma + [phi(y)], delta + [phi(Succ(y))])])
    assert err.value.kind == "eigenvariable-not-fresh"


def test_q_axiom_examples():
    assert is_q_axiom(Sequent([], [eq(t, t)]))
    assert is_q_axiom(Sequent([], [eq(Plus(t, ZERO), t)]))
    assert not is_q_axiom(Sequent([], [eq(ZERO, Succ(ZERO))]))


def test_q_axiom_bounded_forms():
    """The existential axioms are recognised in their bounded form."""
    q3 = Sequent([], [eq(t, ZERO), BEx("y", t, eq(t, Succ(y)))])
    assert is_q_axiom(q3)
    assert is_q_axiom(Sequent([eq(Succ(x), ZERO)], []))
    assert is_q_axiom(Sequent([eq(x, y), lt(x, x)], [lt(x, y)]))


def test_check_proof_single_leaf():
    s = Sequent([], [eq(t, t)])
    pi = FiniteProof({"r": ProofNode(s, Rule("eq1"))}, "r")
    report = check_proof(pi)
    assert report.ok and report.assumptions == [] and report.conclusion == s


def _broken_tree():
    leaf = Sequent([], [eq(a, a)])
    conc = Sequent([], [All("x", eq(x, x))])
    good = {
        "r": ProofNode(conc, Rule("all-right", formula=All("x", eq(x, x)), eigen="a"), ("k",)),
        "k": ProofNode(leaf, Rule("eq1")),
    }
    bad_conc = Sequent([eq(a, ZERO)], [All("x", eq(x, x))])
    bad = {
        "r": ProofNode(bad_conc, Rule("all-right", formula=All("x", eq(x, x)), eigen="a"), ("k",)),
        "k": ProofNode(Sequent([eq(a, ZERO)], [eq(a, a)]), Rule("eq1")),
    }
    return FiniteProof(good, "r"), FiniteProof(bad, "r")


def test_check_proof_reports_broken_eigenvariable():
    good, bad = _broken_tree()
    assert check_proof(good).ok
    errs = check_proof(bad).errors
    assert len(errs) == 1
    node, err = errs[0]
    assert node == "r" and err.kind == "eigenvariable-not-fresh"


def test_check_proof_lists_assumptions():
    s = Sequent([eq(x, y)], [eq(y, x)])
    pi = FiniteProof({"r": ProofNode(s, Rule("assumption"))}, "r")
    assert check_proof(pi).assumptions == [s]


def _empty_case():
    """The subtree of the set-code proof that handles the empty codomain."""
    pi = php()
    for m in sorted(pi.nodes):
        if eq(SB, ZERO) in pi.nodes[m].sequent.ante:
            nodes, todo = {}, [m]
            while todo:
                k = todo.pop()
                node = pi.nodes[k]
                if any(isinstance(c, Bud) for c in node.children):
                    break
                nodes[k] = ProofNode(node.sequent, node.rule, tuple(node.children))
                todo.extend(node.children)
            else:
                return FiniteProof(nodes, m, PHP_THEORY)
    raise AssertionError("no empty-codomain subtree")


def test_empty_codomain_case_checks():
    """The bud-free empty-codomain subproof over the declared symbols is a correct finite proof."""
    pi = _empty_case()
    report = check_proof(pi)
    assert report.ok and report.assumptions == []
    assert eq(SB, ZERO) in report.conclusion.ante


def test_fragment_rejects_high_cut():
    high = All("x", Ex("y", eq(x, y)))
    s = Sequent([], [eq(ZERO, ZERO)])
    nodes = {
        "r": ProofNode(s, Rule("cut", formula=high), ("k0", "k1")),
        "k0": ProofNode(s.add(succ=[high]), Rule("eq1")),
        "k1": ProofNode(s.add(ante=[high]), Rule("eq1")),
    }
    pi = FiniteProof(nodes, "r")
    assert check_proof(pi).ok
    with pytest.raises(FragmentError) as err:
        validate_fragment(pi, 0, "all-pi")
    assert err.value.node in ("k0", "k1") and err.value.formula == high


def test_fragment_bounded_proof_is_pi1():
    good, _ = _broken_tree()
    leaf = FiniteProof({"k": good.nodes["k"]}, "k")
    validate_fragment(leaf, 0, "all-pi")
    validate_fragment(leaf, 0, "all-sigma")


def test_fragment_lift_conclusion():
    s = Sequent([], [All("x", phi(x))])
    pi = FiniteProof({"r": ProofNode(s, Rule("assumption"))}, "r")
    validate_fragment(pi, 0, "lift-conclusion")
    clash = Sequent([eq(x, ZERO)], [All("x", phi(x))])
    pi = FiniteProof({"r": ProofNode(clash, Rule("assumption"))}, "r")
    with pytest.raises(FragmentError):
        validate_fragment(pi, 0, "lift-conclusion")


# random instances of a few schemata, and their single-field mutants

@given(terms(("x", "y")), terms(("x", "y")))
def test_ex_right_instances(s, w):
    f = Ex("z", eq(Var("z"), s))
    conc = Sequent([lt(s, w)], [f])
    prem = Sequent([lt(s, w)], [f, eq(w, s)])
    check_step(conc, Rule("ex-right", formula=f, term=w), [prem])
    if w != s:
        with pytest.raises(StepError):
            check_step(conc, Rule("ex-right", formula=f, term=s), [prem])
    with pytest.raises(StepError):
        check_step(Sequent([lt(s, w)], []), Rule("ex-right", formula=f, term=w), [prem])


@given(terms(("x", "y")), st.sampled_from(["x", "y", "a"]))
def test_ex_left_instances(s, e):
    f = Ex("z", lt(Var("z"), s))
    conc = Sequent([f], [eq(s, s)])
    prem = Sequent([f, lt(Var(e), s)], [eq(s, s)])
    fresh = e not in conc.free_vars()
    try:
        check_step(conc, Rule("ex-left", formula=f, eigen=e), [prem])
        assert fresh
    except StepError as err:
        assert not fresh and err.kind == "eigenvariable-not-fresh"


@given(terms(("x", "y")), terms(("x", "y")), terms(("x", "y")))
def test_sub_instances(s, u, w):
    """sub is checked by applying the substitution to the premiss."""
    prem = Sequent([eq(x, s)], [lt(y, u)])
    theta = {"x": w}
    check_step(prem.subst(theta), Rule("sub", subst=theta), [prem])
    wrong = prem.subst({"x": Succ(w)})
    if wrong != prem.subst(theta):
        with pytest.raises(StepError) as err:
            check_step(wrong, Rule("sub", subst=theta), [prem])
        assert err.value.kind == "substitution-mismatch"


@given(terms(("x", "y")), terms(("x", "y")))
def test_and_right_and_or_left_instances(s, u):
    f, g = eq(s, u), lt(s, u)
    conc = Sequent([], [And(f, g)])
    check_step(conc, Rule("and-right", formula=And(f, g)), [Sequent([], [f]), Sequent([], [g])])
    with pytest.raises(StepError):
        check_step(conc, Rule("and-right", formula=And(f, g)), [Sequent([], [f])])
    conc = Sequent([Or(f, g)], [])
    check_step(conc, Rule("or-left", formula=Or(f, g)), [Sequent([f], []), Sequent([g], [])])


@given(terms(("x", "y", "a")), terms(("x", "y")))
def test_check_step_stable_under_renaming(s, w):
    """Renaming free variables away from the eigenvariable keeps a step valid."""
    f = Ex("z", eq(Var("z"), w))
    conc = Sequent([eq(s, w)], [All("v", eq(Var("v"), Var("v"))), f])
    rule = Rule("all-right", formula=All("v", eq(Var("v"), Var("v"))), eigen="e")
    prem = Sequent([eq(s, w)], [eq(Var("e"), Var("e")), f])
    check_step(conc, rule, [prem])
    rho = {"x": Var("p"), "y": Var("q"), "a": Var("r")}
    check_step(conc.subst(rho), rule, [prem.subst(rho)])


def test_arity_mismatch():
    s = Sequent([], [eq(ZERO, ZERO)])
    with pytest.raises(StepError) as err:
        check_step(s, Rule("wk"), [])
    assert err.value.kind == "arity"


def test_ball_left_needs_bound_atom():
    g = BAll("z", t, eq(Var("z"), Times(Var("z"), numeral(1))))
    conc = Sequent([g], [eq(a, Times(a, numeral(1)))])
    prem = Sequent([g, eq(a, Times(a, numeral(1)))], [eq(a, Times(a, numeral(1)))])
    with pytest.raises(StepError) as err:
        check_step(conc, Rule("ball-left", formula=g, term=a), [prem])
    assert err.value.kind == "bound-mismatch"
    check_step(conc.add(ante=[lt(a, t)]), Rule("ball-left", formula=g, term=a),
               [prem.add(ante=[lt(a, t)])])
