"""Text formats for proofs, automata, lassos and assignments."""
import pytest
from hypothesis import given, settings

from cyclarith.automata import DRA, LassoWord
from cyclarith.corpus import ENTRIES, build
from cyclarith.formats import (
    FormatError, formula_sx, parse_assignment, parse_automaton, parse_formula, parse_lasso,
    parse_proof, print_automaton, print_proof, lasso_text,
)
from cyclarith.sexpr import SexprError, read_one
from strategies import dbas, formulas, lassos, nbas


@given(formulas())
def test_formula_round_trip(phi):
    assert parse_formula(read_one(_dump(formula_sx(phi)))) == phi


def _dump(sx):
    from cyclarith.sexpr import dumps
    return dumps(sx, width=10 ** 9)


def test_formula_syntax_example():
    phi = parse_formula(read_one("(all x (ex y (lt (v x) (v y))))"))
    assert _dump(formula_sx(phi)) == "(all x (ex y (lt (v x) (v y))))"


@pytest.mark.parametrize("name", sorted(ENTRIES))
def test_proof_print_is_idempotent(name):
    """Printing, parsing and printing again gives the same text."""
    text = print_proof(build(name))
    again = print_proof(parse_proof(text))
    assert again == text


@settings(max_examples=100)
@given(nbas())
def test_nba_round_trip(a):
    b = parse_automaton(print_automaton(a))
    assert (b.alphabet, b.states, b.transitions, b.initial, b.finals) == \
        (a.alphabet, a.states, a.transitions, a.initial, a.finals)


@settings(max_examples=50)
@given(dbas())
def test_dba_round_trip_keeps_kind(a):
    assert type(parse_automaton(print_automaton(a))) is type(a)


def test_dra_round_trip():
    a = DRA(("a",), ["p", "q"], {("p", "a", "q"), ("q", "a", "p")}, "p", {"p": 1, "q": 2})
    b = parse_automaton(print_automaton(a))
    assert isinstance(b, DRA) and b.colour == a.colour


@given(lassos())
def test_lasso_round_trip(w):
    assert parse_lasso(lasso_text(w)) == w


def test_lasso_plain_syntax():
    assert parse_lasso("a b ; a") == LassoWord(("a", "b"), ("a",))
    assert parse_lasso(" ; b") == LassoWord((), ("b",))
    with pytest.raises(FormatError):
        parse_lasso("a b")
    with pytest.raises(FormatError):
        parse_lasso("a ; ")


def test_assignment():
    assert parse_assignment("(assign (x 2) (y 0))") == {"x": 2, "y": 0}
    with pytest.raises(SexprError):
        parse_assignment("(assign (x -1))")


BUD_TO_NOWHERE = """(cyclic-proof
  (root n0)
  (node n0 (seq () ((eq z z))) (rule sub ()) (children (bud n7))))
"""


def test_missing_bud_target_names_node():
    with pytest.raises(FormatError) as err:
        parse_proof(BUD_TO_NOWHERE)
    assert "n0" in str(err.value) and "n7" in str(err.value)


def test_bud_in_finite_proof_rejected():
    with pytest.raises(FormatError):
        parse_proof(BUD_TO_NOWHERE.replace("cyclic-proof", "finite-proof"))


def test_error_carries_position():
    with pytest.raises(SexprError) as err:
        parse_proof("(cyclic-proof\n  (root n0)\n  (nod n0))")
    assert err.value.pos is not None and err.value.pos[0] == 3


def test_undeclared_symbol_rejected():
    text = """(finite-proof (root n0)
  (node n0 (seq () ((eq (fn f z) z))) (rule assumption) (children)))"""
    with pytest.raises(SexprError):
        parse_proof(text)
    declared = text.replace("(root n0)", "(signature (fn f 1)) (root n0)")
    assert parse_proof(declared).root == "n0"


def test_unbalanced_parentheses():
    with pytest.raises(SexprError):
        parse_automaton("(nba (alphabet a)")


def test_nondeterministic_dba_rejected():
    text = "(dba (alphabet a) (states p) (init p) (finals) (trans (p a p) (p a p)))"
    parse_automaton(text)
    with pytest.raises(SexprError):
        parse_automaton("(dba (alphabet a b) (states p) (init p) (finals) (trans (p a p)))")
