"""Textual formats: terms, formulas, sequents, proofs, automata and lassos.

Everything is s-expression based; printers emit a normal form so that
``print(parse(print(parse(x))))`` equals ``print(parse(x))``.
"""
from __future__ import annotations

from .automata import DBA, DRA, NBA, LassoWord
from .calculus import FiniteProof, ProofNode, Rule, Sequent, Theory
from .cyclic import Bud, CyclicPreproof, ProofEdge
from .sexpr import SexprError, dumps, expect_atom, expect_list, read_one
from .syntax import (
    EQ, LT, And, All, App, Atom, BAll, BEx, Ex, NAtom, Or, Plus, Signature, Succ, Times, Var,
    Zero,
)


class FormatError(SexprError):
    pass


def _err(d, msg):
    return FormatError(msg, getattr(d, "pos", None))


# ------------------------------------------------------------------ terms

def term_sx(t):
    if isinstance(t, Var):
        return ["v", t.name]
    if isinstance(t, Zero):
        return "z"
    if isinstance(t, Succ):
        return ["s", term_sx(t.arg)]
    if isinstance(t, Plus):
        return ["+", term_sx(t.left), term_sx(t.right)]
    if isinstance(t, Times):
        return ["*", term_sx(t.left), term_sx(t.right)]
    return ["fn", t.fn] + [term_sx(a) for a in t.args]


def parse_term(d):
    if isinstance(d, str):
        if d == "z":
            return Zero()
        raise _err(d, f"unknown term {d!r}")
    expect_list(d, min_len=1)
    head = d[0]
    arity = {"v": 1, "s": 1, "+": 2, "*": 2}
    if head in arity:
        if len(d) != arity[head] + 1:
            raise _err(d, f"({head} ...) takes {arity[head]} argument(s)")
        if head == "v":
            return Var(expect_atom(d[1]))
        args = [parse_term(x) for x in d[1:]]
        return {"s": lambda: Succ(*args), "+": lambda: Plus(*args), "*": lambda: Times(*args)}[head]()
    if head == "fn":
        if len(d) < 2:
            raise _err(d, "(fn name args...) needs a name")
        return App(expect_atom(d[1]), tuple(parse_term(x) for x in d[2:]))
    raise _err(d, f"unknown term constructor {head!r}")


# --------------------------------------------------------------- formulas

def formula_sx(f):
    if isinstance(f, (Atom, NAtom)):
        neg = isinstance(f, NAtom)
        if f.pred in (EQ, LT):
            name = {EQ: "eq", LT: "lt"}[f.pred]
            return [("n" if neg else "") + name] + [term_sx(a) for a in f.args]
        return ["np" if neg else "p", f.pred] + [term_sx(a) for a in f.args]
    if isinstance(f, And):
        return ["and", formula_sx(f.left), formula_sx(f.right)]
    if isinstance(f, Or):
        return ["or", formula_sx(f.left), formula_sx(f.right)]
    if isinstance(f, Ex):
        return ["ex", f.var, formula_sx(f.body)]
    if isinstance(f, All):
        return ["all", f.var, formula_sx(f.body)]
    tag = "bex" if isinstance(f, BEx) else "ball"
    return [tag, f.var, term_sx(f.bound), formula_sx(f.body)]


def parse_formula(d):
    expect_list(d, min_len=1)
    head = d[0]

    def need(k):
        if len(d) != k:
            raise _err(d, f"({head} ...) takes {k - 1} argument(s)")

    if head in ("eq", "lt", "neq", "nlt"):
        need(3)
        pred = EQ if head.endswith("eq") else LT
        cls = NAtom if head.startswith("n") else Atom
        return cls(pred, (parse_term(d[1]), parse_term(d[2])))
    if head in ("p", "np"):
        if len(d) < 2:
            raise _err(d, f"({head} name args...) needs a name")
        cls = NAtom if head == "np" else Atom
        return cls(expect_atom(d[1]), tuple(parse_term(x) for x in d[2:]))
    if head in ("and", "or"):
        need(3)
        return (And if head == "and" else Or)(parse_formula(d[1]), parse_formula(d[2]))
    if head in ("ex", "all"):
        need(3)
        return (Ex if head == "ex" else All)(expect_atom(d[1]), parse_formula(d[2]))
    if head in ("bex", "ball"):
        need(4)
        try:
            return (BEx if head == "bex" else BAll)(expect_atom(d[1]), parse_term(d[2]),
                                                    parse_formula(d[3]))
        except ValueError as e:
            if isinstance(e, SexprError):
                raise
            raise _err(d, str(e)) from None
    raise _err(d, f"unknown formula constructor {head!r}")


def formula_text(f) -> str:
    return dumps(formula_sx(f), width=10 ** 9)


def term_text(t) -> str:
    return dumps(term_sx(t), width=10 ** 9)


# --------------------------------------------------------------- sequents

def _sorted_fs(fs):
    return sorted((formula_sx(f) for f in fs), key=lambda x: dumps(x, width=10 ** 9))


def sequent_sx(s: Sequent):
    return ["seq", _sorted_fs(s.ante), _sorted_fs(s.succ)]


def parse_sequent(d) -> Sequent:
    expect_list(d, "seq")
    if len(d) != 3:
        raise _err(d, "(seq (antecedent...) (succedent...)) expected")
    return Sequent([parse_formula(x) for x in expect_list(d[1])],
                   [parse_formula(x) for x in expect_list(d[2])])


def sequent_text(s: Sequent) -> str:
    side = lambda fs: ", ".join(formula_text(f) for f in sorted(fs, key=formula_text))
    return f"{side(s.ante)} => {side(s.succ)}".strip()


# ------------------------------------------------------------------ rules

OPTIONAL_FORMULA = {"id", "eq1", "eq2", "eq3", "neg-left", "neg-right"}
EIGEN_FORMULA = {"ex-left", "all-right", "bex-left", "ball-right"}
WITNESS_FORMULA = {"ex-right", "all-left", "bex-right", "ball-left"}


def rule_sx(r: Rule):
    tag = r.tag
    out = ["rule", tag]
    if tag in OPTIONAL_FORMULA:
        if r.formula is not None:
            out.append(formula_sx(r.formula))
    elif tag in ("and-left", "or-right"):
        out += [str(r.index), formula_sx(r.formula)]
    elif tag in ("and-right", "or-left", "cut"):
        out.append(formula_sx(r.formula))
    elif tag in EIGEN_FORMULA:
        out += [r.eigen, formula_sx(r.formula)]
    elif tag in WITNESS_FORMULA:
        out += [term_sx(r.term), formula_sx(r.formula)]
    elif tag == "sub":
        out.append([[v, term_sx(t)] for v, t in sorted(r.subst)])
    elif tag == "ind":
        out += [r.var, formula_sx(r.formula), r.eigen, term_sx(r.term)]
    elif tag == "q-axiom":
        out.append(str(r.index))
    elif tag == "axiom":
        out.append(r.name)
    return out


def parse_rule(d) -> Rule:
    expect_list(d, "rule", 2)
    tag = expect_atom(d[1])
    args = d[2:]

    def need(k):
        if len(args) != k:
            raise _err(d, f"rule {tag} takes {k} argument(s)")

    try:
        if tag in OPTIONAL_FORMULA:
            if len(args) > 1:
                raise _err(d, f"rule {tag} takes at most one formula")
            return Rule(tag, formula=parse_formula(args[0]) if args else None)
        if tag in ("and-left", "or-right"):
            need(2)
            if args[0] not in ("0", "1"):
                raise _err(args[0], "index must be 0 or 1")
            return Rule(tag, formula=parse_formula(args[1]), index=int(args[0]))
        if tag in ("and-right", "or-left", "cut"):
            need(1)
            return Rule(tag, formula=parse_formula(args[0]))
        if tag in EIGEN_FORMULA:
            need(2)
            return Rule(tag, formula=parse_formula(args[1]), eigen=expect_atom(args[0]))
        if tag in WITNESS_FORMULA:
            need(2)
            return Rule(tag, formula=parse_formula(args[1]), term=parse_term(args[0]))
        if tag == "sub":
            need(1)
            pairs = []
            for p in expect_list(args[0]):
                expect_list(p)
                if len(p) != 2:
                    raise _err(p, "substitution entries are (variable term)")
                pairs.append((expect_atom(p[0]), parse_term(p[1])))
            if len({v for v, _ in pairs}) != len(pairs):
                raise _err(args[0], "variable substituted twice")
            return Rule("sub", subst=tuple(sorted(pairs)))
        if tag == "ind":
            need(4)
            return Rule("ind", var=expect_atom(args[0]), formula=parse_formula(args[1]),
                        eigen=expect_atom(args[2]), term=parse_term(args[3]))
        if tag == "q-axiom":
            need(1)
            return Rule("q-axiom", index=expect_atom(args[0]))
        if tag == "axiom":
            need(1)
            return Rule("axiom", name=expect_atom(args[0]))
        if tag in ("wk", "assumption"):
            need(0)
            return Rule(tag)
    except SexprError:
        raise
    except ValueError as e:
        raise _err(d, str(e)) from None
    raise _err(d, f"unknown rule tag {tag!r}")


# ----------------------------------------------------------------- proofs

def signature_sx(sig: Signature):
    return (["signature"] + [["fn", n, str(a)] for n, a in sig.functions]
            + [["pred", n, str(a)] for n, a in sig.predicates])


def proof_sx(pi):
    cyclic = isinstance(pi, CyclicPreproof)
    out = ["cyclic-proof" if cyclic else "finite-proof"]
    if pi.theory.signature.functions or pi.theory.signature.predicates:
        out.append(signature_sx(pi.theory.signature))
    for name, s in pi.theory.axioms:
        out.append(["axiom", name, sequent_sx(s)])
    out.append(["root", pi.root])
    order = pi.tree_order() if cyclic else _finite_order(pi)
    order += sorted(set(pi.nodes) - set(order))
    for m in order:
        node = pi.nodes[m]
        kids = [["bud", k.target] if isinstance(k, Bud) else k for k in node.children]
        item = ["node", m, sequent_sx(node.sequent), rule_sx(node.rule), ["children"] + kids]
        if node.registered:
            item.append(["register"] + sorted((term_sx(t) for t in node.registered),
                                              key=lambda x: dumps(x, width=10 ** 9)))
        out.append(item)
    return out


def _finite_order(pi) -> list:
    out, stack, seen = [], [pi.root], set()
    while stack:
        m = stack.pop()
        if m in seen or m not in pi.nodes:
            continue
        seen.add(m)
        out.append(m)
        stack.extend(reversed([k for k in pi.nodes[m].children if isinstance(k, str)]))
    return out


def print_proof(pi) -> str:
    head, *items = proof_sx(pi)
    return "(" + head + "".join("\n  " + dumps(x, width=98, indent=2) for x in items) + ")\n"


def parse_proof(text: str):
    d = read_one(text)
    expect_list(d, min_len=1)
    kind = d[0]
    if kind not in ("finite-proof", "cyclic-proof"):
        raise _err(d, "expected (finite-proof ...) or (cyclic-proof ...)")
    fns, preds, axioms, nodes, root = {}, {}, [], {}, None
    for item in d[1:]:
        expect_list(item, min_len=1)
        head = item[0]
        if head == "signature":
            for decl in item[1:]:
                expect_list(decl)
                if len(decl) != 3 or decl[0] not in ("fn", "pred") or not str(decl[2]).isdigit():
                    raise _err(decl, "declarations are (fn name arity) or (pred name arity)")
                (fns if decl[0] == "fn" else preds)[expect_atom(decl[1])] = int(decl[2])
        elif head == "axiom":
            if len(item) != 3:
                raise _err(item, "(axiom name (seq ...)) expected")
            axioms.append((expect_atom(item[1]), parse_sequent(item[2])))
        elif head == "root":
            if len(item) != 2:
                raise _err(item, "(root id) expected")
            root = expect_atom(item[1])
        elif head == "node":
            if len(item) not in (5, 6):
                raise _err(item, "(node id (seq ...) (rule ...) (children ...) [(register ...)])")
            m = expect_atom(item[1])
            if m in nodes:
                raise _err(item, f"node {m} defined twice")
            seq = parse_sequent(item[2])
            rule = parse_rule(item[3])
            kids_sx = expect_list(item[4], "children")
            kids = []
            for k in kids_sx[1:]:
                if isinstance(k, str):
                    kids.append(str(k))
                else:
                    expect_list(k, "bud")
                    if len(k) != 2:
                        raise _err(k, f"node {m}: (bud id) expected")
                    if kind != "cyclic-proof":
                        raise _err(k, f"node {m}: buds only occur in cyclic proofs")
                    kids.append(Bud(expect_atom(k[1])))
            reg = frozenset()
            if len(item) == 6:
                r = expect_list(item[5], "register")
                reg = frozenset(parse_term(t) for t in r[1:])
            nodes[m] = (ProofNode(seq, rule, tuple(kids), reg), item)
        else:
            raise _err(item, f"unknown proof item {head!r}")
    if root is None:
        raise _err(d, "missing (root id)")
    if root not in nodes:
        raise _err(d, f"root {root} is not a node")
    for m, (node, item) in nodes.items():
        for k in node.children:
            target = k.target if isinstance(k, Bud) else k
            if target not in nodes:
                what = "bud target" if isinstance(k, Bud) else "child"
                raise _err(item, f"node {m}: {what} {target} is not a node")
    try:
        sig = Signature(tuple(fns.items()), tuple(preds.items()))
        for m, (node, item) in nodes.items():
            for f in node.sequent.formulas():
                sig.check_formula(f)
        for _, s in axioms:
            for f in s.formulas():
                sig.check_formula(f)
    except ValueError as e:
        raise _err(d, str(e)) from None
    theory = Theory(sig, tuple(axioms))
    plain = {m: node for m, (node, _) in nodes.items()}
    if kind == "cyclic-proof":
        return CyclicPreproof(plain, root, theory)
    return FiniteProof(plain, root, theory)


# --------------------------------------------------------------- automata

def _name(x) -> str:
    if isinstance(x, ProofEdge):
        return str(x)
    return str(x)


def automaton_sx(a, relabel: bool = False):
    names = {q: (f"s{i}" if relabel else _name(q)) for i, q in enumerate(a.states)}
    kind = "dra" if isinstance(a, DRA) else "dba" if isinstance(a, DBA) else "nba"
    out = [kind, ["alphabet"] + [_name(s) for s in a.alphabet],
           ["states"] + [names[q] for q in a.states], ["init", names[a.initial]]]
    sym_order = {s: i for i, s in enumerate(a.alphabet)}
    st_order = {q: i for i, q in enumerate(a.states)}
    trans = sorted(a.transitions, key=lambda t: (st_order[t[0]], sym_order[t[1]], st_order[t[2]]))
    if kind == "dra":
        out.append(["colours"] + [[names[q], str(c)] for q, c in a.colour])
    else:
        out.append(["finals"] + [names[q] for q in a.states if q in a.finals])
    out.append(["trans"] + [[names[q], _name(s), names[r]] for q, s, r in trans])
    return out


def print_automaton(a, relabel: bool = False) -> str:
    head, *items = automaton_sx(a, relabel)
    return "(" + head + "".join("\n  " + dumps(x, width=98, indent=2) for x in items) + ")\n"


def parse_automaton(text: str):
    d = read_one(text)
    expect_list(d, min_len=1)
    kind = d[0]
    if kind not in ("nba", "dba", "dra"):
        raise _err(d, "expected (nba ...), (dba ...) or (dra ...)")
    fields = {}
    for item in d[1:]:
        expect_list(item, min_len=1)
        if item[0] in fields:
            raise _err(item, f"duplicate section {item[0]}")
        fields[str(item[0])] = item
    need = ["alphabet", "states", "init", "trans"] + (["colours"] if kind == "dra" else ["finals"])
    for k in need:
        if k not in fields:
            raise _err(d, f"missing ({k} ...)")
    alphabet = [expect_atom(x) for x in fields["alphabet"][1:]]
    states = [expect_atom(x) for x in fields["states"][1:]]
    if len(fields["init"]) != 2:
        raise _err(fields["init"], "(init state) expected")
    init = expect_atom(fields["init"][1])
    trans = []
    for t in fields["trans"][1:]:
        expect_list(t)
        if len(t) != 3:
            raise _err(t, "transitions are (state symbol state)")
        trans.append(tuple(expect_atom(x) for x in t))
    try:
        if kind == "dra":
            colour = {}
            for c in fields["colours"][1:]:
                expect_list(c)
                if len(c) != 2 or not str(c[1]).isdigit():
                    raise _err(c, "colours are (state natural)")
                colour[expect_atom(c[0])] = int(c[1])
            missing = set(states) - set(colour)
            if missing:
                raise _err(fields["colours"], f"uncoloured state {sorted(missing)[0]}")
            return DRA(alphabet, states, trans, init, colour)
        finals = [expect_atom(x) for x in fields["finals"][1:]]
        cls = DBA if kind == "dba" else NBA
        return cls(alphabet, states, trans, init, finals)
    except SexprError:
        raise
    except ValueError as e:
        raise _err(d, str(e)) from None


# ----------------------------------------------------------------- lassos

def parse_lasso(text: str) -> LassoWord:
    """``(lasso (u...) (v...))`` or ``u1 u2 ; v1 v2``."""
    text = text.strip()
    if text.startswith("("):
        d = read_one(text)
        expect_list(d, "lasso")
        if len(d) != 3:
            raise _err(d, "(lasso (spoke...) (loop...)) expected")
        u = [expect_atom(x) for x in expect_list(d[1])]
        v = [expect_atom(x) for x in expect_list(d[2])]
    else:
        if text.count(";") != 1:
            raise FormatError("a lasso is written 'u ; v'")
        left, right = text.split(";")
        u, v = left.split(), right.split()
    if not v:
        raise FormatError("the loop of a lasso must be nonempty")
    return LassoWord(u, v)


def lasso_sx(w: LassoWord):
    return ["lasso", [_name(s) for s in w.spoke], [_name(s) for s in w.loop]]


def lasso_text(w: LassoWord) -> str:
    return dumps(lasso_sx(w), width=10 ** 9)


def parse_assignment(text: str) -> dict:
    d = read_one(text)
    expect_list(d, "assign")
    out = {}
    for p in d[1:]:
        expect_list(p)
        if len(p) != 2 or not str(p[1]).isdigit():
            raise _err(p, "assignment entries are (variable natural)")
        out[expect_atom(p[0])] = int(p[1])
    return out
