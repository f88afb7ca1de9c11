"""Truth in the standard model, with a fuel bound on unbounded quantifiers,
and the generator of falsified branches through a preproof."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .calculus import Sequent
from .cyclic import Bud, CyclicPreproof
from .syntax import (
    EQ, LT, All, And, App, Atom, BAll, BEx, Ex, NAtom, Or, Plus, Succ, Times, Var, Zero,
)


class SemanticsError(ValueError):
    pass


class TruthValue(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __invert__(self):
        if self is TruthValue.UNKNOWN:
            return self
        return TruthValue.FALSE if self is TruthValue.TRUE else TruthValue.TRUE


T, F, U = TruthValue.TRUE, TruthValue.FALSE, TruthValue.UNKNOWN


def _tv(b: bool) -> TruthValue:
    return T if b else F


@dataclass(frozen=True)
class Interpretation:
    """Meanings for declared function and predicate symbols."""

    functions: dict = field(default_factory=dict)
    predicates: dict = field(default_factory=dict)

    def function(self, name: str) -> Callable:
        try:
            return self.functions[name]
        except KeyError:
            raise SemanticsError(f"no interpretation for function symbol {name!r}") from None

    def predicate(self, name: str) -> Callable:
        try:
            return self.predicates[name]
        except KeyError:
            raise SemanticsError(f"no interpretation for predicate {name!r}") from None


STANDARD = Interpretation()


def set_code_interpretation(f: Callable[[int], int]) -> Interpretation:
    """Finite sets coded as bit patterns, with the given map f."""
    return Interpretation(
        functions={"f": f, "del": lambda s, x: s & ~(1 << x)},
        predicates={"mem": lambda x, s: bool(s >> x & 1),
                    "gtc": lambda s, t: bin(s).count("1") > bin(t).count("1")},
    )


def eval_term(rho: dict, interp: Interpretation, t) -> int:
    if isinstance(t, Var):
        try:
            return rho[t.name]
        except KeyError:
            raise SemanticsError(f"variable {t.name} is unassigned") from None
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Succ):
        return eval_term(rho, interp, t.arg) + 1
    if isinstance(t, Plus):
        return eval_term(rho, interp, t.left) + eval_term(rho, interp, t.right)
    if isinstance(t, Times):
        return eval_term(rho, interp, t.left) * eval_term(rho, interp, t.right)
    if isinstance(t, App):
        return interp.function(t.fn)(*(eval_term(rho, interp, a) for a in t.args))
    raise SemanticsError(f"not a term: {t!r}")


def _atom(rho, interp, pred, args) -> bool:
    vals = [eval_term(rho, interp, a) for a in args]
    if pred == EQ:
        return vals[0] == vals[1]
    if pred == LT:
        return vals[0] < vals[1]
    return bool(interp.predicate(pred)(*vals))


def _any(values) -> TruthValue:
    seen_unknown = False
    for v in values:
        if v is T:
            return T
        seen_unknown |= v is U
    return U if seen_unknown else F


def _all(values) -> TruthValue:
    seen_unknown = False
    for v in values:
        if v is F:
            return F
        seen_unknown |= v is U
    return U if seen_unknown else T


def models(rho: dict, interp: Interpretation, phi, fuel: int = 64) -> TruthValue:
    """Three-valued truth; unbounded quantifiers only look at 0..fuel."""
    if isinstance(phi, Atom):
        return _tv(_atom(rho, interp, phi.pred, phi.args))
    if isinstance(phi, NAtom):
        return _tv(not _atom(rho, interp, phi.pred, phi.args))
    if isinstance(phi, And):
        return _all(models(rho, interp, g, fuel) for g in (phi.left, phi.right))
    if isinstance(phi, Or):
        return _any(models(rho, interp, g, fuel) for g in (phi.left, phi.right))
    if isinstance(phi, (BEx, BAll)):
        n = eval_term(rho, interp, phi.bound)
        vals = (models({**rho, phi.var: k}, interp, phi.body, fuel) for k in range(n))
        return _any(vals) if isinstance(phi, BEx) else _all(vals)
    if isinstance(phi, Ex):
        vals = (models({**rho, phi.var: k}, interp, phi.body, fuel) for k in range(fuel + 1))
        return T if _any(vals) is T else U
    if isinstance(phi, All):
        vals = (models({**rho, phi.var: k}, interp, phi.body, fuel) for k in range(fuel + 1))
        return F if _all(vals) is F else U
    raise SemanticsError(f"not a formula: {phi!r}")


def models_sequent(rho: dict, interp: Interpretation, s: Sequent, fuel: int = 64) -> TruthValue:
    """Truth of: not all of the antecedent, or some of the succedent."""
    parts = [~models(rho, interp, f, fuel) for f in s.ante]
    parts += [models(rho, interp, f, fuel) for f in s.succ]
    return _any(parts)


# ------------------------------------------------------------ branches

class Stuck(Exception):
    """The generator cannot continue; ``reason`` says why."""

    def __init__(self, reason: str, node: Optional[str] = None):
        super().__init__(f"{reason}" + (f" at {node}" if node else ""))
        self.reason = reason
        self.node = node


@dataclass
class Branch:
    steps: list                       # (node id, assignment) pairs
    lasso: Optional[tuple] = None     # (first, repeat) step indices of the detected loop

    def assignments(self):
        return [rho for _, rho in self.steps]


def _key(pi: CyclicPreproof, m: str, rho: dict):
    fv = pi.nodes[m].sequent.free_vars()
    return m, tuple(sorted((v, rho[v]) for v in fv))


def _candidates(base: dict, names: list, fuel: int):
    """Extensions of ``base`` by values for ``names``, least first."""
    if not names:
        yield dict(base)
        return
    pool = sorted(itertools.product(range(fuel + 1), repeat=len(names)), key=lambda v: (max(v), v))
    for vals in pool:
        yield {**base, **dict(zip(names, vals))}


def _next(pi: CyclicPreproof, m: str, rho: dict, interp, fuel: int):
    node = pi.nodes[m]
    if not node.children:
        raise Stuck("axiom", m)
    conc_fv = node.sequent.free_vars()
    for k in node.children:
        target = k.target if isinstance(k, Bud) else k
        prem = pi.nodes[target].sequent
        if node.rule.tag == "sub":
            theta = node.rule.theta
            nxt = dict(rho)
            for v in prem.free_vars():
                nxt[v] = eval_term(rho, interp, theta[v]) if v in theta else rho[v]
            if models_sequent(nxt, interp, prem, fuel) is F:
                return target, nxt
            continue
        fresh = sorted(prem.free_vars() - conc_fv)
        for cand in _candidates(rho, fresh, fuel):
            if models_sequent(cand, interp, prem, fuel) is F:
                return target, cand
    raise Stuck("no-falsified-premiss", m)


def generate_branch(pi: CyclicPreproof, rho0: dict, interp: Interpretation = STANDARD,
                    steps: int = 100, fuel: int = 64) -> Branch:
    """Follow falsified sequents upwards from the root, leftmost premiss first.

    Assignments are kept whole (earlier choices stay visible to traces); a
    loop is reported when a node recurs with the same values on the free
    variables of its sequent.
    """
    m, rho = pi.root, dict(rho0)
    if models_sequent(rho, interp, pi.conclusion, fuel) is not F:
        raise Stuck("conclusion-not-falsified", m)
    out = Branch([(m, rho)])
    seen = {_key(pi, m, rho): 0}
    for _ in range(steps):
        m, rho = _next(pi, m, rho, interp, fuel)
        out.steps.append((m, rho))
        key = _key(pi, m, rho)
        if key in seen:
            out.lasso = (seen[key], len(out.steps) - 1)
            return out
        seen[key] = len(out.steps) - 1
    return out


def trace_values(branch: Branch, terms: list, interp: Interpretation = STANDARD) -> list:
    """Values of a hand-supplied trace, one term per branch step."""
    return [eval_term(rho, interp, t) for (_, rho), t in zip(branch.steps, terms)]


__all__ = [
    "TruthValue", "Interpretation", "STANDARD", "set_code_interpretation", "eval_term",
    "models", "models_sequent", "generate_branch", "trace_values", "Branch", "Stuck",
    "SemanticsError",
]
