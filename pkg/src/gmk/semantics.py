"""Exact Goedel truth values, finite Goedel-Kripke models and evaluation.

Truth values are :class:`fractions.Fraction` in [0, 1]. Goedel connectives
only ever select among their inputs and the constants 0 and 1, so evaluation
runs on order ranks of the values occurring in a model and maps back to
fractions at the end. This is exact.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from .formula import (
    And, Bot, Box, Dia, Formula, Implies, Meta, Or, Var, is_modal, variables,
)

TruthValue = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


class ModelError(ValueError):
    pass


def truth_value(x) -> Fraction:
    """Coerce ``x`` ("p/q" string, int or Fraction) into a truth value."""
    if isinstance(x, str):
        try:
            v = Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ModelError(f"not a rational truth value: {x!r}") from None
    elif isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        v = Fraction(x)
    else:
        raise ModelError(f"truth values must be exact rationals, got {x!r}")
    if not 0 <= v <= 1:
        raise ModelError(f"truth value out of [0,1]: {x!r}")
    return v


def format_value(v: Fraction) -> str:
    return str(v)


def residuum(a, b):
    return ONE if a <= b else b


def godel_apply(op: str, a: Fraction, b: Fraction | None = None) -> Fraction:
    """Goedel operation ``op`` in {and, or, implies, not} on exact values."""
    binary = {"and": min, "or": max, "implies": residuum}
    if op in binary:
        if b is None:
            raise TypeError(f"{op} takes two arguments")
        return binary[op](truth_value(a), truth_value(b))
    if op == "not":
        if b is not None:
            raise TypeError("not takes one argument")
        return residuum(truth_value(a), ZERO)
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# models

@dataclass(frozen=True, eq=True)
class KripkeModel:
    """A finite Goedel-Kripke model.

    ``relation`` maps (v, w) pairs to values and ``valuation`` maps variable
    names to {world: value}; absent entries are 0. Zero entries are dropped on
    construction so that equal models compare equal.
    """

    worlds: tuple
    relation: Mapping = field(default_factory=dict)
    valuation: Mapping = field(default_factory=dict)

    def __post_init__(self):
        worlds = tuple(self.worlds)
        if not worlds:
            raise ModelError("a model needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise ModelError("duplicate world identifiers")
        known = set(worlds)
        rel = {}
        for (v, w), x in dict(self.relation).items():
            if v not in known or w not in known:
                raise ModelError(f"relation pair ({v}, {w}) mentions an unknown world")
            x = truth_value(x)
            if x:
                rel[(v, w)] = x
        val = {}
        for var, row in dict(self.valuation).items():
            clean = {}
            for w, x in dict(row).items():
                if w not in known:
                    raise ModelError(f"valuation of {var} mentions unknown world {w}")
                x = truth_value(x)
                if x:
                    clean[w] = x
            if clean:
                val[var] = clean
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "relation", rel)
        object.__setattr__(self, "valuation", val)

    @classmethod
    def crisp(cls, worlds, edges, valuation=None):
        return cls(worlds, {e: ONE for e in edges}, valuation or {})

    @property
    def is_crisp(self) -> bool:
        return all(x == ONE for x in self.relation.values())

    def R(self, v, w) -> Fraction:
        return self.relation.get((v, w), ZERO)

    def value(self, var: str, w) -> Fraction:
        return self.valuation.get(var, {}).get(w, ZERO)

    def edges(self) -> set:
        """Pairs with relation value 1."""
        return {e for e, x in self.relation.items() if x == ONE}

    def occurring_values(self) -> set[Fraction]:
        vals = set(self.relation.values())
        for row in self.valuation.values():
            vals.update(row.values())
        return vals

    def with_relation(self, relation) -> "KripkeModel":
        return KripkeModel(self.worlds, relation, self.valuation)

    @cached_property
    def _tables(self) -> "_RankTables":
        return _RankTables(self)

    def to_json(self) -> dict:
        return model_to_json(self)


class _RankTables:
    """The model with every value replaced by its rank in the value chain."""

    def __init__(self, m: KripkeModel):
        self.values = sorted(m.occurring_values() | {ZERO, ONE})
        rank = {x: i for i, x in enumerate(self.values)}
        self.top = len(self.values) - 1
        ws = m.worlds
        self.index = {w: i for i, w in enumerate(ws)}
        self.rel = [[rank[m.R(v, w)] for w in ws] for v in ws]
        self.rows = {var: tuple(rank[m.value(var, w)] for w in ws) for var in m.valuation}
        self.zero_row = (0,) * len(ws)


def rank_eval(rel: Sequence[Sequence[int]], top: int, rows: Mapping[str, tuple],
              f: Formula, memo: dict | None = None) -> tuple:
    """Evaluate ``f`` at every world on integer ranks 0..top.

    ``rel[v][w]`` is the rank of R(v, w); ``rows[var]`` the rank row of a
    variable (missing variables evaluate to 0 everywhere).
    """
    if memo is None:
        memo = {}
    n = len(rel)
    rng = range(n)

    def ev(g):
        hit = memo.get(g)
        if hit is not None:
            return hit
        t = type(g)
        if t is Var:
            r = rows.get(g.name)
            if r is None:
                r = (0,) * n
        elif t is Bot:
            r = (0,) * n
        elif t is And:
            r = tuple(map(min, ev(g.left), ev(g.right)))
        elif t is Or:
            r = tuple(map(max, ev(g.left), ev(g.right)))
        elif t is Implies:
            r = tuple(top if a <= b else b for a, b in zip(ev(g.left), ev(g.right)))
        elif t is Box:
            x = ev(g.inner)
            r = tuple(min([top] + [x[w] for w in rng if rel[v][w] > x[w]]) for v in rng)
        elif t is Dia:
            x = ev(g.inner)
            r = tuple(max([0] + [min(rel[v][w], x[w]) for w in rng]) for v in rng)
        elif t is Meta:
            raise ModelError(f"cannot evaluate metavariable ?{g.name}")
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = r
        return r

    return ev(f)


def evaluate_rows(m: KripkeModel, f: Formula) -> tuple[Fraction, ...]:
    """Values of ``f`` at every world of ``m``, in world order."""
    t = m._tables
    ranks = rank_eval(t.rel, t.top, t.rows, f)
    return tuple(t.values[i] for i in ranks)


def evaluate(m: KripkeModel, v, f: Formula) -> Fraction:
    """Value of ``f`` at world ``v``."""
    t = m._tables
    if v not in t.index:
        raise ModelError(f"unknown world {v!r}")
    return evaluate_rows(m, f)[t.index[v]]


def valid_in_model(m: KripkeModel, f: Formula) -> bool:
    return all(x == ONE for x in evaluate_rows(m, f))


@dataclass(frozen=True)
class EntailmentVerdict:
    holds: bool
    witness: tuple | None = None  # (world, value of the conclusion)

    def __post_init__(self):
        if self.holds == (self.witness is not None):
            raise ValueError("witness must be present exactly when the claim fails")


def local_consequence(m: KripkeModel, premises: Iterable[Formula], phi: Formula) -> EntailmentVerdict:
    """At every world where all premises are 1, is ``phi`` 1 as well?"""
    prem_rows = [evaluate_rows(m, g) for g in premises]
    concl = evaluate_rows(m, phi)
    for i, w in enumerate(m.worlds):
        if all(r[i] == ONE for r in prem_rows) and concl[i] != ONE:
            return EntailmentVerdict(False, (w, concl[i]))
    return EntailmentVerdict(True)


def global_consequence(m: KripkeModel, premises: Iterable[Formula], phi: Formula) -> EntailmentVerdict:
    """If every premise is valid in ``m``, is ``phi`` valid in ``m``?"""
    if not all(valid_in_model(m, g) for g in premises):
        return EntailmentVerdict(True)
    for w, x in zip(m.worlds, evaluate_rows(m, phi)):
        if x != ONE:
            return EntailmentVerdict(False, (w, x))
    return EntailmentVerdict(True)


# ---------------------------------------------------------------------------
# propositional Goedel logic

class PropVerdict(NamedTuple):
    valid: bool
    countervaluation: dict | None


def evaluate_prop(f: Formula, assignment: Mapping[str, Fraction]) -> Fraction:
    """Value of a modal-free formula under ``assignment`` (missing vars are 0)."""
    t = type(f)
    if t is Var:
        return assignment.get(f.name, ZERO)
    if t is Bot:
        return ZERO
    if t is And:
        return min(evaluate_prop(f.left, assignment), evaluate_prop(f.right, assignment))
    if t is Or:
        return max(evaluate_prop(f.left, assignment), evaluate_prop(f.right, assignment))
    if t is Implies:
        return residuum(evaluate_prop(f.left, assignment), evaluate_prop(f.right, assignment))
    raise ValueError(f"not a propositional formula: {f}")


def uniform_chain(size: int) -> list[Fraction]:
    """``{0, 1/(size-1), ..., 1}``."""
    if size < 2:
        raise ValueError("a chain needs at least the two points 0 and 1")
    return [Fraction(i, size - 1) for i in range(size)]


def decide_prop_validity(f: Formula) -> PropVerdict:
    """Decide validity of a modal-free formula over the standard Goedel algebra.

    Goedel connectives only see the relative order of their inputs, so with n
    variables it is enough to try all assignments into a chain of n+2 points.
    The first refuting assignment in enumeration order is returned.
    """
    if is_modal(f):
        raise ValueError("decide_prop_validity expects a formula without [] or <>")
    names = variables(f)
    chain = uniform_chain(len(names) + 2)
    for combo in itertools.product(chain, repeat=len(names)):
        assignment = dict(zip(names, combo))
        if evaluate_prop(f, assignment) != ONE:
            return PropVerdict(False, assignment)
    return PropVerdict(True, None)


# ---------------------------------------------------------------------------
# order rescaling

def rescale_model(m: KripkeModel, sigma: Mapping) -> KripkeModel:
    """Replace every value x of ``m`` by ``sigma[x]``.

    ``sigma`` must be strictly increasing on the values occurring in the model
    and fix 0 and 1 (it is extended by the identity on 0 and 1).
    """
    sig = {truth_value(k): truth_value(v) for k, v in dict(sigma).items()}
    for c in (ZERO, ONE):
        if sig.setdefault(c, c) != c:
            raise ModelError(f"rescaling must fix {c}")
    missing = m.occurring_values() - sig.keys()
    if missing:
        raise ModelError(f"rescaling undefined on {sorted(map(str, missing))}")
    dom = sorted(sig)
    if any(sig[a] >= sig[b] for a, b in zip(dom, dom[1:])):
        raise ModelError("rescaling is not strictly increasing")
    rel = {e: sig[x] for e, x in m.relation.items()}
    val = {p: {w: sig[x] for w, x in row.items()} for p, row in m.valuation.items()}
    return KripkeModel(m.worlds, rel, val)


def chain_collapse(m: KripkeModel) -> tuple[KripkeModel, dict]:
    """Rescale ``m`` onto the uniform chain with as many points as it uses.

    Returns the new model and the rescaling used.
    """
    vals = sorted(m.occurring_values() | {ZERO, ONE})
    chain = uniform_chain(len(vals))
    sigma = dict(zip(vals, chain))
    return rescale_model(m, sigma), sigma


# ---------------------------------------------------------------------------
# JSON documents

def model_to_json(m: KripkeModel) -> dict:
    return {
        "worlds": list(m.worlds),
        "relation": [
            {"from": v, "to": w, "value": format_value(m.R(v, w))}
            for v in m.worlds for w in m.worlds if m.R(v, w)
        ],
        "valuation": {
            var: {w: format_value(m.value(var, w)) for w in m.worlds if m.value(var, w)}
            for var in sorted(m.valuation)
        },
    }


def model_from_json(doc: Mapping) -> KripkeModel:
    try:
        worlds = doc["worlds"]
        rel = {}
        for entry in doc.get("relation", []):
            if isinstance(entry, Mapping):
                rel[(entry["from"], entry["to"])] = entry.get("value", "1")
            else:
                v, w = entry
                rel[(v, w)] = "1"
        return KripkeModel(worlds, rel, doc.get("valuation", {}))
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed model document: {exc}") from None


def load_model(path) -> KripkeModel:
    with open(path) as fh:
        return model_from_json(json.load(fh))
