"""Complex algebras of finite crisp frames.

Elements are tuples of truth values indexed by the frame's worlds. The
propositional operations act pointwise; box and diamond take the minimum and
maximum over successors (1 and 0 at dead ends). Closures are computed on
value ranks: no operation ever leaves the set of coordinates of the
generators together with 0 and 1.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .axioms import EXTENSIONS, FRAME_PROPERTY, SCHEMES
from .formula import (
    BOT, TOP, And, Bot, Box, Dia, Formula, Implies, Meta, Or, Scheme, Var, format_formula,
)
from .frames import frame_properties
from .semantics import ONE, ZERO, KripkeModel, ModelError, format_value, truth_value

Element = tuple  # tuple of Fractions, one per world

PROPOSITIONAL_OPS = ("and", "or", "implies")
MODAL_OPS = ("box", "dia")


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class CrispFrame:
    worlds: tuple
    relation: frozenset = frozenset()

    def __post_init__(self):
        worlds = tuple(self.worlds)
        if not worlds:
            raise AlgebraError("a frame needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise AlgebraError("duplicate world identifiers")
        rel = frozenset(tuple(e) for e in self.relation)
        bad = [e for e in rel if e[0] not in worlds or e[1] not in worlds]
        if bad:
            raise AlgebraError(f"relation mentions unknown worlds: {sorted(bad)}")
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "relation", rel)

    @classmethod
    def of_model(cls, m: KripkeModel) -> "CrispFrame":
        if not m.is_crisp:
            raise ModelError("model is not crisp")
        return cls(m.worlds, frozenset(m.edges()))

    def successors(self) -> list[list[int]]:
        idx = {w: i for i, w in enumerate(self.worlds)}
        succ = [[] for _ in self.worlds]
        for v, w in sorted(self.relation, key=lambda e: (idx[e[0]], idx[e[1]])):
            succ[idx[v]].append(idx[w])
        return succ

    def to_json(self) -> dict:
        idx = {w: i for i, w in enumerate(self.worlds)}
        return {"worlds": list(self.worlds),
                "relation": [list(e) for e in sorted(self.relation, key=lambda e: (idx[e[0]], idx[e[1]]))]}


def frame_from_json(doc: Mapping) -> CrispFrame:
    try:
        return CrispFrame(doc["worlds"], frozenset(tuple(e) for e in doc.get("relation", [])))
    except (KeyError, TypeError) as exc:
        raise AlgebraError(f"malformed frame document: {exc}") from None


def load_frame(path) -> CrispFrame:
    with open(path) as fh:
        return frame_from_json(json.load(fh))


def element(values: Iterable) -> Element:
    return tuple(truth_value(v) for v in values)


def parse_element(text: str) -> Element:
    """``"0,1/2,1/3"`` -> (0, 1/2, 1/3)."""
    return element(x for x in text.replace("<", "").replace(">", "").split(","))


def format_element(g: Element) -> str:
    return "<" + ", ".join(map(format_value, g)) + ">"


def _check_len(frame: CrispFrame, g: Element):
    if len(g) != len(frame.worlds):
        raise AlgebraError(f"element has {len(g)} coordinates, frame has {len(frame.worlds)} worlds")


def _box(succ, top, g):
    return tuple(min((g[w] for w in s), default=top) for s in succ)


def _dia(succ, g):
    return tuple(max((g[w] for w in s), default=0) for s in succ)


def complex_op(frame: CrispFrame, op: str, g: Element) -> Element:
    """Apply ``box`` or ``dia`` of the complex algebra of ``frame`` to ``g``."""
    _check_len(frame, g)
    g = element(g)
    succ = frame.successors()
    if op == "box":
        return _box(succ, ONE, g)
    if op == "dia":
        return _dia(succ, g)
    raise AlgebraError(f"unknown modal operation {op!r}")


def pointwise(op: str, g: Element, h: Element) -> Element:
    fn = {"and": min, "or": max, "implies": lambda a, b: ONE if a <= b else b}[op]
    return tuple(map(fn, g, h))


@dataclass
class SubalgebraClosure:
    generators: tuple
    op_set: frozenset
    elements: list                      # canonical (lexicographic) order
    traces: dict = field(default_factory=dict)  # element -> witnessing term

    def __contains__(self, g) -> bool:
        return tuple(g) in self.traces

    def __len__(self):
        return len(self.elements)

    def trace(self, g: Element) -> str:
        return format_formula(self.traces[tuple(g)])

    def to_json(self) -> dict:
        return {
            "generators": [[format_value(x) for x in g] for g in self.generators],
            "ops": sorted(self.op_set),
            "size": len(self.elements),
            "elements": [{"value": [format_value(x) for x in g], "term": self.trace(g)}
                         for g in self.elements],
        }


def _closure_ranks(succ, top, gens: Sequence[tuple], names: Sequence[str], ops: frozenset):
    """Work-list fixpoint on rank tuples. Returns {element: term}."""
    n = len(succ)
    found: dict[tuple, Formula] = {}
    order: list[tuple] = []

    def add(g, term):
        if g not in found:
            found[g] = term
            order.append(g)

    add((0,) * n, BOT)
    add((top,) * n, TOP)
    for g, name in zip(gens, names):
        add(g, Var(name))
    done = 0
    while done < len(order):
        g = order[done]
        tg = found[g]
        done += 1
        if "box" in ops:
            add(_box(succ, top, g), Box(tg))
        if "dia" in ops:
            add(_dia(succ, g), Dia(tg))
        for h in order[:done]:
            th = found[h]
            for a, b, ta, tb in ((g, h, tg, th), (h, g, th, tg)):
                add(tuple(map(min, a, b)), And(ta, tb))
                add(tuple(map(max, a, b)), Or(ta, tb))
                add(tuple(top if x <= y else y for x, y in zip(a, b)), Implies(ta, tb))
    return found


def _to_ranks(elements: Sequence[Element]) -> tuple[list[Fraction], list[tuple]]:
    values = sorted({ZERO, ONE}.union(*map(set, elements)) if elements else {ZERO, ONE})
    rank = {x: i for i, x in enumerate(values)}
    return values, [tuple(rank[x] for x in g) for g in elements]


def generator_names(count: int) -> list[str]:
    return ["g"] if count == 1 else [f"g{i + 1}" for i in range(count)]


def generate_subalgebra(frame: CrispFrame, generators: Iterable[Element], op_set: Iterable[str] = (),
                        names: Sequence[str] | None = None) -> SubalgebraClosure:
    """Least set containing the generators, 0 and 1 that is closed under the
    propositional operations and the modal operations in ``op_set``."""
    gens = [element(g) for g in generators]
    for g in gens:
        _check_len(frame, g)
    ops = frozenset(op_set) - set(PROPOSITIONAL_OPS)
    if not ops <= set(MODAL_OPS):
        raise AlgebraError(f"unknown operations {sorted(ops - set(MODAL_OPS))}")
    names = list(names) if names is not None else generator_names(len(gens))
    values, rgens = _to_ranks(gens)
    found = _closure_ranks(frame.successors(), len(values) - 1, rgens, names, ops)
    traces = {tuple(values[i] for i in g): t for g, t in found.items()}
    return SubalgebraClosure(tuple(gens), frozenset(ops) | set(PROPOSITIONAL_OPS),
                             sorted(traces), traces)


# ---------------------------------------------------------------------------
# non-interdefinability

def nondefinability_report(frame: CrispFrame, generator: Element) -> dict:
    """Do box(g) and dia(g) escape the mono-modal subalgebras generated by g?"""
    g = element(generator)
    a_dia = generate_subalgebra(frame, [g], {"dia"})
    a_box = generate_subalgebra(frame, [g], {"box"})
    box_img = complex_op(frame, "box", g)
    dia_img = complex_op(frame, "dia", g)
    box_escapes = box_img not in a_dia
    dia_escapes = dia_img not in a_box
    return {
        "generator": [format_value(x) for x in g],
        "dia_subalgebra": a_dia.to_json(),
        "box_subalgebra": a_box.to_json(),
        "box_image": [format_value(x) for x in box_img],
        "dia_image": [format_value(x) for x in dia_img],
        "box_escapes_dia_subalgebra": box_escapes,
        "dia_escapes_box_subalgebra": dia_escapes,
        "box_not_definable_from_dia": box_escapes,
        "dia_not_definable_from_box": dia_escapes,
    }


# ---------------------------------------------------------------------------
# optimal models and frame correspondence

@dataclass
class RPlus:
    relation: frozenset
    subalgebra: SubalgebraClosure
    is_optimal: bool


def model_subalgebra(m: KripkeModel) -> SubalgebraClosure:
    """Closure of the variables' value rows under all five operations.

    Every formula's row of values lies in this set and every element is the
    row of some formula.
    """
    frame = CrispFrame.of_model(m)
    names = sorted(m.valuation)
    rows = [tuple(m.value(p, w) for w in m.worlds) for p in names]
    return generate_subalgebra(frame, rows, MODAL_OPS, names=names)


def _rank_setup(m: KripkeModel, sub: SubalgebraClosure):
    values, ranked = _to_ranks(sub.elements)
    return values, ranked, len(values) - 1


def compute_R_plus(m: KripkeModel) -> RPlus:
    """The largest relation with the same evaluations as ``m``.

    (v, w) is in R+ iff box(g)(v) <= g(w) <= dia(g)(v) for every g in the
    model's subalgebra, which ranges over the value rows of all formulas.
    """
    frame = CrispFrame.of_model(m)
    sub = model_subalgebra(m)
    succ = frame.successors()
    _, ranked, top = _rank_setup(m, sub)
    boxes = [_box(succ, top, g) for g in ranked]
    dias = [_dia(succ, g) for g in ranked]
    n = len(m.worlds)
    rel = set()
    for v in range(n):
        for w in range(n):
            if all(b[v] <= g[w] <= d[v] for g, b, d in zip(ranked, boxes, dias)):
                rel.add((m.worlds[v], m.worlds[w]))
    rel = frozenset(rel)
    return RPlus(rel, sub, rel == frame.relation)


def optimal_model(m: KripkeModel) -> KripkeModel:
    """``m`` with its relation replaced by R+."""
    return KripkeModel.crisp(m.worlds, compute_R_plus(m).relation, m.valuation)


def _rank_scheme(s: Scheme, succ, top, assignment: Mapping[str, tuple]) -> tuple:
    t = type(s)
    if t is Meta:
        return assignment[s.name]
    if t is Bot:
        return (0,) * len(succ)
    if t is Var:
        raise AlgebraError("schemes for validity checks must not contain propositional variables")
    if t is And:
        return tuple(map(min, _rank_scheme(s.left, succ, top, assignment), _rank_scheme(s.right, succ, top, assignment)))
    if t is Or:
        return tuple(map(max, _rank_scheme(s.left, succ, top, assignment), _rank_scheme(s.right, succ, top, assignment)))
    if t is Implies:
        a = _rank_scheme(s.left, succ, top, assignment)
        b = _rank_scheme(s.right, succ, top, assignment)
        return tuple(top if x <= y else y for x, y in zip(a, b))
    if t is Box:
        return _box(succ, top, _rank_scheme(s.inner, succ, top, assignment))
    if t is Dia:
        return _dia(succ, _rank_scheme(s.inner, succ, top, assignment))
    raise TypeError(f"not a scheme: {s!r}")


def validates_scheme(m: KripkeModel, s: Scheme, sub: SubalgebraClosure | None = None) -> bool:
    """Every instance of ``s`` is 1 at every world of ``m``.

    Metavariables range over the model subalgebra, which is exactly the set of
    value rows of formulas, so this finite check decides scheme validity.
    """
    frame = CrispFrame.of_model(m)
    sub = sub or model_subalgebra(m)
    succ = frame.successors()
    _, ranked, top = _rank_setup(m, sub)
    from .formula import metavariables
    metas = metavariables(s)
    for combo in itertools.product(ranked, repeat=len(metas)):
        row = _rank_scheme(s, succ, top, dict(zip(metas, combo)))
        if any(x != top for x in row):
            return False
    return True


CORRESPONDENCE = {FRAME_PROPERTY[e]: EXTENSIONS[e] for e in EXTENSIONS}


def frame_report(m: KripkeModel) -> dict:
    """Frame properties, scheme validity, optimality and the correspondence rows."""
    frame = CrispFrame.of_model(m)
    props = frame_properties(frame.worlds, frame.relation)
    rp = compute_R_plus(m)
    schemes = {name: validates_scheme(m, SCHEMES[name], rp.subalgebra)
               for names in EXTENSIONS.values() for name in names}
    rows = {}
    for prop, names in CORRESPONDENCE.items():
        valid = all(schemes[n] for n in names)
        rows[prop] = {"property": props[prop], "schemes_valid": valid, "agree": props[prop] == valid}
    idx = {w: i for i, w in enumerate(m.worlds)}
    return {
        "properties": props,
        "schemes": schemes,
        "optimal": rp.is_optimal,
        "R_plus": [list(e) for e in sorted(rp.relation, key=lambda e: (idx[e[0]], idx[e[1]]))],
        "subalgebra_size": len(rp.subalgebra),
        "correspondence": rows if rp.is_optimal else None,
        "seriality_row": rows["serial"],
    }
