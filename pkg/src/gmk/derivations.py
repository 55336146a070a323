"""Authoring helpers for Hilbert scripts, and the shipped derivations.

Derivations are written as trees that may use temporary hypotheses;
:func:`discharge` turns a tree depending on hypothesis ``h`` into a tree for
``h -> A`` using only A1, A8, A9, A13 and modus ponens (the usual deduction
theorem construction). :func:`to_script` linearises a closed tree into proof
lines, sharing identical subderivations.

Run ``python -m gmk.derivations DIR`` to regenerate the ``.proof`` files.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

from .axioms import SCHEMES
from .formula import (
    BOT, TOP, And, Box, Dia, Formula, Implies, Or, Var, format_formula,
    instantiate_scheme, neg,
)
from .proof import (
    Axiom, ModusPonens, NecBox, NecDia, NecDiaGen, Premise, ProofLine, ProofScript,
    dump_script,
)


class DerivationError(ValueError):
    pass


@dataclass(eq=False)
class D:
    """A derivation tree node proving ``formula``."""

    kind: str
    formula: Formula
    args: tuple = ()
    data: object = None
    hyps: frozenset = field(default=frozenset())


def ax(name: str, **subst: Formula) -> D:
    return D("axiom", instantiate_scheme(SCHEMES[name], subst), data=(name, tuple(sorted(subst.items()))))


def premise(index: int, formula: Formula) -> D:
    return D("premise", formula, data=index)


def hyp(formula: Formula) -> D:
    return D("hyp", formula, hyps=frozenset([formula]))


def mp(minor: D, major: D) -> D:
    f = major.formula
    if not (isinstance(f, Implies) and f.left == minor.formula):
        raise DerivationError(
            f"modus ponens mismatch: {format_formula(minor.formula)} against {format_formula(f)}")
    return D("mp", f.right, (minor, major), hyps=minor.hyps | major.hyps)


def _nec(kind: str, formula: Formula, t: D) -> D:
    if t.hyps:
        raise DerivationError(f"{kind} applied under open hypotheses")
    return D(kind, formula, (t,))


def nec_box(t: D) -> D:
    return _nec("nec_box", Box(t.formula), t)


def nec_dia(t: D) -> D:
    f = t.formula
    return _nec("nec_dia", Implies(Dia(f.left), Dia(f.right)), t)


def nec_dia_gen(t: D) -> D:
    f = t.formula
    imp = f.left
    return _nec("nec_dia_gen", Or(Implies(Dia(imp.left), Dia(imp.right)), Dia(f.right)), t)


def discharge(h: Formula, t: D) -> D:
    """From a derivation of A that may use hypothesis ``h``, derive ``h -> A``."""
    a = t.formula
    if h not in t.hyps:
        return mp(t, ax("A1", phi=a, psi=h))
    if t.kind == "hyp":
        return mp(ax("A1", phi=h, psi=h), ax("A13", phi=h, psi=h))
    if t.kind != "mp":
        raise DerivationError(f"cannot discharge through a {t.kind} step")
    minor, major = t.args
    alpha = minor.formula
    d_minor = discharge(h, minor)                      # h -> alpha
    d_major = discharge(h, major)                      # h -> (alpha -> a)
    swapped = mp(d_major, ax("A9", phi=h, psi=alpha, chi=a))        # alpha -> (h -> a)
    chained = mp(swapped, ax("A8", phi=alpha, psi=Implies(h, a), chi=h))
    twice = mp(d_minor, chained)                       # h -> (h -> a)
    return mp(twice, ax("A13", phi=h, psi=a))


# small natural-deduction kit ------------------------------------------------

def conj_intro(a: D, b: D) -> D:
    return mp(b, mp(a, ax("A4", phi=a.formula, psi=b.formula)))


def conj_left(t: D) -> D:
    f = t.formula
    return mp(t, ax("A2", phi=f.left, psi=f.right))


def conj_right(t: D) -> D:
    f = t.formula
    return mp(t, ax("A3", phi=f.left, psi=f.right))


def or_left(t: D, other: Formula) -> D:
    """A |- A | other."""
    return mp(t, ax("A6", phi=t.formula, psi=other))


def or_right(t: D, other: Formula) -> D:
    """B |- other | B."""
    return mp(t, ax("A7", phi=other, psi=t.formula))


def or_elim(t: D, left: D, right: D) -> D:
    """A | B, A -> C, B -> C |- C."""
    f = t.formula
    c = left.formula.right
    case = ax("A10", phi=f.left, psi=f.right, chi=c)
    return mp(t, mp(conj_intro(left, right), case))


def ex_falso(t: D, goal: Formula) -> D:
    return mp(t, conj_left(ax("A5", phi=goal)))


def top() -> D:
    return conj_left(ax("A5", phi=BOT))


def compose(f: D, g: D) -> D:
    """A -> B, B -> C |- A -> C."""
    a = f.formula.left
    return discharge(a, mp(mp(hyp(a), f), g))


def identity(a: Formula) -> D:
    return discharge(a, hyp(a))


# linearisation ---------------------------------------------------------------

def to_script(t: D, system="GKc", presentation=None, mode="local", premises=()) -> ProofScript:
    if t.hyps:
        raise DerivationError("derivation still has open hypotheses: "
                              + ", ".join(format_formula(h) for h in t.hyps))
    lines: list[ProofLine] = []
    index: dict = {}
    seen: dict[int, int] = {}

    def emit(node: D) -> int:
        if id(node) in seen:
            return seen[id(node)]
        refs = tuple(emit(a) for a in node.args)
        key = (node.kind, node.formula, node.data, refs)
        if key not in index:
            if node.kind == "axiom":
                name, subst = node.data
                just = Axiom(name, dict(subst))
            elif node.kind == "premise":
                just = Premise(node.data)
            elif node.kind == "mp":
                just = ModusPonens(*refs)
            elif node.kind == "nec_box":
                just = NecBox(refs[0])
            elif node.kind == "nec_dia":
                just = NecDia(refs[0])
            elif node.kind == "nec_dia_gen":
                just = NecDiaGen(refs[0])
            else:
                raise DerivationError(f"cannot linearise {node.kind}")
            index[key] = len(lines)
            lines.append(ProofLine(node.formula, just))
        seen[id(node)] = index[key]
        return index[key]

    last = emit(t)
    if last != len(lines) - 1:
        # conclusion was shared with an earlier line; restate it last
        lines.append(lines[last])
    return ProofScript(system, presentation, mode, (), list(premises), lines)


# the shipped derivations -----------------------------------------------------

p, q, r = Var("p"), Var("q"), Var("r")


def bot_box() -> D:
    """0 -> []0."""
    return conj_left(ax("A5", phi=Box(BOT)))


def z_dia() -> D:
    """<>~~p -> ~~<>p, through FS1, F_dia and FS2."""
    np_, nnp = neg(p), neg(neg(p))
    # <>~~p -> ~[]~p
    via_fs1 = mp(hyp(Box(np_)), mp(hyp(Dia(nnp)), ax("FS1", phi=np_, psi=BOT)))
    absurd = mp(via_fs1, ax("F_dia"))
    step1 = discharge(Dia(nnp), discharge(Box(np_), absurd))
    # ~<>p -> []~p
    dia_to_boxbot = discharge(Dia(p), ex_falso(mp(hyp(Dia(p)), hyp(neg(Dia(p)))), Box(BOT)))
    step2 = discharge(neg(Dia(p)), mp(dia_to_boxbot, ax("FS2", phi=p, psi=BOT)))
    # contraposition: ~[]~p -> ~~<>p
    inner = mp(mp(hyp(neg(Dia(p))), step2), hyp(neg(Box(np_))))
    step3 = discharge(neg(Box(np_)), discharge(neg(Dia(p)), inner))
    return compose(step1, step3)


def boxbot_excluded_middle() -> D:
    """[]0 | ~[]0, from Cr and FS1 (needs the FS1 presentation)."""
    bb = Box(BOT)
    box_bot_or_top = nec_box(or_right(top(), BOT))
    split = mp(box_bot_or_top, ax("Cr", phi=BOT, psi=TOP))              # []0 | <>1
    absurd = mp(mp(hyp(bb), mp(hyp(Dia(TOP)), ax("FS1", phi=BOT, psi=BOT))), ax("F_dia"))
    dia_top_not_bb = discharge(Dia(TOP), discharge(bb, absurd))         # <>1 -> ~[]0
    return or_elim(
        split,
        ax("A6", phi=bb, psi=neg(bb)),
        compose(dia_top_not_bb, ax("A7", phi=bb, psi=neg(bb))),
    )


def t3() -> D:
    """([]p -> <>p) | []0."""
    bb = Box(BOT)
    goal_left = Implies(Box(p), Dia(p))
    widen = mp(nec_box(ax("A7", phi=BOT, psi=p)), ax("K_box", phi=p, psi=Or(BOT, p)))
    split = compose(widen, ax("Cr", phi=BOT, psi=p))                    # []p -> []0 | <>p
    case_bb = ax("A7", phi=goal_left, psi=bb)
    from_bb = discharge(bb, ex_falso(mp(hyp(bb), hyp(neg(bb))), Dia(p)))
    dp = or_elim(mp(hyp(Box(p)), split), from_bb, identity(Dia(p)))
    case_not_bb = discharge(neg(bb), or_left(discharge(Box(p), dp), bb))
    return or_elim(boxbot_excluded_middle(), case_bb, case_not_bb)


def t1() -> D:
    """[](p & q) <-> []p & []q."""
    pq = And(p, q)
    to_p = mp(nec_box(ax("A2", phi=p, psi=q)), ax("K_box", phi=pq, psi=p))
    to_q = mp(nec_box(ax("A3", phi=p, psi=q)), ax("K_box", phi=pq, psi=q))
    h = hyp(Box(pq))
    forward = discharge(Box(pq), conj_intro(mp(h, to_p), mp(h, to_q)))
    pair = mp(nec_box(ax("A4", phi=p, psi=q)), ax("K_box", phi=p, psi=Implies(q, pq)))
    k2 = ax("K_box", phi=q, psi=pq)
    h2 = hyp(And(Box(p), Box(q)))
    back = discharge(h2.formula, mp(conj_right(h2), mp(mp(conj_left(h2), pair), k2)))
    return conj_intro(forward, back)


def r_dia(t: D) -> D:
    """From a derivation of A | (B -> C) derive <>A | (<>B -> <>C), via [] necessitation, Cr and P."""
    f = t.formula
    a, imp = f.left, f.right
    b, c = imp.left, imp.right
    swapped = or_elim(t, ax("A7", phi=imp, psi=a), ax("A6", phi=imp, psi=a))   # (B -> C) | A
    split = mp(nec_box(swapped), ax("Cr", phi=imp, psi=a))                       # [](B->C) | <>A
    tail = Implies(Dia(b), Dia(c))
    return or_elim(
        split,
        compose(ax("P", phi=b, psi=c), ax("A7", phi=Dia(a), psi=tail)),
        ax("A6", phi=Dia(a), psi=tail),
    )


def build_all() -> dict[str, ProofScript]:
    prelin = ax("A14", phi=r, psi=q)                                    # (r -> q) | (q -> r)
    rdia_premise = Or(p, Implies(q, r))
    return {
        "bot_box": to_script(bot_box(), presentation="P"),
        "t1": to_script(t1(), presentation="P"),
        "t3": to_script(t3(), presentation="FS1"),
        "z_dia": to_script(z_dia(), presentation="FS1"),
        "r_dia": to_script(r_dia(prelin), presentation="P"),
        "r_dia_global": to_script(r_dia(premise(0, rdia_premise)), presentation="P",
                                  mode="global", premises=[rdia_premise]),
        "nec_premise": ProofScript("GKc", "P", "local", (), [p], [
            ProofLine(p, Premise(0)), ProofLine(Box(p), NecBox(0))]),
    }


def write_all(directory) -> list[Path]:
    out = []
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, script in build_all().items():
        path = directory / f"{name}.proof"
        path.write_text(dump_script(script))
        out.append(path)
    return out


if __name__ == "__main__":
    for path in write_all(sys.argv[1] if len(sys.argv) > 1 else "proofs"):
        print(path)
