"""Shared hypothesis strategies and small model builders."""
from fractions import Fraction

from hypothesis import strategies as st

from gmk.formula import BOT, And, Box, Dia, Implies, Meta, Or, Var
from gmk.semantics import KripkeModel

VARS = ("p", "q", "r")


def formulas(vars=VARS, modal=True, max_leaves=12):
    atoms = st.sampled_from([BOT] + [Var(v) for v in vars])

    def extend(sub):
        binary = st.sampled_from([And, Or, Implies])
        out = st.builds(lambda op, a, b: op(a, b), binary, sub, sub)
        if modal:
            out = out | st.builds(Box, sub) | st.builds(Dia, sub)
        return out

    return st.recursive(atoms, extend, max_leaves=max_leaves)


def schemes(max_leaves=8):
    atoms = st.sampled_from([BOT, Var("p"), Meta("phi"), Meta("psi"), Meta("chi")])
    return st.recursive(
        atoms,
        lambda sub: st.builds(lambda op, a, b: op(a, b), st.sampled_from([And, Or, Implies]), sub, sub)
        | st.builds(Box, sub) | st.builds(Dia, sub),
        max_leaves=max_leaves,
    )


def chain_values(k=6):
    return st.sampled_from([Fraction(i, k - 1) for i in range(k)])


@st.composite
def crisp_models(draw, max_worlds=3, vars=VARS, k=5):
    n = draw(st.integers(1, max_worlds))
    worlds = [f"w{i}" for i in range(n)]
    pairs = [(a, b) for a in worlds for b in worlds]
    edges = [e for e in pairs if draw(st.booleans())]
    val = {v: {w: draw(chain_values(k)) for w in worlds} for v in vars}
    return KripkeModel.crisp(worlds, edges, val)


@st.composite
def valued_models(draw, max_worlds=3, vars=VARS, k=5):
    n = draw(st.integers(1, max_worlds))
    worlds = [f"w{i}" for i in range(n)]
    rel = {(a, b): draw(chain_values(k)) for a in worlds for b in worlds}
    val = {v: {w: draw(chain_values(k)) for w in worlds} for v in vars}
    return KripkeModel(worlds, rel, val)


def f6_model():
    return KripkeModel.crisp(
        ["x", "y", "z"], [("x", "y"), ("x", "z")],
        {"p": {"x": Fraction(0), "y": Fraction(1, 2), "z": Fraction(1, 3)}},
    )
