"""Bi-modal Goedel logic over Kripke models with [0,1]-valued worlds.

Formulas, exact evaluation, Hilbert proof checking, bounded counter-model
search and soundness fuzzing, and complex-algebra experiments.
"""
from .formula import Formula, format_formula, parse_formula, parse_scheme
from .semantics import KripkeModel, evaluate, evaluate_rows, decide_prop_validity

__all__ = [
    "Formula", "KripkeModel", "decide_prop_validity", "evaluate", "evaluate_rows",
    "format_formula", "parse_formula", "parse_scheme",
]
