"""Checker for Hilbert-style proof scripts.

A script is a list of lines, each stating a formula and the rule that
justifies it. Every line carries a theorem flag: true when it depends on no
premise. Necessitation is only allowed on theorem lines, except for the []
rule in global mode.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .axioms import (
    MP, NEC_BOX, NEC_DIA, NEC_DIA_GEN, AxiomRegistry, RegistryError, resolve_system,
)
from .formula import (
    Box, Dia, Formula, FormulaSyntaxError, Implies, Or, SchemeError, format_formula,
    instantiate_scheme, match_scheme, metavariables, parse_formula,
)


@dataclass(frozen=True)
class Premise:
    index: int


@dataclass(frozen=True)
class Axiom:
    name: str
    subst: Mapping[str, Formula] | None = None  # inferred from the formula when None


@dataclass(frozen=True)
class ModusPonens:
    minor: int  # line stating A
    major: int  # line stating A -> B


@dataclass(frozen=True)
class NecBox:
    ref: int


@dataclass(frozen=True)
class NecDia:
    ref: int


@dataclass(frozen=True)
class NecDiaGen:
    ref: int


Justification = Union[Premise, Axiom, ModusPonens, NecBox, NecDia, NecDiaGen]


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Diagnostic:
    line: int | None
    kind: str
    message: str

    def __str__(self):
        where = f"line {self.line}: " if self.line is not None else ""
        return f"{where}{self.kind}: {self.message}"


@dataclass(frozen=True)
class LineCheck:
    ok: bool
    theorem_flag: bool
    diagnostic: Diagnostic | None = None


@dataclass
class ProofScript:
    system: str = "GKc"
    presentation: str | None = None
    mode: str = "local"
    extensions: tuple = ()
    premises: list = field(default_factory=list)
    lines: list = field(default_factory=list)

    def registry(self) -> AxiomRegistry:
        return resolve_system(self.system, self.extensions, self.mode, self.presentation)


@dataclass(frozen=True)
class ProofResult:
    ok: bool
    conclusion: Formula | None
    premise_dependent: bool
    first_error: Diagnostic | None
    flags: tuple = ()


class ScriptFormatError(ValueError):
    pass


def _refs(just: Justification) -> tuple:
    if isinstance(just, ModusPonens):
        return (just.minor, just.major)
    if isinstance(just, (NecBox, NecDia, NecDiaGen)):
        return (just.ref,)
    return ()


def check_line(registry: AxiomRegistry, premises: Sequence[Formula],
               earlier: Sequence[tuple[Formula, bool]], line: ProofLine) -> LineCheck:
    """Check one line against the registry.

    ``earlier`` holds (formula, theorem_flag) for the preceding lines.
    """
    idx = len(earlier)
    just, f = line.justification, line.formula

    def fail(kind, msg):
        return LineCheck(False, False, Diagnostic(idx, kind, msg))

    for r in _refs(just):
        if not 0 <= r < idx:
            return fail("bad-reference", f"reference {r} does not point to an earlier line")

    if isinstance(just, Premise):
        if not 0 <= just.index < len(premises):
            return fail("bad-reference", f"no premise {just.index}")
        if premises[just.index] != f:
            return fail("shape", f"premise {just.index} is {format_formula(premises[just.index])}")
        return LineCheck(True, False)

    if isinstance(just, Axiom):
        scheme = registry.axiom_schemes.get(just.name)
        if scheme is None:
            return fail("rule-not-in-registry", f"axiom {just.name} is not part of {registry.describe()}")
        if just.subst is None:
            if match_scheme(scheme, f) is None:
                return fail("shape", f"not an instance of {just.name}")
            return LineCheck(True, True)
        extra = set(just.subst) - set(metavariables(scheme))
        if extra:
            return fail("shape", f"{just.name} has no metavariables {sorted(extra)}")
        try:
            inst = instantiate_scheme(scheme, just.subst)
        except SchemeError as exc:
            return fail("shape", str(exc))
        if inst != f:
            return fail("shape", f"{just.name} instance is {format_formula(inst)}")
        return LineCheck(True, True)

    if isinstance(just, ModusPonens):
        if MP not in registry.rules:
            return fail("rule-not-in-registry", "modus ponens unavailable")
        (a, fa), (b, fb) = earlier[just.minor], earlier[just.major]
        if b != Implies(a, f):
            return fail("shape", f"line {just.major} is not {format_formula(Implies(a, f))}")
        return LineCheck(True, fa and fb)

    if isinstance(just, NecBox):
        if NEC_BOX not in registry.rules:
            return fail("rule-not-in-registry", "[] necessitation unavailable")
        a, fa = earlier[just.ref]
        if f != Box(a):
            return fail("shape", f"expected {format_formula(Box(a))}")
        if registry.box_unrestricted:
            return LineCheck(True, fa)
        if not fa:
            return fail("restricted-rule-violation", f"line {just.ref} depends on premises")
        return LineCheck(True, True)

    if isinstance(just, NecDia):
        if NEC_DIA not in registry.rules:
            return fail("rule-not-in-registry", "<> necessitation unavailable")
        a, fa = earlier[just.ref]
        if not isinstance(a, Implies):
            return fail("shape", f"line {just.ref} is not an implication")
        want = Implies(Dia(a.left), Dia(a.right))
        if f != want:
            return fail("shape", f"expected {format_formula(want)}")
        if not fa:
            return fail("restricted-rule-violation", f"line {just.ref} depends on premises")
        return LineCheck(True, True)

    if isinstance(just, NecDiaGen):
        if NEC_DIA_GEN not in registry.rules:
            return fail("rule-not-in-registry", "generalised <> rule unavailable")
        a, fa = earlier[just.ref]
        if not (isinstance(a, Or) and isinstance(a.left, Implies)):
            return fail("shape", f"line {just.ref} is not of the form (A -> B) | C")
        imp = a.left
        want = Or(Implies(Dia(imp.left), Dia(imp.right)), Dia(a.right))
        if f != want:
            return fail("shape", f"expected {format_formula(want)}")
        if not fa:
            return fail("restricted-rule-violation", f"line {just.ref} depends on premises")
        return LineCheck(True, True)

    raise TypeError(f"unknown justification {just!r}")


def check_proof(script: ProofScript) -> ProofResult:
    """Check every line in order; stop at the first failure."""
    try:
        registry = script.registry()
    except RegistryError as exc:
        return ProofResult(False, None, False, Diagnostic(None, "system", str(exc)))
    if not script.lines:
        return ProofResult(False, None, False, Diagnostic(None, "empty", "script has no lines"))
    earlier: list[tuple[Formula, bool]] = []
    for line in script.lines:
        res = check_line(registry, script.premises, earlier, line)
        if not res.ok:
            return ProofResult(False, None, False, res.diagnostic, tuple(f for _, f in earlier))
        earlier.append((line.formula, res.theorem_flag))
    concl, flag = earlier[-1]
    return ProofResult(True, concl, not flag, None, tuple(f for _, f in earlier))


# ---------------------------------------------------------------------------
# JSON scripts

_RULES = {"premise", "axiom", "mp", "nec_box", "nec_dia", "nec_dia_gen"}


def _line_from_json(i: int, doc: Mapping) -> ProofLine:
    rule = doc.get("rule")
    if rule not in _RULES:
        raise ScriptFormatError(f"line {i}: unknown rule {rule!r}")
    f = parse_formula(doc["formula"])
    refs = doc.get("refs", [])
    try:
        if rule == "premise":
            just = Premise(int(doc.get("index", refs[0] if refs else 0)))
        elif rule == "axiom":
            subst = doc.get("subst")
            if subst is not None:
                subst = {k.lstrip("?"): parse_formula(v) for k, v in subst.items()}
            just = Axiom(doc["name"], subst)
        elif rule == "mp":
            just = ModusPonens(int(refs[0]), int(refs[1]))
        else:
            cls = {"nec_box": NecBox, "nec_dia": NecDia, "nec_dia_gen": NecDiaGen}[rule]
            just = cls(int(refs[0]))
    except (IndexError, KeyError, TypeError, ValueError) as exc:
        raise ScriptFormatError(f"line {i}: malformed {rule} line ({exc})") from None
    return ProofLine(f, just)


def script_from_json(doc: Mapping) -> ProofScript:
    try:
        premises = [parse_formula(p) for p in doc.get("premises", [])]
        lines = [_line_from_json(i, d) for i, d in enumerate(doc.get("lines", []))]
    except FormulaSyntaxError as exc:
        raise ScriptFormatError(str(exc)) from None
    return ProofScript(
        system=doc.get("system", "GKc"),
        presentation=doc.get("presentation"),
        mode=doc.get("mode", "local"),
        extensions=tuple(doc.get("extensions", ())),
        premises=premises,
        lines=lines,
    )


def _line_to_json(line: ProofLine) -> dict:
    j = line.justification
    out = {"formula": format_formula(line.formula)}
    if isinstance(j, Premise):
        out.update(rule="premise", index=j.index)
    elif isinstance(j, Axiom):
        out.update(rule="axiom", name=j.name)
        if j.subst is not None:
            out["subst"] = {k: format_formula(v) for k, v in sorted(j.subst.items())}
    elif isinstance(j, ModusPonens):
        out.update(rule="mp", refs=[j.minor, j.major])
    else:
        rule = {NecBox: "nec_box", NecDia: "nec_dia", NecDiaGen: "nec_dia_gen"}[type(j)]
        out.update(rule=rule, refs=[j.ref])
    return out


def script_to_json(script: ProofScript) -> dict:
    doc = {"system": script.system}
    if script.presentation:
        doc["presentation"] = script.presentation
    doc["mode"] = script.mode
    doc["extensions"] = list(script.extensions)
    doc["premises"] = [format_formula(p) for p in script.premises]
    doc["lines"] = [_line_to_json(l) for l in script.lines]
    return doc


def load_script(path) -> ProofScript:
    with open(path) as fh:
        return script_from_json(json.load(fh))


def dump_script(script: ProofScript) -> str:
    """JSON text with one proof line per text line, for readable diffs."""
    doc = script_to_json(script)
    lines = doc.pop("lines")
    head = ",\n".join(f" {json.dumps(k)}: {json.dumps(v)}" for k, v in doc.items())
    body = ",\n".join("  " + json.dumps(l) for l in lines)
    return "{\n" + head + ',\n "lines": [\n' + body + "\n ]\n}\n"
