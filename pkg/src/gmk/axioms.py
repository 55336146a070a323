"""Axiom schemes and the systems assembled from them."""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

from .formula import Scheme, parse_scheme

_SCHEME_TEXT = {
    # propositional Goedel logic
    "A1": "?phi -> (?psi -> ?phi)",
    "A2": "?phi & ?psi -> ?phi",
    "A3": "?phi & ?psi -> ?psi",
    "A4": "?phi -> (?psi -> ?phi & ?psi)",
    "A5": "(0 -> ?phi) & (?phi -> 1)",
    "A6": "?phi -> ?phi | ?psi",
    "A7": "?psi -> ?phi | ?psi",
    "A8": "(?phi -> ?psi) -> ((?chi -> ?phi) -> (?chi -> ?psi))",
    "A9": "(?phi -> (?psi -> ?chi)) -> (?psi -> (?phi -> ?chi))",
    "A10": "(?phi -> ?chi) & (?psi -> ?chi) -> (?phi | ?psi -> ?chi)",
    "A11": "(?phi -> (?psi -> ?chi)) -> (?phi & ?psi -> ?chi)",
    "A12": "(?chi -> ?phi) & (?chi -> ?psi) -> (?chi -> ?phi & ?psi)",
    "A13": "(?phi -> (?phi -> ?psi)) -> (?phi -> ?psi)",
    "A14": "(?phi -> ?psi) | (?psi -> ?phi)",
    # modal
    "K_box": "[](?phi -> ?psi) -> ([]?phi -> []?psi)",
    "K_dia": "<>(?phi | ?psi) -> (<>?phi | <>?psi)",
    "FS1": "<>(?phi -> ?psi) -> ([]?phi -> <>?psi)",
    "FS2": "(<>?phi -> []?psi) -> [](?phi -> ?psi)",
    "F_dia": "~<>0",
    "P": "[](?phi -> ?psi) -> (<>?phi -> <>?psi)",
    "Cr": "[](?phi | ?psi) -> ([]?phi | <>?psi)",
    "Z_box": "~~[]?phi -> []~~?phi",
    "Z_dia": "<>~~?phi -> ~~<>?phi",
    "C": "[]([]?phi | ?psi) -> []?phi | []?psi",
    # frame extensions
    "T_box": "[]?phi -> ?phi",
    "T_dia": "?phi -> <>?phi",
    "4_box": "[]?phi -> [][]?phi",
    "4_dia": "<><>?phi -> <>?phi",
    "B_1": "?phi -> []<>?phi",
    "B_2": "<>[]?phi -> ?phi",
    "5_1": "<>?phi -> []<>?phi",
    "5_2": "<>[]?phi -> []?phi",
    "D": "<>1",
}

# Derived theorems checked semantically rather than registered as axioms.
_THEOREM_TEXT = {
    "T1": "[](?phi & ?psi) <-> []?phi & []?psi",
    "T2": "(([]?phi -> <>?psi) -> <>?psi) -> [](( ?phi -> ?psi) -> ?psi) | <>?psi",
    "T3": "([]?phi -> <>?phi) | []0",
    "T_lt_box": "(([]?psi -> []?phi) -> []?phi) -> (([](( ?psi -> ?phi) -> ?phi) -> []?phi) -> []?phi)",
    "T_lt_dia": "((<>?psi -> <>?phi) -> <>?phi) -> <>((?psi -> ?phi) -> ?phi)",
}

SCHEMES: Mapping[str, Scheme] = MappingProxyType({k: parse_scheme(v) for k, v in _SCHEME_TEXT.items()})
THEOREMS: Mapping[str, Scheme] = MappingProxyType({k: parse_scheme(v) for k, v in _THEOREM_TEXT.items()})

PROPOSITIONAL = tuple(f"A{i}" for i in range(1, 15))

EXTENSIONS = {
    "T": ("T_box", "T_dia"),
    "4": ("4_box", "4_dia"),
    "B": ("B_1", "B_2"),
    "5": ("5_1", "5_2"),
    "D": ("D",),
}

# frame property characterised by each extension
FRAME_PROPERTY = {
    "T": "reflexive",
    "4": "transitive",
    "B": "symmetric",
    "5": "euclidean",
    "D": "serial",
}

SYSTEMS = ("G", "GK", "GKc", "GKc_box", "GKc_dia", "GS5C")
MODES = ("local", "global")
PRESENTATIONS = ("FS1", "P")

MP, NEC_BOX, NEC_DIA, NEC_DIA_GEN = "MP", "NEC_BOX", "NEC_DIA", "NEC_DIA_GEN"


class RegistryError(ValueError):
    pass


@dataclass(frozen=True)
class AxiomRegistry:
    name: str
    axiom_schemes: Mapping[str, Scheme]
    rules: frozenset
    mode: str = "local"
    presentation: str | None = None
    extensions: tuple = ()

    @property
    def box_unrestricted(self) -> bool:
        """Necessitation for [] applies to premise-dependent lines too."""
        return self.mode == "global" and NEC_BOX in self.rules

    def frame_filter(self) -> frozenset:
        return frozenset(FRAME_PROPERTY[e] for e in self.extensions)

    def describe(self) -> str:
        ext = "+" + ",".join(self.extensions) if self.extensions else ""
        pres = f"[{self.presentation}]" if self.presentation else ""
        star = "*" if self.mode == "global" else ""
        return f"{star}{self.name}{pres}{ext}"


def resolve_system(name: str, extensions: Iterable[str] = (), mode: str = "local",
                   presentation: str | None = None) -> AxiomRegistry:
    """Build the registry for one of the named systems.

    ``presentation`` chooses between FS1 (with the diamond necessitation rule)
    and P for GK and GKc, and defaults to P there. Extensions are only
    available on top of GK and GKc.
    """
    if name not in SYSTEMS:
        raise RegistryError(f"unknown system {name!r}; expected one of {', '.join(SYSTEMS)}")
    if mode not in MODES:
        raise RegistryError(f"unknown mode {mode!r}")
    for e in extensions:
        if e not in EXTENSIONS:
            raise RegistryError(f"unknown extension {e!r}; expected a subset of T,4,B,5,D")
    exts = tuple(sorted(set(extensions), key=list(EXTENSIONS).index))
    if presentation is not None and presentation not in PRESENTATIONS:
        raise RegistryError(f"unknown presentation {presentation!r}")

    axioms = list(PROPOSITIONAL)
    rules = {MP}
    if name in ("GK", "GKc"):
        presentation = presentation or "P"
        axioms += ["K_box", "K_dia", presentation, "FS2", "F_dia"]
        rules.add(NEC_BOX)
        if presentation == "FS1":
            rules.add(NEC_DIA)
        if name == "GKc":
            axioms.append("Cr")
    else:
        if name == "GS5C":
            if presentation == "FS1":
                raise RegistryError("GS5C is only defined in the P presentation")
            presentation = "P" if presentation else None
        elif presentation is not None:
            raise RegistryError(f"system {name} takes no presentation flag")
        if exts:
            raise RegistryError(f"extensions are only supported for GK and GKc, not {name}")
        if name == "GKc_box":
            axioms += ["K_box", "Z_box"]
            rules.add(NEC_BOX)
        elif name == "GKc_dia":
            axioms += ["Z_dia", "K_dia", "F_dia"]
            rules.add(NEC_DIA_GEN)
        elif name == "GS5C":
            axioms += ["K_box", "K_dia", "P", "T_box", "T_dia", "5_1", "5_2", "C"]
            rules.add(NEC_BOX)
    for e in exts:
        axioms += EXTENSIONS[e]
    if mode == "global" and NEC_BOX not in rules:
        raise RegistryError(f"global mode needs the [] necessitation rule, which {name} lacks")
    return AxiomRegistry(
        name=name,
        axiom_schemes=MappingProxyType({a: SCHEMES[a] for a in axioms}),
        rules=frozenset(rules),
        mode=mode,
        presentation=presentation,
        extensions=exts,
    )


def custom_registry(name: str, axiom_names: Iterable[str], rules: Iterable[str],
                    mode: str = "local") -> AxiomRegistry:
    """Registry from an explicit axiom list, for systems outside the named ones
    (e.g. the union of GK with both crisp mono-modal fragments)."""
    names = list(dict.fromkeys(axiom_names))
    unknown = [a for a in names if a not in SCHEMES]
    if unknown:
        raise RegistryError(f"unknown axiom schemes {unknown}")
    rules = frozenset(rules)
    if not rules <= {MP, NEC_BOX, NEC_DIA, NEC_DIA_GEN}:
        raise RegistryError(f"unknown rules {sorted(rules)}")
    return AxiomRegistry(name, MappingProxyType({a: SCHEMES[a] for a in names}), rules, mode)
