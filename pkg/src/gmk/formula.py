"""Bi-modal formula language: AST, concrete syntax, subformulas, schemes.

Concrete syntax (ASCII)::

    0  1  p  q_1          atoms (bottom, top, variables)
    ?phi                  metavariable (schemes only)
    ~f  []f  <>f          negation, box, diamond (bind tightest)
    f & g                 conjunction (left assoc)
    f | g                 disjunction (left assoc)
    f -> g                implication (right assoc)
    f <-> g               biconditional (lowest, right assoc)

Top, negation and the biconditional are abbreviations and are expanded while
parsing, so every formula has exactly one tree.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


class Formula:
    """Base class of formula nodes. Nodes are immutable and hash-consable."""

    def __post_init__(self):
        # structural hash cached once; deep trees are hashed a lot
        key = (type(self).__name__,) + tuple(getattr(self, n) for n in self._fields)
        object.__setattr__(self, "_hash", hash(key))

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        # rebuild on unpickle: the cached hash is only valid in this process
        return (type(self), tuple(getattr(self, n) for n in self._fields))

    def __repr__(self):
        args = ", ".join(repr(getattr(self, n)) for n in self._fields)
        return f"{type(self).__name__}({args})"

    def __str__(self) -> str:
        return format_formula(self)


def _node(cls):
    cls = dataclass(frozen=True, repr=False)(cls)
    cls._fields = tuple(f.name for f in cls.__dataclass_fields__.values() if f.compare)
    cls.__hash__ = Formula.__hash__
    return cls


@_node
class Bot(Formula):
    _hash: int = field(default=0, init=False, compare=False)


@_node
class Var(Formula):
    name: str
    _hash: int = field(default=0, init=False, compare=False)


@_node
class Meta(Formula):
    """Scheme metavariable; binds a whole subformula when matching."""

    name: str
    _hash: int = field(default=0, init=False, compare=False)


@_node
class And(Formula):
    left: Formula
    right: Formula
    _hash: int = field(default=0, init=False, compare=False)


@_node
class Or(Formula):
    left: Formula
    right: Formula
    _hash: int = field(default=0, init=False, compare=False)


@_node
class Implies(Formula):
    left: Formula
    right: Formula
    _hash: int = field(default=0, init=False, compare=False)


@_node
class Box(Formula):
    inner: Formula
    _hash: int = field(default=0, init=False, compare=False)


@_node
class Dia(Formula):
    inner: Formula
    _hash: int = field(default=0, init=False, compare=False)


BOT = Bot()
TOP = Implies(BOT, BOT)

BINARY = (And, Or, Implies)
UNARY = (Box, Dia)

# A scheme is just a formula that may contain Meta leaves.
Scheme = Formula
Substitution = Mapping[str, Formula]


def neg(f: Formula) -> Formula:
    return Implies(f, BOT)


def iff(f: Formula, g: Formula) -> Formula:
    return And(Implies(f, g), Implies(g, f))


def box_n(f: Formula, k: int) -> Formula:
    for _ in range(k):
        f = Box(f)
    return f


class FormulaSyntaxError(ValueError):
    """Malformed formula text. ``pos`` is the 0-based offset of the problem."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class SchemeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|\[\]|<>|[~&|()])|(?P<const>[01])(?![0-9A-Za-z_])"
    r"|(?P<meta>\?[A-Za-z][A-Za-z0-9_]*)|(?P<ident>[A-Za-z][A-Za-z0-9_]*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise FormulaSyntaxError(f"unknown token {text[start:start + 1]!r}", text, start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, allow_meta: bool):
        self.text = text
        self.allow_meta = allow_meta
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        raise FormulaSyntaxError(message, self.text, tok[2])

    def accept(self, op: str) -> bool:
        kind, value, _ = self.peek()
        if kind == "op" and value == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek()[0] != "eof":
            self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def iff(self) -> Formula:
        left = self.implication()
        if self.accept("<->"):
            return iff(left, self.iff())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.accept("|"):
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.accept("~"):
            return neg(self.unary())
        if self.accept("[]"):
            return Box(self.unary())
        if self.accept("<>"):
            return Dia(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.next()
        kind, value, _ = tok
        if kind == "const":
            return BOT if value == "0" else TOP
        if kind == "ident":
            return Var(value)
        if kind == "meta":
            if not self.allow_meta:
                self.error("metavariable outside a scheme", tok)
            return Meta(value[1:])
        if kind == "op" and value == "(":
            f = self.iff()
            if not self.accept(")"):
                self.error("expected ')'")
            return f
        if kind == "eof":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected {value!r}", tok)


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into a formula; metavariables are rejected."""
    return _Parser(text, allow_meta=False).parse()


def parse_scheme(text: str) -> Scheme:
    """Parse scheme text, where ``?name`` denotes a metavariable."""
    return _Parser(text, allow_meta=True).parse()


# ---------------------------------------------------------------------------
# printing

_IMP, _OR, _AND, _UNARY, _ATOM = 1, 2, 3, 4, 5


def _level(f: Formula) -> int:
    if isinstance(f, Implies):
        if f == TOP:
            return _ATOM
        return _UNARY if f.right == BOT else _IMP
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    if isinstance(f, UNARY):
        return _UNARY
    return _ATOM


def _fmt(f: Formula, need: int) -> str:
    s = _fmt_bare(f)
    return f"({s})" if _level(f) < need else s


def _fmt_bare(f: Formula) -> str:
    if isinstance(f, Bot):
        return "0"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Meta):
        return "?" + f.name
    if isinstance(f, Implies):
        if f == TOP:
            return "1"
        if f.right == BOT:
            return "~" + _fmt(f.left, _UNARY)
        return f"{_fmt(f.left, _OR)} -> {_fmt(f.right, _IMP)}"
    if isinstance(f, Or):
        return f"{_fmt(f.left, _OR)} | {_fmt(f.right, _AND)}"
    if isinstance(f, And):
        return f"{_fmt(f.left, _AND)} & {_fmt(f.right, _UNARY)}"
    if isinstance(f, Box):
        return "[]" + _fmt(f.inner, _UNARY)
    if isinstance(f, Dia):
        return "<>" + _fmt(f.inner, _UNARY)
    raise TypeError(f"not a formula: {f!r}")


def format_formula(f: Formula) -> str:
    """Print with minimal parentheses; ``parse_formula`` inverts this."""
    return _fmt_bare(f)


# ---------------------------------------------------------------------------
# structure

def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, UNARY):
        return (f.inner,)
    return ()


def iter_nodes(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(children(g))


def subformulas(f: Formula) -> set[Formula]:
    """All subformulas of ``f`` together with the constants bottom and top."""
    out = set(iter_nodes(f))
    out.add(BOT)
    out.add(TOP)
    return out


def variables(f: Formula) -> list[str]:
    """Propositional variables of ``f``, sorted by name."""
    return sorted({g.name for g in iter_nodes(f) if isinstance(g, Var)})


def metavariables(s: Scheme) -> list[str]:
    return sorted({g.name for g in iter_nodes(s) if isinstance(g, Meta)})


def is_modal(f: Formula) -> bool:
    return any(isinstance(g, UNARY) for g in iter_nodes(f))


def depth(f: Formula) -> int:
    kids = children(f)
    return 1 + max(map(depth, kids)) if kids else 0


def size(f: Formula) -> int:
    return sum(1 for _ in iter_nodes(f))


def match_scheme(s: Scheme, f: Formula, subst: Substitution | None = None) -> dict[str, Formula] | None:
    """First-order match of ``s`` against ``f``.

    Returns the (unique) substitution for the scheme's metavariables, or None
    when ``f`` is not an instance. A partial ``subst`` may be given to
    constrain the result.
    """
    binding = dict(subst or {})
    stack = [(s, f)]
    while stack:
        pat, g = stack.pop()
        if isinstance(pat, Meta):
            bound = binding.get(pat.name)
            if bound is None:
                binding[pat.name] = g
            elif bound != g:
                return None
        elif type(pat) is not type(g):
            return None
        elif isinstance(pat, Var):
            if pat.name != g.name:
                return None
        else:
            stack.extend(zip(children(pat), children(g)))
    return binding


def instantiate_scheme(s: Scheme, subst: Substitution) -> Formula:
    """Simultaneously replace every metavariable of ``s`` using ``subst``."""
    if isinstance(s, Meta):
        try:
            return subst[s.name]
        except KeyError:
            raise SchemeError(f"unbound metavariable ?{s.name}") from None
    if isinstance(s, BINARY):
        return type(s)(instantiate_scheme(s.left, subst), instantiate_scheme(s.right, subst))
    if isinstance(s, UNARY):
        return type(s)(instantiate_scheme(s.inner, subst))
    return s


def substitute_vars(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Replace propositional variables (not metavariables) in ``f``."""
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, BINARY):
        return type(f)(substitute_vars(f.left, mapping), substitute_vars(f.right, mapping))
    if isinstance(f, UNARY):
        return type(f)(substitute_vars(f.inner, mapping))
    return f


def box_prefix_set(gamma: Iterable[Formula], depth: int) -> set[Formula]:
    """``{[]^k g : g in gamma, 0 <= k <= depth}``."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    out = set()
    for g in gamma:
        for _ in range(depth + 1):
            out.add(g)
            g = Box(g)
    return out
