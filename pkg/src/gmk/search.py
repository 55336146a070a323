"""Bounded counter-model search, random models and soundness fuzzing.

Search is refutation-only: these Kripke semantics lack the finite model
property, so an exhausted search space never establishes validity.

Enumeration order (documented, and relied on for reproducibility): world
sets grow from 1 to ``max_worlds``; for a fixed world set ``w1..wn`` a model
index is ``relation_index * valuation_count + valuation_index``. The relation
index lists the n*n pairs (wi, wj) row-major with the first pair as the most
significant digit (base 2 when crisp, base chain_size otherwise); the
valuation index lists (variable, world) positions variable-major in the same
way. Digits are ranks in the uniform chain ``{0, 1/(k-1), ..., 1}``.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .axioms import AxiomRegistry
from .formula import (
    BOT, And, Box, Dia, Formula, Implies, Or, Scheme, Var, format_formula,
    instantiate_scheme, metavariables, variables,
)
from .frames import check_filter, close_under
from .semantics import KripkeModel, model_to_json, rank_eval, uniform_chain

VARIABLE_NAMES = ("p", "q", "r", "s", "t", "u")


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class SearchBounds:
    max_worlds: int
    chain_size: int = 2
    crisp: bool = True
    variable_budget: int = 3

    def __post_init__(self):
        if self.max_worlds < 1:
            raise SearchError("max_worlds must be positive")
        if self.chain_size < 2:
            raise SearchError("the chain needs at least 0 and 1")
        if self.variable_budget < 1:
            raise SearchError("variable_budget must be positive")

    def to_json(self) -> dict:
        return {"max_worlds": self.max_worlds, "chain_size": self.chain_size,
                "crisp": self.crisp, "variable_budget": self.variable_budget}


@dataclass(frozen=True)
class Counterexample:
    model: KripkeModel
    world: object
    value: Fraction
    worlds: int = 0
    index: int = 0  # position in the enumeration for this world count


@dataclass(frozen=True)
class Exhausted:
    bounds: SearchBounds
    models_checked: int


SearchResult = Counterexample | Exhausted


def world_names(n: int) -> list[str]:
    return [f"w{i + 1}" for i in range(n)]


class ModelSpace:
    """All models on ``w1..wn`` over the k-chain, addressable by index."""

    def __init__(self, n: int, chain_size: int, vars: Sequence[str], crisp: bool = True):
        if n < 1 or chain_size < 2:
            raise SearchError("need n >= 1 and chain_size >= 2")
        self.n = n
        self.k = chain_size
        self.vars = tuple(vars)
        self.crisp = crisp
        self.rel_base = 2 if crisp else chain_size
        self.rel_count = self.rel_base ** (n * n)
        self.val_count = chain_size ** (n * len(self.vars))
        self.size = self.rel_count * self.val_count
        self.top = chain_size - 1
        self.chain = uniform_chain(chain_size)

    def __len__(self):
        return self.size

    @staticmethod
    def _digits(i: int, base: int, count: int) -> list[int]:
        out = [0] * count
        for pos in range(count - 1, -1, -1):
            i, out[pos] = divmod(i, base)
        return out

    def ranks_at(self, index: int) -> tuple[list[list[int]], dict[str, tuple]]:
        """Relation and valuation of model ``index`` as chain ranks."""
        ri, vi = divmod(index, self.val_count)
        n = self.n
        digits = self._digits(ri, self.rel_base, n * n)
        scale = self.top if self.crisp else 1
        rel = [[digits[a * n + b] * scale for b in range(n)] for a in range(n)]
        vd = self._digits(vi, self.k, n * len(self.vars))
        rows = {var: tuple(vd[j * n:(j + 1) * n]) for j, var in enumerate(self.vars)}
        return rel, rows

    def model_at(self, index: int) -> KripkeModel:
        rel, rows = self.ranks_at(index)
        return ranks_to_model(rel, rows, self.chain)

    def __iter__(self) -> Iterator[KripkeModel]:
        for i in range(self.size):
            yield self.model_at(i)


def ranks_to_model(rel, rows, chain: Sequence[Fraction]) -> KripkeModel:
    ws = world_names(len(rel))
    relation = {(ws[a], ws[b]): chain[x] for a, row in enumerate(rel) for b, x in enumerate(row) if x}
    valuation = {var: {ws[i]: chain[x] for i, x in enumerate(row) if x} for var, row in rows.items()}
    return KripkeModel(ws, relation, valuation)


def enumerate_crisp_models(n: int, k: int, vars: Sequence[str]) -> Iterator[KripkeModel]:
    """Every crisp model on n worlds with values in the k-chain (2^(n*n) * k^(n*|vars|) models)."""
    return iter(ModelSpace(n, k, vars, crisp=True))


def enumerate_valued_models(n: int, k: int, vars: Sequence[str]) -> Iterator[KripkeModel]:
    """Like :func:`enumerate_crisp_models` but the relation also ranges over the k-chain."""
    return iter(ModelSpace(n, k, vars, crisp=False))


def _search_range(f: Formula, n: int, k: int, vars: tuple, crisp: bool, start: int, stop: int):
    space = ModelSpace(n, k, vars, crisp)
    top = space.top
    for i in range(start, stop):
        rel, rows = space.ranks_at(i)
        vals = rank_eval(rel, top, rows, f)
        for w, x in enumerate(vals):
            if x != top:
                return i, w, x
    return None


def _chunks(size: int, parts: int) -> list[tuple[int, int]]:
    step = max(1, -(-size // parts))
    return [(a, min(a + step, size)) for a in range(0, size, step)]


def find_countermodel(f: Formula, bounds: SearchBounds, jobs: int = 1) -> Counterexample | Exhausted:
    """First model (in enumeration order) refuting ``f`` within ``bounds``.

    With ``jobs > 1`` the index range is split among worker processes and the
    least refuting index wins, so the answer does not depend on ``jobs``.
    """
    vars = tuple(variables(f))
    if len(vars) > bounds.variable_budget:
        raise SearchError(f"formula has {len(vars)} variables, budget is {bounds.variable_budget}")
    checked = 0
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        for n in range(1, bounds.max_worlds + 1):
            space = ModelSpace(n, bounds.chain_size, vars, bounds.crisp)
            args = (f, n, bounds.chain_size, vars, bounds.crisp)
            if pool is None:
                hits = [_search_range(*args, 0, space.size)]
            else:
                futures = [pool.submit(_search_range, *args, a, b) for a, b in _chunks(space.size, jobs * 4)]
                hits = [fu.result() for fu in futures]
            found = [h for h in hits if h is not None]
            if found:
                i, w, x = min(found)
                model = space.model_at(i)
                return Counterexample(model, model.worlds[w], space.chain[x], n, i)
            checked += space.size
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return Exhausted(bounds, checked)


def search_result_to_json(f: Formula, result) -> dict:
    doc = {"formula": format_formula(f)}
    if isinstance(result, Counterexample):
        doc.update(outcome="counterexample", model=model_to_json(result.model),
                   world=result.world, value=str(result.value), worlds=result.worlds,
                   index=result.index)
    else:
        doc.update(outcome="exhausted", bounds=result.bounds.to_json(),
                   models_checked=result.models_checked,
                   note="no counter-model within bounds; this does NOT establish validity")
    return doc


# ---------------------------------------------------------------------------
# random generation

def _rng(seed, *salt) -> random.Random:
    return random.Random(":".join(map(str, (seed,) + salt)))


def random_model(worlds: int, chain_size: int, crisp: bool, vars: Sequence[str], seed) -> KripkeModel:
    """Uniform draw from the enumerated space, as a function of the arguments and ``seed``."""
    space = ModelSpace(worlds, chain_size, vars, crisp)
    return space.model_at(_rng(seed, "model").randrange(space.size))


_CONNECTIVES = (And, Or, Implies, Box, Dia)


def random_formula(rng: random.Random, depth: int, vars: Sequence[str], modal: bool = True) -> Formula:
    """Random formula of depth at most ``depth`` over ``vars`` and bottom."""
    if depth <= 0 or rng.random() < 0.2:
        atoms = list(vars) + [None]
        a = rng.choice(atoms)
        return BOT if a is None else Var(a)
    ops = _CONNECTIVES if modal else _CONNECTIVES[:3]
    op = rng.choice(ops)
    if op in (Box, Dia):
        return op(random_formula(rng, depth - 1, vars, modal))
    return op(random_formula(rng, depth - 1, vars, modal), random_formula(rng, depth - 1, vars, modal))


def random_frame_model(rng: random.Random, max_worlds: int, max_chain: int, vars: Sequence[str],
                       frame_filter: Iterable[str] = ()):
    """Random crisp model (as ranks) whose frame satisfies ``frame_filter``."""
    n = rng.randint(1, max_worlds)
    k = rng.randint(2, max_chain)
    top = k - 1
    edges = {(a, b) for a in range(n) for b in range(n) if rng.random() < 0.5}
    edges = close_under(range(n), edges, frame_filter, rng)
    rel = [[top if (a, b) in edges else 0 for b in range(n)] for a in range(n)]
    rows = {v: tuple(rng.randrange(k) for _ in range(n)) for v in vars}
    return rel, rows, k


@dataclass
class FuzzConfig:
    max_worlds: int = 4
    max_chain: int = 6
    max_vars: int = 3
    max_depth: int = 3

    def to_json(self) -> dict:
        return {"max_worlds": self.max_worlds, "max_chain": self.max_chain,
                "max_vars": self.max_vars, "max_depth": self.max_depth}


def _fuzz_range(schemes: tuple, frame_filter: tuple, cfg: FuzzConfig, seed, start: int, stop: int):
    vars = VARIABLE_NAMES[:cfg.max_vars]
    names = [name for name, _ in schemes]
    table = dict(schemes)
    counts = {name: 0 for name in names}
    violations = []
    for it in range(start, stop):
        rng = _rng(seed, it)
        rel, rows, k = random_frame_model(rng, cfg.max_worlds, cfg.max_chain, vars, frame_filter)
        name = rng.choice(names)
        scheme = table[name]
        subst = {m: random_formula(rng, rng.randint(0, cfg.max_depth), vars) for m in metavariables(scheme)}
        instance = instantiate_scheme(scheme, subst)
        counts[name] += 1
        vals = rank_eval(rel, k - 1, rows, instance)
        for w, x in enumerate(vals):
            if x != k - 1:
                chain = uniform_chain(k)
                model = ranks_to_model(rel, rows, chain)
                violations.append({
                    "iteration": it,
                    "scheme": name,
                    "subst": {m: format_formula(g) for m, g in sorted(subst.items())},
                    "instance": format_formula(instance),
                    "model": model_to_json(model),
                    "world": model.worlds[w],
                    "value": str(chain[x]),
                })
                break
    return counts, violations


def fuzz_schemes(schemes: Mapping[str, Scheme], frame_filter: Iterable[str] = (), iters: int = 1000,
                 seed: int = 0, config: FuzzConfig | None = None, jobs: int = 1) -> dict:
    """Check random instances of ``schemes`` on random crisp models.

    Every iteration draws its own generator from (seed, iteration), so the
    report is the same for any ``jobs``.
    """
    cfg = config or FuzzConfig()
    frame_filter = tuple(sorted(check_filter(frame_filter)))
    items = tuple(sorted(schemes.items()))
    if not items:
        raise SearchError("no schemes to fuzz")
    if jobs > 1 and iters > 1:
        with ProcessPoolExecutor(jobs) as pool:
            futures = [pool.submit(_fuzz_range, items, frame_filter, cfg, seed, a, b)
                       for a, b in _chunks(iters, jobs * 4)]
            parts = [fu.result() for fu in futures]
    else:
        parts = [_fuzz_range(items, frame_filter, cfg, seed, 0, iters)]
    counts = {name: 0 for name, _ in items}
    violations = []
    for c, v in parts:
        for name, x in c.items():
            counts[name] += x
        violations.extend(v)
    return {
        "iterations": iters,
        "seed": seed,
        "frame_filter": list(frame_filter),
        "bounds": cfg.to_json(),
        "instances_per_scheme": counts,
        "violations": violations,
    }


def fuzz_axiom_soundness(registry: AxiomRegistry, frame_filter: Iterable[str] | None = None,
                         iters: int = 1000, seed: int = 0, config: FuzzConfig | None = None,
                         jobs: int = 1, strict: bool = True) -> dict:
    """Soundness fuzzing of every axiom scheme of ``registry`` over crisp models.

    ``frame_filter`` defaults to the frame conditions of the registry's
    extensions. With ``strict`` a filter missing one of those conditions is an
    error; pass ``strict=False`` to deliberately fuzz outside the intended
    frame class.
    """
    needed = registry.frame_filter()
    chosen = needed if frame_filter is None else check_filter(frame_filter)
    if strict and not needed <= chosen:
        raise SearchError(f"{registry.describe()} needs frame conditions {sorted(needed)}")
    report = fuzz_schemes(registry.axiom_schemes, chosen, iters, seed, config, jobs)
    report["system"] = registry.describe()
    return report
