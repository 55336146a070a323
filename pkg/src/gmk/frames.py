"""Classical frame conditions on crisp relations (sets of world pairs)."""
from __future__ import annotations

import random
from typing import Callable, Iterable, Sequence

Edges = frozenset


def is_reflexive(worlds: Sequence, edges: set) -> bool:
    return all((w, w) in edges for w in worlds)


def is_symmetric(worlds: Sequence, edges: set) -> bool:
    return all((w, v) in edges for v, w in edges)


def is_transitive(worlds: Sequence, edges: set) -> bool:
    return all((u, x) in edges for u, v in edges for w, x in edges if v == w)


def is_euclidean(worlds: Sequence, edges: set) -> bool:
    return all((v, w) in edges for u, v in edges for x, w in edges if u == x)


def is_serial(worlds: Sequence, edges: set) -> bool:
    heads = {v for v, _ in edges}
    return all(w in heads for w in worlds)


FRAME_PROPERTIES: dict[str, Callable] = {
    "reflexive": is_reflexive,
    "transitive": is_transitive,
    "symmetric": is_symmetric,
    "euclidean": is_euclidean,
    "serial": is_serial,
}


def frame_properties(worlds: Sequence, edges: Iterable) -> dict[str, bool]:
    edges = set(edges)
    return {name: test(worlds, edges) for name, test in FRAME_PROPERTIES.items()}


def check_filter(props: Iterable[str]) -> frozenset:
    props = frozenset(props)
    unknown = props - FRAME_PROPERTIES.keys()
    if unknown:
        raise ValueError(f"unknown frame properties {sorted(unknown)}")
    return props


def close_under(worlds: Sequence, edges: Iterable, props: Iterable[str], rng: random.Random) -> set:
    """Smallest-ish superset of ``edges`` satisfying every property in ``props``.

    Each closure step only adds pairs and the full relation satisfies every
    property, so iterating the steps reaches a fixpoint. Seriality adds a
    random successor to each dead end.
    """
    props = check_filter(props)
    edges = set(edges)
    while True:
        before = len(edges)
        if "reflexive" in props:
            edges.update((w, w) for w in worlds)
        if "symmetric" in props:
            edges.update({(w, v) for v, w in edges})
        if "transitive" in props:
            edges.update({(u, x) for u, v in edges for w, x in edges if v == w})
        if "euclidean" in props:
            edges.update({(v, w) for u, v in edges for x, w in edges if u == x})
        if "serial" in props:
            heads = {v for v, _ in edges}
            for w in worlds:
                if w not in heads:
                    edges.add((w, rng.choice(list(worlds))))
        if len(edges) == before:
            return edges
