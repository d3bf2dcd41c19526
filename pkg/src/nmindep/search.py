"""Enumeration of strict relations on small abstract carriers.

A relation on points ``0..n-1`` is encoded as an integer whose bit
``i * n + j`` is set iff ``i < j`` in the relation (``i`` preferred).  The
encoding is only used for enumeration; results are turned into
:class:`~nmindep.pref.PreferenceRelation` objects for checking.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Iterator

from .pref import PreferenceRelation, abstract_relation


def off_diagonal(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def edges_of(code: int, n: int) -> list[tuple[int, int]]:
    return [(i, j) for i, j in off_diagonal(n) if code >> (i * n + j) & 1]


def code_of(edges, n: int) -> int:
    out = 0
    for i, j in edges:
        out |= 1 << (i * n + j)
    return out


def better_masks(code: int, n: int) -> list[int]:
    """``out[j]`` has bit ``i`` set iff ``i < j``."""
    out = [0] * n
    for i, j in edges_of(code, n):
        out[j] |= 1 << i
    return out


def mu_mask(better: list[int], x: int) -> int:
    out, y = 0, x
    while y:
        low = y & -y
        if not better[low.bit_length() - 1] & x:
            out |= low
        y ^= low
    return out


def smooth_on(better: list[int], domain) -> bool:
    for x in domain:
        m = mu_mask(better, x)
        rest = x & ~m
        while rest:
            low = rest & -rest
            if not better[low.bit_length() - 1] & m:
                return False
            rest ^= low
    return True


def is_smooth_code(code: int, n: int) -> bool:
    return smooth_on(better_masks(code, n), range(1, 1 << n))


def is_ranked_code(code: int, n: int) -> bool:
    lt = lambda a, b: code >> (a * n + b) & 1
    inc = lambda a, b: not lt(a, b) and not lt(b, a)
    return not any(inc(a, b) and inc(b, c) and not inc(a, c)
                   for a, b, c in itertools.permutations(range(n), 3))


def is_transitive_code(code: int, n: int) -> bool:
    lt = lambda a, b: code >> (a * n + b) & 1
    return all(lt(a, c) for a, b, c in itertools.permutations(range(n), 3) if lt(a, b) and lt(b, c))


@lru_cache(maxsize=None)
def _perm_maps(n: int) -> tuple:
    pairs = off_diagonal(n)
    maps = []
    for p in itertools.permutations(range(n)):
        maps.append(tuple((1 << (i * n + j), 1 << (p[i] * n + p[j])) for i, j in pairs))
    return tuple(maps)


def canonical(code: int, n: int) -> int:
    """Smallest code among all relabellings."""
    best = None
    for m in _perm_maps(n):
        c = 0
        for src, dst in m:
            if code & src:
                c |= dst
        if best is None or c < best:
            best = c
    return best


@lru_cache(maxsize=None)
def relation_codes(n: int, smooth: bool = False, up_to_iso: bool = True) -> tuple[int, ...]:
    """All relation codes on n points, in increasing order."""
    if n > 4:
        raise ValueError("relation enumeration is limited to 4 points")
    out = []
    for code in range(1 << (n * n)):
        if any(code >> (i * n + i) & 1 for i in range(n)):
            continue
        if up_to_iso and canonical(code, n) != code:
            continue
        if smooth and not is_smooth_code(code, n):
            continue
        out.append(code)
    return tuple(out)


def relations(n: int, smooth: bool = False, up_to_iso: bool = True) -> Iterator[PreferenceRelation]:
    for code in relation_codes(n, smooth, up_to_iso):
        yield abstract_relation(n, edges_of(code, n))


def find_relation(max_points: int, accept: Callable[[PreferenceRelation], bool], *,
                  smooth: bool = True, min_points: int = 1) -> PreferenceRelation | None:
    """First relation (fewest points, then smallest code) satisfying ``accept``."""
    for n in range(min_points, max_points + 1):
        for rel in relations(n, smooth=smooth):
            if accept(rel):
                return rel
    return None
