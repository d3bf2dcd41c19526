"""Strict preference relations, minimization, and relations on products.

Points are hashable; when a relation carries a ``language`` its points are
model tuples over it.  Abstract n-point carriers are modelled as the models
of a one-variable language with an n-element value set, so products of
abstract carriers are products of model sets like everything else.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .lang import Language, ModelSet, ValueSet, TWO
from .verdict import Verdict

MAX_SUBSET_CARRIER = 16


class RelationError(ValueError):
    pass


@dataclass(frozen=True)
class PreferenceRelation:
    carrier: frozenset
    edges: frozenset
    language: Language | None = None

    def __post_init__(self):
        object.__setattr__(self, "carrier", frozenset(self.carrier))
        object.__setattr__(self, "edges", frozenset((a, b) for a, b in self.edges))
        for a, b in self.edges:
            if a == b:
                raise RelationError(f"relation is not irreflexive at {a!r}")
            if a not in self.carrier or b not in self.carrier:
                raise RelationError(f"edge {a!r} < {b!r} leaves the carrier")

    @classmethod
    def empty(cls, carrier: Iterable, language: Language | None = None) -> "PreferenceRelation":
        return cls(frozenset(carrier), frozenset(), language)

    @classmethod
    def from_predicate(cls, carrier: Iterable, less: Callable, language: Language | None = None):
        pts = sorted(carrier)
        return cls(frozenset(pts), frozenset((a, b) for a in pts for b in pts if a != b and less(a, b)), language)

    @classmethod
    def from_ranks(cls, ranks: dict, language: Language | None = None) -> "PreferenceRelation":
        """Ranked relation: lower rank is strictly preferred."""
        return cls.from_predicate(ranks, lambda a, b: ranks[a] < ranks[b], language)

    @cached_property
    def _better(self) -> dict:
        out = {p: set() for p in self.carrier}
        for a, b in self.edges:
            out[b].add(a)
        return {p: frozenset(s) for p, s in out.items()}

    def less(self, a, b) -> bool:
        return (a, b) in self.edges

    def weak(self, a, b) -> bool:
        """a is preferred to or equal to b."""
        return a == b or (a, b) in self.edges

    def better_than(self, p) -> frozenset:
        return self._better[p]

    def restrict(self, pts: Iterable) -> "PreferenceRelation":
        pts = frozenset(pts)
        return PreferenceRelation(pts, frozenset(e for e in self.edges if e[0] in pts and e[1] in pts), self.language)

    def without_edge(self, a, b) -> "PreferenceRelation":
        return PreferenceRelation(self.carrier, self.edges - {(a, b)}, self.language)

    def with_edge(self, a, b) -> "PreferenceRelation":
        return PreferenceRelation(self.carrier, self.edges | {(a, b)}, self.language)

    def to_json(self) -> dict:
        pts = sorted(self.carrier)
        out = {"carrier": [list(p) if isinstance(p, tuple) else p for p in pts],
               "edges": [[list(a) if isinstance(a, tuple) else a, list(b) if isinstance(b, tuple) else b]
                         for a, b in sorted(self.edges)]}
        if self.language is not None:
            out["vars"] = list(self.language.vars)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PreferenceRelation":
        lang = Language(tuple(data["vars"])) if "vars" in data else None
        conv = (lambda p: tuple(p)) if lang is not None else (lambda p: tuple(p) if isinstance(p, list) else p)
        return cls(frozenset(conv(p) for p in data["carrier"]),
                   frozenset((conv(a), conv(b)) for a, b in data.get("edges", [])), lang)


def mu(r: PreferenceRelation, x):
    """Minimal elements of ``x``: those with no strictly better point inside ``x``."""
    as_modelset = isinstance(x, ModelSet)
    pts = x.members if as_modelset else frozenset(x)
    if not pts <= r.carrier:
        raise RelationError(f"{sorted(pts - r.carrier)[:3]} not in the carrier")
    out = frozenset(m for m in pts if not (r.better_than(m) & pts))
    return x.with_members(out) if as_modelset else out


def nonempty_subsets(pts: Iterable) -> Iterable[frozenset]:
    pts = sorted(pts)
    if len(pts) > MAX_SUBSET_CARRIER:
        raise RelationError(f"refusing to enumerate subsets of {len(pts)} points")
    for k in range(1, len(pts) + 1):
        for c in itertools.combinations(pts, k):
            yield frozenset(c)


def is_smooth(r: PreferenceRelation, domain: Iterable | None = None) -> bool:
    """Every non-minimal element of a domain set has a minimal element below it."""
    for x in (nonempty_subsets(r.carrier) if domain is None else domain):
        x = frozenset(x)
        m = mu(r, x)
        for p in x - m:
            if not (r.better_than(p) & m):
                return False
    return True


def is_transitive(r: PreferenceRelation) -> bool:
    return all((a, c) in r.edges for a, b in r.edges for b2, c in r.edges if b == b2 and a != c) and \
        not any((b, a) in r.edges for a, b in r.edges)


def is_acyclic(r: PreferenceRelation) -> bool:
    state: dict = {}

    def visit(p) -> bool:
        state[p] = 1
        for q in r.better_than(p):
            s = state.get(q, 0)
            if s == 1 or (s == 0 and not visit(q)):
                return False
        state[p] = 2
        return True

    return all(state.get(p, 0) == 2 or visit(p) for p in sorted(r.carrier, key=repr))


def is_ranked(r: PreferenceRelation) -> bool:
    """Incomparability, for distinct points, is transitive."""
    pts = sorted(r.carrier, key=repr)

    def inc(a, b):
        return not r.less(a, b) and not r.less(b, a)

    for a, b, c in itertools.permutations(pts, 3):
        if inc(a, b) and inc(b, c) and not inc(a, c):
            return False
    return True


def relation_from_mu(carrier: Iterable, mu_fn: Callable[[frozenset], frozenset], language=None):
    """Recover a ≺ b from a choice function by a ≺ b iff b not in mu({a, b})."""
    pts = sorted(carrier)
    return PreferenceRelation(frozenset(pts), frozenset(
        (a, b) for a in pts for b in pts if a != b and b not in mu_fn(frozenset((a, b)))), language)


# ---------------------------------------------------------------------------
# abstract carriers


def abstract_language(n: int, name: str = "x") -> tuple[Language, ValueSet]:
    return Language((name,)), ValueSet(tuple(str(i) for i in range(max(n, 2))))


def abstract_points(n: int) -> list[tuple]:
    return [(i,) for i in range(n)]


def abstract_relation(n: int, edges: Iterable[tuple[int, int]], name: str = "x") -> PreferenceRelation:
    """Relation on points (0,), ..., (n-1,) of a one-variable language."""
    lang, _ = abstract_language(n, name)
    return PreferenceRelation(frozenset(abstract_points(n)), frozenset(((a,), (b,)) for a, b in edges), lang)


# ---------------------------------------------------------------------------
# products


@dataclass(frozen=True)
class ProductStructure:
    """Relations on blocks plus a relation on the product of their carriers.

    A product point is the concatenation of its component points, in block
    order.
    """

    blocks: tuple
    components: tuple
    composed: PreferenceRelation
    combinator: str = "explicit"

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.blocks) != len(self.components):
            raise RelationError("one component relation per block")
        seen: set = set()
        for b in self.blocks:
            if seen & set(b.vars):
                raise RelationError(f"block {b} overlaps another block")
            seen |= set(b.vars)
        for b, c in zip(self.blocks, self.components):
            if any(len(p) != len(b) for p in c.carrier):
                raise RelationError(f"component carrier does not live on block {b}")
        expected = frozenset(product_points([c.carrier for c in self.components]))
        if self.composed.carrier != expected:
            raise RelationError("composed carrier is not the product of the component carriers")

    @property
    def language(self) -> Language:
        out = Language(())
        for b in self.blocks:
            out = out.disjoint_union(b)
        return out

    @cached_property
    def _cuts(self) -> list[int]:
        cuts, pos = [0], 0
        for b in self.blocks:
            pos += len(b)
            cuts.append(pos)
        return cuts

    def split(self, point: tuple) -> tuple:
        c = self._cuts
        return tuple(point[c[i]:c[i + 1]] for i in range(len(self.blocks)))

    def rectangle(self, *parts: Iterable) -> frozenset:
        return frozenset(product_points(parts))


def product_points(parts: Sequence[Iterable]) -> list[tuple]:
    out = [()]
    for part in parts:
        part = sorted(part)
        out = [p + q for p in out for q in part]
    return out


def _compose(components: Sequence[PreferenceRelation], less: Callable[[tuple, tuple], bool], blocks, name: str):
    if blocks is None:
        blocks = [c.language if c.language is not None else Language((f"x{i}",)) for i, c in enumerate(components)]
        names = [v for b in blocks for v in b.vars]
        if len(set(names)) != len(names):
            blocks = [Language(tuple(f"{v}{i}" for v in b.vars)) for i, b in enumerate(blocks)]
    blocks = tuple(blocks)
    lang = Language(())
    for b in blocks:
        lang = lang.disjoint_union(b)
    pts = product_points([c.carrier for c in components])
    cuts = [0]
    for b in blocks:
        cuts.append(cuts[-1] + len(b))

    def parts(p):
        return tuple(p[cuts[i]:cuts[i + 1]] for i in range(len(blocks)))

    comp = PreferenceRelation.from_predicate(pts, lambda s, t: less(parts(s), parts(t)), lang)
    return ProductStructure(blocks, tuple(components), comp, name)


def build_set_variant(components: Sequence[PreferenceRelation], blocks=None) -> ProductStructure:
    """s < t iff every coordinate is weakly better and one strictly."""
    def less(s, t):
        return all(c.weak(a, b) for c, a, b in zip(components, s, t)) and \
            any(c.less(a, b) for c, a, b in zip(components, s, t))
    return _compose(components, less, blocks, "set")


def build_counting(components: Sequence[PreferenceRelation], blocks=None) -> ProductStructure:
    """s < t iff more coordinates favour s than favour t."""
    def less(s, t):
        wins = sum(c.less(a, b) for c, a, b in zip(components, s, t))
        losses = sum(c.less(b, a) for c, a, b in zip(components, s, t))
        return wins > losses
    return _compose(components, less, blocks, "counting")


def build_weighted(components: Sequence[PreferenceRelation], weights: Sequence, blocks=None) -> ProductStructure:
    if len(weights) != len(components):
        raise RelationError(f"{len(weights)} weights for {len(components)} components")
    w = [Fraction(x) for x in weights]
    if any(x <= 0 for x in w):
        raise RelationError("weights must be positive")

    def less(s, t):
        wins = sum((wi for wi, c, a, b in zip(w, components, s, t) if c.less(a, b)), Fraction(0))
        losses = sum((wi for wi, c, a, b in zip(w, components, s, t) if c.less(b, a)), Fraction(0))
        return wins > losses
    return _compose(components, less, blocks, "weighted")


def build_lexicographic(main: PreferenceRelation, minor: PreferenceRelation, blocks=None) -> ProductStructure:
    """The main block decides; the minor block only breaks ties."""
    def less(s, t):
        return main.less(s[0], t[0]) or (s[0] == t[0] and minor.less(s[1], t[1]))
    return _compose((main, minor), less, blocks, "lex")


def build_forget(main: PreferenceRelation, minor: PreferenceRelation, blocks=None) -> ProductStructure:
    """Preference only between points that agree on the minor block."""
    def less(s, t):
        return main.less(s[0], t[0]) and s[1] == t[1]
    return _compose((main, minor), less, blocks, "forget")


def _two_blocks(ps: ProductStructure):
    if len(ps.blocks) != 2:
        raise RelationError(f"expected a two-block product, got {len(ps.blocks)} blocks")
    return ps.components


def _quadruples(ps: ProductStructure):
    c1, c2 = _two_blocks(ps)
    p1, p2 = sorted(c1.carrier), sorted(c2.carrier)
    for s, t in itertools.product(p1, repeat=2):
        for s2, t2 in itertools.product(p2, repeat=2):
            yield s, t, s2, t2


def _gh_premise(c1, c2, s, t, s2, t2) -> bool:
    return c1.weak(s, t) and c2.weak(s2, t2) and (c1.less(s, t) or c2.less(s2, t2))


def check_GH(ps: ProductStructure) -> tuple[Verdict, Verdict]:
    c1, c2 = _two_blocks(ps)
    r = ps.composed
    gh1 = gh2 = None
    n = 0
    for s, t, s2, t2 in _quadruples(ps):
        n += 1
        prod = r.less(s + s2, t + t2)
        if gh1 is None and _gh_premise(c1, c2, s, t, s2, t2) and not prod:
            gh1 = {"sigma": s, "tau": t, "sigma2": s2, "tau2": t2, "missing": [s + s2, t + t2]}
        if gh2 is None and prod and not (c1.less(s, t) or c2.less(s2, t2)):
            gh2 = {"sigma": s, "tau": t, "sigma2": s2, "tau2": t2, "unsupported": [s + s2, t + t2]}
    v1 = Verdict.ok("GH1", n) if gh1 is None else Verdict.fail("GH1", gh1, n)
    v2 = Verdict.ok("GH2", n) if gh2 is None else Verdict.fail("GH2", gh2, n)
    return v1, v2


def check_GHplus(ps: ProductStructure) -> Verdict:
    c1, c2 = _two_blocks(ps)
    n = 0
    for s, t, s2, t2 in _quadruples(ps):
        n += 1
        lhs = _gh_premise(c1, c2, s, t, s2, t2)
        rhs = ps.composed.less(s + s2, t + t2)
        if lhs != rhs:
            return Verdict.fail("GH+", {"sigma": s, "tau": t, "sigma2": s2, "tau2": t2,
                                        "componentwise": lhs, "product": rhs}, n)
    return Verdict.ok("GH+", n)


def is_gh(ps: ProductStructure) -> bool:
    a, b = check_GH(ps)
    return a.holds and b.holds
