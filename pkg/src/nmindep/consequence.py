"""Preferential consequence and the logical rule catalogue.

``alpha |~ beta`` holds iff every minimal model of ``alpha`` satisfies
``beta``.  A structure's carrier may be a proper subset of the language's
models; it then plays the role of the admissible models, and both ``|~`` and
classical ``|-`` are read relative to it.  Internally formulas are bitmasks
over the language's models in canonical order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .lang import (BOTTOM, TOP, Atom, Formula, Language, ModelSet, Not, all_models, compile_formula,
                   conj, dnf, parse_formula, to_text)
from .pref import PreferenceRelation, ProductStructure
from .verdict import Verdict


class LogicError(ValueError):
    pass


class NmLogic:
    """Consequence relation induced by a preference relation over models."""

    def __init__(self, language: Language, relation: PreferenceRelation):
        self.language = language
        self.relation = relation
        self.models = list(all_models(language))
        self.index = {m: i for i, m in enumerate(self.models)}
        bad = [p for p in relation.carrier if p not in self.index]
        if bad:
            raise LogicError(f"carrier point {bad[0]!r} is not a model of {language}")
        self.carrier = 0
        for p in relation.carrier:
            self.carrier |= 1 << self.index[p]
        self._better = [0] * len(self.models)
        for a, b in relation.edges:
            self._better[self.index[b]] |= 1 << self.index[a]
        self._mu_cache: dict[int, int] = {}
        self._formula_cache: dict[Formula, int] = {}

    @classmethod
    def full(cls, language: Language, relation: PreferenceRelation | None = None) -> "NmLogic":
        """Logic whose carrier is every model of the language."""
        if relation is None:
            relation = PreferenceRelation.empty(all_models(language), language)
        return cls(language, relation)

    @classmethod
    def from_abstract(cls, n: int, edges: Iterable[tuple[int, int]], names: str = "pqrs") -> "NmLogic":
        """Place abstract points 0..n-1 on the first n models of a small language."""
        k = max(1, (n - 1).bit_length())
        lang = Language(tuple(names[:k]))
        models = list(all_models(lang))[:n]
        rel = PreferenceRelation(frozenset(models), frozenset((models[a], models[b]) for a, b in edges), lang)
        return cls(lang, rel)

    # -- masks --

    def mask_of(self, f: Formula | str) -> int:
        if isinstance(f, str):
            f = parse_formula(f, self.language)
        hit = self._formula_cache.get(f)
        if hit is None:
            test = compile_formula(f, self.language)
            hit = 0
            for i, m in enumerate(self.models):
                if test(m):
                    hit |= 1 << i
            hit &= self.carrier
            self._formula_cache[f] = hit
        return hit

    def mask_of_models(self, s: ModelSet | Iterable) -> int:
        members = s.members if isinstance(s, ModelSet) else s
        out = 0
        for m in members:
            out |= 1 << self.index[tuple(m)]
        return out

    def modelset(self, mask: int) -> ModelSet:
        return ModelSet(self.language, frozenset(self.models[i] for i in range(len(self.models)) if mask >> i & 1))

    def mu_mask(self, x: int) -> int:
        x &= self.carrier
        hit = self._mu_cache.get(x)
        if hit is None:
            hit = 0
            y = x
            while y:
                low = y & -y
                i = low.bit_length() - 1
                if not self._better[i] & x:
                    hit |= low
                y ^= low
            self._mu_cache[x] = hit
        return hit

    def neg(self, a: int) -> int:
        return self.carrier & ~a

    def ent(self, a: int, b: int) -> bool:
        return self.mu_mask(a) & ~b == 0

    def derives(self, a: int, b: int) -> bool:
        return a & ~b == 0

    # -- formula level --

    def mu(self, f: Formula | str) -> ModelSet:
        return self.modelset(self.mu_mask(self.mask_of(f)))

    def entails(self, a: Formula | str, b: Formula | str) -> bool:
        am, bm = self.mask_of(a), self.mask_of(b)
        by_mu = self.ent(am, bm)
        # principal filter reading: M(a & b) is big in M(a)
        m = self.mu_mask(am)
        by_filter = m & ~(am & bm) == 0
        assert by_mu == by_filter
        return by_mu


def nm_entails(logic: NmLogic, a: Formula | str, b: Formula | str) -> bool:
    return logic.entails(a, b)


def theory_of(s: ModelSet) -> Formula:
    """Canonical generator of Th(s): the full DNF, with TOP and BOTTOM for the extremes."""
    if not s.members:
        return BOTTOM
    return dnf(s)


# ---------------------------------------------------------------------------
# formula pools


@dataclass(frozen=True)
class PoolEntry:
    formula: Formula
    mask: int

    @property
    def text(self) -> str:
        return to_text(self.formula)


def literal_conjunctions(lang: Language) -> list[Formula]:
    out = []
    for signs in itertools.product((None, 1, 0), repeat=len(lang)):
        lits = [Atom(v) if s else Not(Atom(v)) for v, s in zip(lang.vars, signs) if s is not None]
        out.append(conj(lits))
    return out


def formula_pool(logic: NmLogic, depth: int = 2, base: Iterable[Formula] | None = None) -> list[PoolEntry]:
    """Literal conjunctions plus BOTTOM, closed ``depth`` times under not, and, or.

    Entries are deduplicated by their model set inside the carrier; the first
    (shortest) formula found for a set is kept.
    """
    seen: dict[int, PoolEntry] = {}

    def add(f: Formula):
        m = logic.mask_of(f)
        if m not in seen:
            seen[m] = PoolEntry(f, m)

    for f in (base if base is not None else [*literal_conjunctions(logic.language), BOTTOM]):
        add(f)
    for _ in range(depth):
        current = list(seen.values())
        for e in current:
            add(Not(e.formula))
        for e, g in itertools.combinations(current, 2):
            add(e.formula & g.formula)
            add(e.formula | g.formula)
    return sorted(seen.values(), key=lambda e: (len(e.text), e.mask))


def consistent_literal_pool(logic: NmLogic) -> list[PoolEntry]:
    """Satisfiable literal conjunctions (TOP included), one per model set."""
    seen: dict[int, PoolEntry] = {}
    for f in literal_conjunctions(logic.language):
        m = logic.mask_of(f)
        if m and m not in seen:
            seen[m] = PoolEntry(f, m)
    return list(seen.values())


# ---------------------------------------------------------------------------
# rule catalogue
#
# A rule body takes the logic and one mask per schematic letter and returns
# None when the premises fail, otherwise whether the conclusion holds.


@dataclass(frozen=True)
class LogicalRule:
    name: str
    letters: tuple[str, ...]
    schema: str
    body: Callable[..., bool | None]


def _implies(premise: bool, conclusion: Callable[[], bool]) -> bool | None:
    return conclusion() if premise else None


def _rules() -> dict[str, LogicalRule]:
    r: dict[str, LogicalRule] = {}

    def add(name, letters, schema, body):
        r[name] = LogicalRule(name, tuple(letters.split()), schema, body)

    add("SC", "alpha beta", "alpha |- beta => alpha |~ beta",
        lambda L, a, b: _implies(L.derives(a, b), lambda: L.ent(a, b)))
    add("REF", "gamma alpha", "gamma & alpha |~ alpha",
        lambda L, g, a: L.ent(g & a, a))
    add("LLE", "alpha alpha2 beta", "|- alpha <-> alpha2, alpha |~ beta => alpha2 |~ beta",
        lambda L, a, a2, b: _implies(a == a2 and L.ent(a, b), lambda: L.ent(a2, b)))
    add("RW", "alpha beta beta2", "alpha |~ beta, beta |- beta2 => alpha |~ beta2",
        lambda L, a, b, b2: _implies(L.ent(a, b) and L.derives(b, b2), lambda: L.ent(a, b2)))
    add("wOR", "alpha alpha2 beta", "alpha |~ beta, alpha2 |- beta => alpha | alpha2 |~ beta",
        lambda L, a, a2, b: _implies(L.ent(a, b) and L.derives(a2, b), lambda: L.ent(a | a2, b)))
    add("disjOR", "alpha alpha2 beta",
        "alpha |- !alpha2, alpha |~ beta, alpha2 |~ beta => alpha | alpha2 |~ beta",
        lambda L, a, a2, b: _implies(a & a2 == 0 and L.ent(a, b) and L.ent(a2, b), lambda: L.ent(a | a2, b)))
    add("OR", "alpha alpha2 beta", "alpha |~ beta, alpha2 |~ beta => alpha | alpha2 |~ beta",
        lambda L, a, a2, b: _implies(L.ent(a, b) and L.ent(a2, b), lambda: L.ent(a | a2, b)))
    add("CP", "alpha", "alpha |~ false => alpha |- false",
        lambda L, a: _implies(L.ent(a, 0), lambda: a == 0))
    # the "n * small != all" family presupposes a nonempty base set, so alpha is consistent
    add("AND1", "alpha beta", "alpha consistent, alpha |~ beta => alpha !|~ !beta",
        lambda L, a, b: _implies(a != 0 and L.ent(a, b), lambda: not L.ent(a, L.neg(b))))
    add("AND", "alpha beta beta2", "alpha |~ beta, alpha |~ beta2 => alpha |~ beta & beta2",
        lambda L, a, b, b2: _implies(L.ent(a, b) and L.ent(a, b2), lambda: L.ent(a, b & b2)))
    add("CCL", "alpha beta beta2 gamma",
        "alpha |~ beta, alpha |~ beta2, beta & beta2 |- gamma => alpha |~ gamma",
        lambda L, a, b, b2, g: _implies(L.ent(a, b) and L.ent(a, b2) and L.derives(b & b2, g),
                                        lambda: L.ent(a, g)))
    add("PR", "alpha alpha2 beta", "alpha & alpha2 |~ beta => mu(alpha) & alpha2 |- beta",
        lambda L, a, a2, b: _implies(L.ent(a & a2, b), lambda: L.mu_mask(a) & a2 & ~b == 0))
    add("CUT", "alpha beta gamma", "alpha |~ beta, alpha & beta |~ gamma => alpha |~ gamma",
        lambda L, a, b, g: _implies(L.ent(a, b) and L.ent(a & b, g), lambda: L.ent(a, g)))
    add("wCM", "alpha alpha2 beta",
        "alpha |~ beta, alpha2 |- alpha, alpha & beta |- alpha2 => alpha2 |~ beta",
        lambda L, a, a2, b: _implies(L.ent(a, b) and L.derives(a2, a) and L.derives(a & b, a2),
                                     lambda: L.ent(a2, b)))
    add("CM2", "alpha beta beta2", "alpha consistent, alpha |~ beta, alpha |~ beta2 => alpha & beta |/- !beta2",
        lambda L, a, b, b2: _implies(a != 0 and L.ent(a, b) and L.ent(a, b2), lambda: a & b & b2 != 0))
    add("CM", "alpha beta beta2", "alpha |~ beta, alpha |~ beta2 => alpha & beta |~ beta2",
        lambda L, a, b, b2: _implies(L.ent(a, b) and L.ent(a, b2), lambda: L.ent(a & b, b2)))
    add("ResM", "alpha beta beta2", "T |~ beta, beta2 => T u {beta} |~ beta2",
        lambda L, a, b, b2: _implies(L.ent(a, b & b2), lambda: L.ent(a & b, b2)))
    add("CUM", "alpha beta beta2", "alpha |~ beta => (alpha |~ beta2 <=> alpha & beta |~ beta2)",
        lambda L, a, b, b2: _implies(L.ent(a, b), lambda: L.ent(a, b2) == L.ent(a & b, b2)))
    add("SubsetSupset", "alpha alpha2", "alpha |~ alpha2, alpha2 |~ alpha => mu(alpha) = mu(alpha2)",
        lambda L, a, a2: _implies(L.ent(a, a2) and L.ent(a2, a), lambda: L.mu_mask(a) == L.mu_mask(a2)))
    add("RatM", "alpha beta beta2", "alpha |~ beta, alpha !|~ !beta2 => alpha & beta2 |~ beta",
        lambda L, a, b, b2: _implies(L.ent(a, b) and not L.ent(a, L.neg(b2)), lambda: L.ent(a & b2, b)))
    add("RatMeq", "alpha alpha2",
        "alpha |- alpha2, mu(alpha2) & alpha consistent => mu(alpha) = mu(alpha2) & alpha",
        lambda L, a, a2: _implies(L.derives(a, a2) and L.mu_mask(a2) & a != 0,
                                  lambda: L.mu_mask(a) == L.mu_mask(a2) & a))
    add("LogEqPrime", "alpha alpha2",
        "mu(alpha2) & alpha consistent => mu(alpha & alpha2) = mu(alpha2) & alpha",
        lambda L, a, a2: _implies(L.mu_mask(a2) & a != 0, lambda: L.mu_mask(a & a2) == L.mu_mask(a2) & a))
    add("DR", "alpha beta gamma", "alpha | beta |~ gamma => alpha |~ gamma or beta |~ gamma",
        lambda L, a, b, g: _implies(L.ent(a | b, g), lambda: L.ent(a, g) or L.ent(b, g)))
    add("LogPar", "alpha beta", "mu(alpha | beta) is mu(alpha), mu(beta) or their union",
        lambda L, a, b: L.mu_mask(a | b) in (L.mu_mask(a), L.mu_mask(b), L.mu_mask(a) | L.mu_mask(b)))
    add("LogUnion", "alpha alpha2",
        "mu(alpha2) & alpha consistent, mu(alpha2) & mu(alpha) inconsistent => mu(alpha | alpha2) |- !alpha2",
        lambda L, a, a2: _implies(L.mu_mask(a2) & a != 0 and L.mu_mask(a2) & L.mu_mask(a) == 0,
                                  lambda: L.mu_mask(a | a2) & a2 == 0))
    add("LogUnionPrime", "alpha alpha2",
        "mu(alpha2) & alpha consistent, mu(alpha2) & mu(alpha) inconsistent => mu(alpha | alpha2) = mu(alpha)",
        lambda L, a, a2: _implies(L.mu_mask(a2) & a != 0 and L.mu_mask(a2) & L.mu_mask(a) == 0,
                                  lambda: L.mu_mask(a | a2) == L.mu_mask(a)))
    add("MuIn", "alpha", "m in alpha - mu(alpha) => some n in alpha has m not in mu({m, n})",
        lambda L, a: _mu_in(L, a))
    add("Scenario1Logical(1)", "alpha beta gamma",
        "alpha |~ beta, alpha & beta |~ gamma => alpha |~ gamma",
        lambda L, a, b, g: _implies(L.ent(a, b) and L.ent(a & b, g), lambda: L.ent(a, g)))
    add("Scenario1Logical(2)", "alpha beta gamma",
        "alpha !|~ !beta, alpha & beta |~ gamma => alpha !|~ !(beta & gamma)",
        lambda L, a, b, g: _implies(not L.ent(a, L.neg(b)) and L.ent(a & b, g),
                                    lambda: not L.ent(a, L.neg(b & g))))
    add("Scenario1Logical(3)", "alpha beta gamma",
        "alpha |~ beta, alpha & beta !|~ !gamma => alpha !|~ !(beta & gamma)",
        lambda L, a, b, g: _implies(L.ent(a, b) and not L.ent(a & b, L.neg(g)),
                                    lambda: not L.ent(a, L.neg(b & g))))
    return r


def _mu_in(L: NmLogic, a: int) -> bool | None:
    rest = (a & L.carrier) & ~L.mu_mask(a)
    if not rest:
        return None
    i = 0
    while rest:
        if rest & 1:
            pair_ok = any(L.mu_mask((1 << i) | (1 << j)) == 1 << j
                          for j in range(len(L.models)) if a >> j & 1 and j != i)
            if not pair_ok:
                return False
        rest >>= 1
        i += 1
    return True


_RULES = _rules()


def _and_n(n: int) -> LogicalRule:
    letters = ("alpha",) + tuple(f"beta{i}" for i in range(1, n))

    def body(L, a, *bs):
        if a == 0 or not all(L.ent(a, b) for b in bs):
            return None
        bad = 0
        for b in bs:
            bad |= L.neg(b)
        return not L.ent(a, bad)

    return LogicalRule(f"ANDn({n})", letters,
                       f"alpha consistent, alpha |~ beta1..beta{n - 1} => alpha !|~ !beta1 | .. | !beta{n - 1}", body)


def _cm_n(n: int) -> LogicalRule:
    letters = ("alpha",) + tuple(f"beta{i}" for i in range(1, n + 1))

    def body(L, a, *bs):
        if a == 0 or not all(L.ent(a, b) for b in bs):
            return None
        x = a
        for b in bs:
            x &= b
        return x != 0

    return LogicalRule(f"CMn({n})", letters,
                       f"alpha consistent, alpha |~ beta1..beta{n} => alpha & beta1 & .. & beta{n - 1} |/- !beta{n}", body)


def get_logical_rule(name: str) -> LogicalRule:
    import re
    if name in _RULES:
        return _RULES[name]
    m = re.fullmatch(r"(ANDn|CMn)\((\d+)\)", name)
    if m:
        n = int(m.group(2))
        if n < 1 or (m.group(1) == "ANDn" and n < 2):
            raise KeyError(f"bad parameter in {name!r}")
        return _and_n(n) if m.group(1) == "ANDn" else _cm_n(n)
    raise KeyError(f"unknown logical rule {name!r}")


def logical_rule_names() -> list[str]:
    return list(_RULES) + ["ANDn(n)", "CMn(n)"]


def check_logical_rule(logic: NmLogic, rule: str, pool: Sequence[PoolEntry] | None = None) -> Verdict:
    """Instantiate a rule schema over every tuple from the pool."""
    r = get_logical_rule(rule)
    if pool is None:
        pool = formula_pool(logic)
    checked = 0
    for combo in itertools.product(pool, repeat=len(r.letters)):
        out = r.body(logic, *(e.mask for e in combo))
        if out is None:
            continue
        checked += 1
        if not out:
            witness = {k: e.text for k, e in zip(r.letters, combo)}
            return Verdict.fail(rule, witness, checked, note=r.schema)
    return Verdict.ok(rule, checked, note=r.schema)


def replay_logical(logic: NmLogic, verdict: Verdict) -> bool:
    """True iff the witness formulas, re-parsed, violate the rule."""
    if verdict.holds:
        return False
    r = get_logical_rule(verdict.rule)
    masks = [logic.mask_of(parse_formula(verdict.witness[k], logic.language)) for k in r.letters]
    return r.body(logic, *masks) is False


def check_scenario1_logical(logic: NmLogic, case: int, pool: Sequence[PoolEntry] | None = None) -> Verdict:
    if case not in (1, 2, 3):
        raise ValueError(f"logical Scenario-1 case must be 1..3, got {case}")
    return check_logical_rule(logic, f"Scenario1Logical({case})", pool)


# ---------------------------------------------------------------------------
# two-language laws


TWO_LANGUAGE_LAWS = {
    "b*b": "alpha |~1 beta, alpha2 |~2 beta2 => alpha & alpha2 |~ beta & beta2",
    "b*m": "alpha !|~1 !beta, alpha2 |~2 beta2 => alpha & alpha2 !|~ !beta | !beta2",
    "m*m": "alpha !|~1 !beta, alpha2 !|~2 !beta2 => alpha & alpha2 !|~ !beta | !beta2",
    "forget": "alpha & alpha2 |~ beta & beta2 <=> alpha |~1 beta and alpha2 |- beta2",
}


def block_logics(ps: ProductStructure) -> tuple[NmLogic, NmLogic, NmLogic]:
    if len(ps.blocks) != 2:
        raise LogicError("two-language laws need a two-block product")
    l1 = NmLogic(ps.blocks[0], ps.components[0])
    l2 = NmLogic(ps.blocks[1], ps.components[1])
    return l1, l2, NmLogic(ps.language, ps.composed)


def check_two_language_law(ps: ProductStructure, law: str) -> Verdict:
    """Relate sublanguage consequence to consequence over the joint language.

    Formulas range over satisfiable literal conjunctions of each block.
    """
    if law not in TWO_LANGUAGE_LAWS:
        raise KeyError(f"unknown two-language law {law!r}")
    if not ps.blocks[0].disjoint(ps.blocks[1]):
        raise LogicError("blocks overlap")
    l1, l2, lj = block_logics(ps)
    p1, p2 = consistent_literal_pool(l1), consistent_literal_pool(l2)
    checked = 0
    for a, a2 in itertools.product(p1, p2):
        for b, b2 in itertools.product(p1, p2):
            am = lj.mask_of(a.formula & a2.formula)
            bm1, bm2 = lj.mask_of(b.formula), lj.mask_of(b2.formula)
            if law == "b*b":
                if not (l1.ent(a.mask, b.mask) and l2.ent(a2.mask, b2.mask)):
                    continue
                ok = lj.ent(am, bm1 & bm2)
            elif law == "b*m":
                if not (not l1.ent(a.mask, l1.neg(b.mask)) and l2.ent(a2.mask, b2.mask)):
                    continue
                ok = not lj.ent(am, lj.neg(bm1) | lj.neg(bm2))
            elif law == "m*m":
                if not (not l1.ent(a.mask, l1.neg(b.mask)) and not l2.ent(a2.mask, l2.neg(b2.mask))):
                    continue
                ok = not lj.ent(am, lj.neg(bm1) | lj.neg(bm2))
            else:
                ok = lj.ent(am, bm1 & bm2) == (l1.ent(a.mask, b.mask) and l2.derives(a2.mask, b2.mask))
            checked += 1
            if not ok:
                return Verdict.fail(law, {"alpha": a.text, "alpha2": a2.text, "beta": b.text, "beta2": b2.text},
                                    checked, note=TWO_LANGUAGE_LAWS[law])
    return Verdict.ok(law, checked, note=TWO_LANGUAGE_LAWS[law])
