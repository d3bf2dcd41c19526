"""Semantic interpolation, monotonic and nonmonotonic.

Monotonic: for value functions f <= g over a rich model set, with f blind
to J and g blind to J'', the functions on J' that fit between them are
exactly those inside the band [f+, g-].

Nonmonotonic: when mu factorizes over products, phi |~ psi is interpolated
by the cylinder over mu(phi)|J'.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

from .consequence import NmLogic
from .lang import (TOP, Formula, Language, ModelSet, ValueFunction, ValueSet, all_models, dnf, f_minus,
                   f_plus, is_insensitive, is_rich, parse_formula, restrict)
from .pref import PreferenceRelation, ProductStructure, build_set_variant, mu, nonempty_subsets
from .verdict import Verdict, combine


class InterpolationError(ValueError):
    pass


class PreconditionError(InterpolationError):
    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}


# ---------------------------------------------------------------------------
# monotonic


@dataclass(frozen=True)
class MonotonicProblem:
    gamma: ModelSet
    j: Language
    jp: Language
    jpp: Language
    f: ValueFunction
    g: ValueFunction

    def __post_init__(self):
        names = list(self.j.vars) + list(self.jp.vars) + list(self.jpp.vars)
        if sorted(names) != sorted(self.gamma.language.vars) or len(set(names)) != len(names):
            raise InterpolationError("J, J', J'' must partition the language")
        if not is_rich(self.gamma):
            raise InterpolationError("Gamma is not rich")
        if not is_insensitive(self.f, self.j):
            raise InterpolationError(f"f depends on {self.j}")
        if not is_insensitive(self.g, self.jpp):
            raise InterpolationError(f"g depends on {self.jpp}")
        bad = [m for m in self.gamma if self.f(m) > self.g(m)]
        if bad:
            raise InterpolationError(f"f > g at {bad[0]}")

    @property
    def values(self) -> ValueSet:
        return self.f.values

    def middle_points(self) -> list[tuple]:
        return sorted(restrict(self.gamma, self.jp).members)


@dataclass(frozen=True)
class InterpolantBand:
    points: tuple
    lower: Mapping
    upper: Mapping

    def to_json(self) -> dict:
        return {"points": [{"model": list(p), "lower": self.lower[p], "upper": self.upper[p]}
                           for p in self.points]}


def monotonic_band(p: MonotonicProblem) -> InterpolantBand:
    pts = p.middle_points()
    lower = {m: f_plus(p.f, p.jp, m) for m in pts}
    upper = {m: f_minus(p.g, p.jp, m) for m in pts}
    for m in pts:
        if lower[m] > upper[m]:
            raise AssertionError(f"band is empty at {m}")
    return InterpolantBand(tuple(pts), lower, upper)


def is_interpolant_monotonic(p: MonotonicProblem, h: Mapping, band: InterpolantBand | None = None) -> Verdict:
    """Band test: f+ <= h <= g- at every point of Gamma|J'."""
    band = band or monotonic_band(p)
    for m in band.points:
        if h[m] < band.lower[m]:
            return Verdict.fail("band", {"point": m, "h": h[m], "lower": band.lower[m]}, 1)
        if h[m] > band.upper[m]:
            return Verdict.fail("band", {"point": m, "h": h[m], "upper": band.upper[m]}, 1)
    return Verdict.ok("band", len(band.points))


def is_interpolant_direct(p: MonotonicProblem, h: Mapping) -> bool:
    """Definition test: f <= h(m|J') <= g on every model of Gamma."""
    proj = p.gamma.language.projector(p.jp)
    return all(p.f(m) <= h[proj(m)] <= p.g(m) for m in p.gamma.members)


def block_languages(sizes: tuple[int, int, int]) -> tuple[Language, Language, Language, Language]:
    names = iter("abcdefghijklmnop")
    j = Language(tuple(next(names) for _ in range(sizes[0])))
    jp = Language(tuple(next(names) for _ in range(sizes[1])))
    jpp = Language(tuple(next(names) for _ in range(sizes[2])))
    return j.disjoint_union(jp).disjoint_union(jpp), j, jp, jpp


def _functions_on(points: list, k: int) -> Iterator[dict]:
    for vals in itertools.product(range(k), repeat=len(points)):
        yield dict(zip(points, vals))


@dataclass
class MonotonicAudit:
    problems: int = 0
    candidates: int = 0
    band_violations: int = 0
    disagreements: int = 0
    exhaustive: bool = True
    first_disagreement: dict | None = None


def audit_monotonic(values: ValueSet, sizes: tuple[int, int, int], *, max_pairs: int = 400,
                    max_h: int = 512, samples_h: int = 200, seed: int = 0) -> MonotonicAudit:
    """Compare the band test with the definition over (f, g, h) triples.

    f ranges over functions of J' u J'', g over functions of J u J'.  Where the
    spaces are small everything is enumerated; otherwise f, g and h are
    drawn with a seeded generator, always including the band edges and their
    one-step perturbations.
    """
    rng = random.Random(seed)
    lang, j, jp, jpp = block_languages(sizes)
    k = len(values)
    gamma = ModelSet.full(lang, values)
    f_dom = Language(jp.vars + jpp.vars)
    g_dom = Language(j.vars + jp.vars)
    f_pts = list(all_models(f_dom, values))
    g_pts = list(all_models(g_dom, values))
    pf, pg = lang.projector(f_dom), lang.projector(g_dom)
    audit = MonotonicAudit()

    def lift(table, proj):
        return ValueFunction(gamma, {m: table[proj(m)] for m in gamma.members}, values)

    f_space = k ** len(f_pts)
    g_space = k ** len(g_pts)
    if f_space * g_space <= max_pairs * 4:
        pairs = ((fv, gv) for fv in _functions_on(f_pts, k) for gv in _functions_on(g_pts, k))
    else:
        audit.exhaustive = False

        def sampled():
            for _ in range(max_pairs):
                fv = {x: rng.randrange(k) for x in f_pts}
                lo = {x: 0 for x in g_pts}
                for m in gamma.members:
                    lo[pg(m)] = max(lo[pg(m)], fv[pf(m)])
                # g is drawn at or above the least g compatible with f
                gv = {x: rng.randint(lo[x], k - 1) for x in g_pts}
                yield fv, gv
        pairs = sampled()

    mid = sorted(restrict(gamma, jp).members)
    for fv, gv in pairs:
        f, g = lift(fv, pf), lift(gv, pg)
        if any(f(m) > g(m) for m in gamma.members):
            continue
        prob = MonotonicProblem(gamma, j, jp, jpp, f, g)
        band = monotonic_band(prob)
        audit.problems += 1
        if k ** len(mid) <= max_h:
            hs: Iterable[dict] = _functions_on(mid, k)
        else:
            audit.exhaustive = False
            hs = _band_probes(band, mid, k, rng, samples_h)
        for h in hs:
            audit.candidates += 1
            by_band = is_interpolant_monotonic(prob, h, band).holds
            if not by_band:
                audit.band_violations += 1
            if by_band != is_interpolant_direct(prob, h):
                audit.disagreements += 1
                if audit.first_disagreement is None:
                    audit.first_disagreement = {"f": fv, "g": gv, "h": h}
    return audit


def _band_probes(band: InterpolantBand, mid: list, k: int, rng: random.Random, n: int) -> Iterator[dict]:
    lo, hi = dict(band.lower), dict(band.upper)
    yield lo
    yield hi
    for m in mid:
        for base in (lo, hi):
            for step in (-1, 1):
                v = base[m] + step
                if 0 <= v < k:
                    h = dict(base)
                    h[m] = v
                    yield h
    for _ in range(n):
        yield {m: rng.randrange(k) for m in mid}
        yield {m: rng.randint(lo[m], hi[m]) for m in mid}


# ---------------------------------------------------------------------------
# relation families over sublanguages


def _names(lang_or_names) -> frozenset:
    return frozenset(lang_or_names.vars if isinstance(lang_or_names, Language) else lang_or_names)


class RelationFamily:
    """Preference relations on the models of several sublanguages.

    ``relations`` maps a set of variable names to a relation whose points are
    models over those variables, listed in the full language's order.
    """

    def __init__(self, language: Language, relations: Mapping):
        self.language = language
        self.relations = {_names(k): v for k, v in relations.items()}
        if _names(language) not in self.relations:
            raise InterpolationError("the family needs a relation on the whole language")
        self._mu1 = None
        self._logic = None

    def sublanguage(self, names) -> Language:
        return self.language.select(names)

    def relation(self, names) -> PreferenceRelation:
        return self.relations[_names(names)]

    def splits(self) -> Iterator[tuple[frozenset, frozenset, frozenset]]:
        for u in sorted(self.relations, key=lambda s: (len(s), sorted(s))):
            if len(u) < 2:
                continue
            for k in range(1, len(u)):
                for a in itertools.combinations(sorted(u), k):
                    a = frozenset(a)
                    b = u - a
                    if a in self.relations and b in self.relations and sorted(a) < sorted(b):
                        yield u, a, b

    def structure(self, a, b) -> ProductStructure:
        """The two-block product structure for a split (points in block order)."""
        la, lb = self.sublanguage(a), self.sublanguage(b)
        lu = la.disjoint_union(lb)
        ru = self.relation(_names(a) | _names(b))
        to_blocks = self.sublanguage(_names(a) | _names(b)).reorderer(lu)
        comp = PreferenceRelation(frozenset(to_blocks(p) for p in ru.carrier),
                                  frozenset((to_blocks(x), to_blocks(y)) for x, y in ru.edges), lu)
        return ProductStructure((la, lb), (self.relation(a), self.relation(b)), comp, "explicit")

    def mu_star_1_parts(self) -> tuple[Verdict, Verdict]:
        if self._mu1 is None:
            self._mu1 = self._mu_star_1_parts()
        return self._mu1

    def logic(self) -> NmLogic:
        if self._logic is None:
            self._logic = NmLogic(self.language, self.relation(self.language))
        return self._logic

    def _mu_star_1_parts(self) -> tuple[Verdict, Verdict]:
        from .mulsize import mu_star_1_parts
        subs, sups = [], []
        for u, a, b in self.splits():
            s, t = mu_star_1_parts(self.structure(a, b))
            tag = {"split": [sorted(a), sorted(b)]}
            subs.append(s if s.holds else Verdict.fail(s.rule, {**tag, **s.witness}, s.checked))
            sups.append(t if t.holds else Verdict.fail(t.rule, {**tag, **t.witness}, t.checked))
        return combine("mu*1:subset", subs), combine("mu*1:supset", sups)


def set_variant_family(blocks: Iterable[Language], components: Iterable[PreferenceRelation]) -> RelationFamily:
    """Set-variant Hamming relations on every union of the given blocks."""
    blocks, components = list(blocks), list(components)
    lang = Language(())
    for b in blocks:
        lang = lang.disjoint_union(b)
    rels = {}
    for k in range(1, len(blocks) + 1):
        for idx in itertools.combinations(range(len(blocks)), k):
            bs = [blocks[i] for i in idx]
            cs = [components[i] for i in idx]
            if k == 1:
                rels[_names(bs[0])] = cs[0]
                continue
            ps = build_set_variant(cs, bs)
            target = lang.select(ps.language.vars)
            re = ps.language.reorderer(target)
            rels[_names(ps.language)] = PreferenceRelation(
                frozenset(re(p) for p in ps.composed.carrier),
                frozenset((re(x), re(y)) for x, y in ps.composed.edges), target)
    return RelationFamily(lang, rels)


# ---------------------------------------------------------------------------
# nonmonotonic interpolation


def definable_over(s: ModelSet, sub: Language) -> Formula | None:
    """Formula over ``sub`` defining ``s`` when ``s`` is a cylinder over ``sub``."""
    proj = s.language.projector(sub)
    shadow = restrict(s, sub)
    cyl = frozenset(m for m in all_models(s.language, s.values) if proj(m) in shadow.members)
    if cyl != s.members:
        return None
    if len(shadow) == len(list(all_models(sub, s.values))):
        return TOP
    return dnf(shadow)


@dataclass(frozen=True)
class NmInterpolant:
    theta: ModelSet
    formula: Formula | None
    phi_entails_theta: bool
    theta_entails_psi: bool

    @property
    def ok(self) -> bool:
        return self.phi_entails_theta and self.theta_entails_psi


def _as_formula(f, lang):
    return parse_formula(f, lang) if isinstance(f, str) else f


def nm_interpolant(family: RelationFamily, phi, psi, j, jp, jpp, *, check_precondition: bool = True) -> NmInterpolant:
    """Theta = X_J x (mu(phi)|J') x X_J'' with both entailments verified."""
    lang = family.language
    j, jp, jpp = (lang.select(_names(x)) for x in (j, jp, jpp))
    if sorted(j.vars + jp.vars + jpp.vars) != sorted(lang.vars):
        raise InterpolationError("J, J', J'' must partition the language")
    phi, psi = _as_formula(phi, lang), _as_formula(psi, lang)
    if not phi.atoms() <= set(jp.vars) | set(jpp.vars):
        raise InterpolationError("phi must be written in J' u J''")
    if not psi.atoms() <= set(j.vars) | set(jp.vars):
        raise InterpolationError("psi must be written in J u J'")
    logic = family.logic()
    if not logic.entails(phi, psi):
        raise InterpolationError("phi does not entail psi")
    if check_precondition:
        v = check_mu_star_1_family(family)
        if not v.holds:
            raise PreconditionError("(mu*1) fails", v.witness)
    mu_phi = logic.mu_mask(logic.mask_of(phi))
    proj = lang.projector(jp)
    shadow = {proj(logic.models[i]) for i in range(len(logic.models)) if mu_phi >> i & 1}
    theta_mask = 0
    for i, m in enumerate(logic.models):
        if logic.carrier >> i & 1 and proj(m) in shadow:
            theta_mask |= 1 << i
    theta = logic.modelset(theta_mask)
    full_cyl = ModelSet(lang, frozenset(m for m in all_models(lang) if proj(m) in shadow))
    formula = definable_over(full_cyl, jp)
    if formula is not None and formula != TOP:
        formula = dnf(restrict(full_cyl, jp))
    return NmInterpolant(theta, formula,
                         logic.ent(logic.mask_of(phi), theta_mask),
                         logic.ent(theta_mask, logic.mask_of(psi)))


def check_mu_star_1_family(family: RelationFamily) -> Verdict:
    s, t = family.mu_star_1_parts()
    return combine("mu*1", [s, t])


def search_interpolants(logic: NmLogic, phi, psi, sub: Language, classical_left: bool = False) -> list[Formula]:
    """All alpha over ``sub`` (up to equivalence) with phi |~ alpha |~ psi.

    With ``classical_left`` the first step is phi |- alpha instead.
    """
    lang = logic.language
    phi, psi = _as_formula(phi, lang), _as_formula(psi, lang)
    pm, sm = logic.mask_of(phi), logic.mask_of(psi)
    sub_models = list(all_models(sub))
    proj = lang.projector(sub)
    out = []
    for k in range(len(sub_models) + 1):
        for chosen in itertools.combinations(sub_models, k):
            chosen = set(chosen)
            am = 0
            for i, m in enumerate(logic.models):
                if proj(m) in chosen:
                    am |= 1 << i
            am &= logic.carrier
            left = logic.derives(pm, am) if classical_left else logic.ent(pm, am)
            if left and logic.ent(am, sm):
                out.append(_sub_formula(chosen, sub))
    return out


def _sub_formula(chosen: set, sub: Language) -> Formula:
    s = ModelSet(sub, frozenset(chosen))
    if not chosen:
        return parse_formula("false")
    return dnf(s)


# ---------------------------------------------------------------------------
# the p, q, r fixtures


MUL_MU_LANGUAGE = Language(("p", "q", "r"))
MUL_MU_PHI = "!q & !r"
MUL_MU_PSI = "!p & !q"


def dominates(s: tuple, t: tuple) -> bool:
    """s < t: s has a negative literal where t is positive, and never the reverse."""
    return any(a < b for a, b in zip(s, t)) and not any(a > b for a, b in zip(s, t))


def _single_edge(lang: Language) -> PreferenceRelation:
    pts = list(all_models(lang))
    return PreferenceRelation(frozenset(pts), frozenset({((0, 0, 0), (1, 0, 0))}), lang)


def fixture_mul_mu(variant: int) -> RelationFamily:
    """Relations on every sublanguage of {p, q, r} for the three variants.

    1: single edge !p!q!r < p!q!r on full sequences, shorter ones unordered.
    2: the same edge on full sequences, dominance on shorter ones.
    3: dominance on full sequences, shorter ones unordered.
    """
    if variant not in (1, 2, 3):
        raise ValueError(f"variant must be 1, 2 or 3, got {variant}")
    lang = MUL_MU_LANGUAGE
    rels = {}
    for k in (1, 2, 3):
        for names in itertools.combinations(lang.vars, k):
            sub = lang.select(names)
            pts = list(all_models(sub))
            if k == 3:
                rel = _single_edge(sub) if variant in (1, 2) else PreferenceRelation.from_predicate(pts, dominates, sub)
            elif variant == 2:
                rel = PreferenceRelation.from_predicate(pts, dominates, sub)
            else:
                rel = PreferenceRelation.empty(pts, sub)
            rels[frozenset(names)] = rel
    return RelationFamily(lang, rels)


def mul_mu_claims(variant: int) -> dict[str, bool]:
    """The verdicts the fixture is built to exhibit, computed from scratch."""
    fam = fixture_mul_mu(variant)
    sub, sup = fam.mu_star_1_parts()
    logic = fam.logic()
    found = search_interpolants(logic, MUL_MU_PHI, MUL_MU_PSI, Language(("q",)))
    return {"mu*1 subset holds": sub.holds, "mu*1 supset holds": sup.holds,
            "phi |~ psi": logic.entails(MUL_MU_PHI, MUL_MU_PSI),
            "interpolant over {q} exists": bool(found)}


EXPECTED_MUL_MU = {
    1: {"mu*1 subset holds": True, "mu*1 supset holds": False, "phi |~ psi": True,
        "interpolant over {q} exists": False},
    2: {"mu*1 subset holds": False, "mu*1 supset holds": True, "phi |~ psi": True,
        "interpolant over {q} exists": False},
    3: {"mu*1 subset holds": True, "mu*1 supset holds": False, "phi |~ psi": True,
        "interpolant over {q} exists": True},
}
