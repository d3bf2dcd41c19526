"""Distance-based revision and its behaviour on split languages."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

from .lang import (Formula, Language, LanguageError, ModelSet, all_models, models_of, parse_formula,
                   restrict)
from .consequence import literal_conjunctions, theory_of
from .verdict import Verdict, combine


class RevisionError(ValueError):
    pass


@dataclass(frozen=True)
class Distance:
    """Exact, not necessarily symmetric, distance between models of a language."""

    language: Language
    table: Mapping

    def __post_init__(self):
        pts = list(all_models(self.language))
        for x in pts:
            for y in pts:
                if (x, y) not in self.table:
                    raise RevisionError(f"distance undefined for {x}, {y}")
                v = self.table[(x, y)]
                if v < 0:
                    raise RevisionError(f"negative distance {v} for {x}, {y}")
                if (v == 0) != (x == y):
                    raise RevisionError(f"d({x}, {y}) = {v} breaks d = 0 iff equal")

    def __call__(self, x, y) -> Fraction:
        return self.table[(tuple(x), tuple(y))]

    @classmethod
    def from_callable(cls, language: Language, fn: Callable) -> "Distance":
        pts = list(all_models(language))
        return cls(language, {(x, y): Fraction(fn(x, y)) for x in pts for y in pts})

    @classmethod
    def hamming(cls, language: Language) -> "Distance":
        return cls.from_callable(language, lambda x, y: sum(a != b for a, b in zip(x, y)))

    def to_json(self) -> dict:
        pts = list(all_models(self.language))
        pairs = []
        for i, x in enumerate(pts):
            for j, y in enumerate(pts):
                if i != j:
                    v = self.table[(x, y)]
                    pairs.append([i, j, v.numerator, v.denominator])
        return {"language": list(self.language.vars), "pairs": pairs}

    @classmethod
    def from_json(cls, data: dict) -> "Distance":
        lang = Language(tuple(data["language"]))
        pts = list(all_models(lang))
        table = {(x, x): Fraction(0) for x in pts}
        for i, j, num, den in data["pairs"]:
            if not (0 <= i < len(pts) and 0 <= j < len(pts)):
                raise RevisionError(f"model index out of range: {i}, {j}")
            table[(pts[i], pts[j])] = Fraction(num, den)
        return cls(lang, table)


@dataclass(frozen=True)
class SplitDistance:
    """A distance on L1 + L2 together with its two components."""

    left: Distance
    right: Distance
    whole: Distance

    @property
    def language(self) -> Language:
        return self.whole.language


def combine_distances(d1: Distance, d2: Distance, op: Callable[[Fraction, Fraction], Fraction]) -> SplitDistance:
    lang = d1.language.disjoint_union(d2.language)
    n = len(d1.language)
    whole = Distance.from_callable(lang, lambda x, y: op(d1(x[:n], y[:n]), d2(x[n:], y[n:])))
    return SplitDistance(d1, d2, whole)


def sum_distance(d1: Distance, d2: Distance) -> SplitDistance:
    return combine_distances(d1, d2, lambda a, b: a + b)


def max_distance(d1: Distance, d2: Distance) -> SplitDistance:
    return combine_distances(d1, d2, max)


def sum_hamming(l1: Language, l2: Language) -> SplitDistance:
    return sum_distance(Distance.hamming(l1), Distance.hamming(l2))


# ---------------------------------------------------------------------------
# the bar operator and revision


def _bar_members(xs: Iterable, ys: Iterable, d: Callable) -> frozenset:
    best = None
    out: set = set()
    for x in xs:
        for y in ys:
            v = d(x, y)
            if best is None or v < best:
                best, out = v, {y}
            elif v == best:
                out.add(y)
    return frozenset(out)


def bar(x: ModelSet, y: ModelSet, d: Distance) -> ModelSet:
    """Points of Y at globally minimal distance from X."""
    if x.language != y.language or x.language != d.language:
        raise LanguageError("bar needs both sets and the distance over one language")
    if not x.members or not y.members:
        warnings.warn("bar of an empty set is empty", stacklevel=2)
        return ModelSet(y.language, frozenset(), y.values)
    return ModelSet(y.language, _bar_members(x.members, y.members, d), y.values)


@dataclass(frozen=True)
class Revision:
    models: ModelSet
    theory: Formula


def revise(t_models: ModelSet, phi, d: Distance) -> Revision:
    lang = t_models.language
    phi = parse_formula(phi, lang) if isinstance(phi, str) else phi
    target = models_of(phi, lang)
    if not t_models.members:
        raise RevisionError("the knowledge base is inconsistent")
    if not target.members:
        raise RevisionError("revising by an unsatisfiable formula")
    out = bar(t_models, target, d)
    return Revision(out, theory_of(out))


@dataclass
class RevisionEngine:
    distance: Distance
    kb: ModelSet

    def revise(self, phi) -> Revision:
        return revise(self.kb, phi, self.distance)


# ---------------------------------------------------------------------------
# GHD


def _pairs(lang: Language) -> list[tuple]:
    pts = list(all_models(lang))
    return [(x, y) for x in pts for y in pts]


def check_GHD(sd: SplitDistance) -> dict[str, Verdict]:
    """Both GHD conditions, exhaustively over all pairs of model pairs."""
    p1, p2 = _pairs(sd.left.language), _pairs(sd.right.language)
    d1 = {p: sd.left(*p) for p in p1}
    d2 = {p: sd.right(*p) for p in p2}
    dw = {(a, b): sd.whole(a[0] + b[0], a[1] + b[1]) for a in p1 for b in p2}
    g1 = g2 = None
    checked1 = checked2 = 0
    for s, a in itertools.product(p1, repeat=2):
        le1, lt1 = d1[s] <= d1[a], d1[s] < d1[a]
        for s2, a2 in itertools.product(p2, repeat=2):
            le2, lt2 = d2[s2] <= d2[a2], d2[s2] < d2[a2]
            lt = dw[(s, s2)] < dw[(a, a2)]
            if le1 and le2 and (lt1 or lt2):
                checked1 += 1
                if not lt and g1 is None:
                    g1 = _ghd_witness(s, s2, a, a2, d1, d2, dw)
            if lt:
                checked2 += 1
                if not (lt1 or lt2) and g2 is None:
                    g2 = _ghd_witness(s, s2, a, a2, d1, d2, dw)
    v1 = Verdict.fail("GHD1", g1, checked1) if g1 else Verdict.ok("GHD1", checked1)
    v2 = Verdict.fail("GHD2", g2, checked2) if g2 else Verdict.ok("GHD2", checked2)
    return {"ghd1": v1, "ghd2": v2}


def _ghd_witness(s, s2, a, a2, d1, d2, dw) -> dict:
    return {"sigma": s[0], "tau": s[1], "sigma'": s2[0], "tau'": s2[1],
            "alpha": a[0], "beta": a[1], "alpha'": a2[0], "beta'": a2[1],
            "d": str(d1[s]), "d(alpha,beta)": str(d1[a]), "d'": str(d2[s2]), "d'(alpha',beta')": str(d2[a2]),
            "d(product)": str(dw[(s, s2)]), "d(alpha product)": str(dw[(a, a2)])}


def _subsets(pts: list, max_size: int | None = None) -> list[frozenset]:
    top = len(pts) if max_size is None else min(max_size, len(pts))
    return [frozenset(c) for k in range(1, top + 1) for c in itertools.combinations(pts, k)]


def verify_bar_factorization(sd: SplitDistance, max_size: int | None = None) -> Verdict:
    """(S1 x S1') | (S2 x S2') = (S1 | S2) x (S1' | S2') on every rectangle quadruple."""
    pts1, pts2 = list(all_models(sd.left.language)), list(all_models(sd.right.language))
    subs1, subs2 = _subsets(pts1, max_size), _subsets(pts2, max_size)
    left = {(a, b): _bar_members(a, b, sd.left) for a in subs1 for b in subs1}
    right = {(a, b): _bar_members(a, b, sd.right) for a in subs2 for b in subs2}
    checked = 0
    for s1, s2 in itertools.product(subs1, repeat=2):
        for t1, t2 in itertools.product(subs2, repeat=2):
            checked += 1
            xs = [x + y for x in s1 for y in t1]
            ys = [x + y for x in s2 for y in t2]
            got = _bar_members(xs, ys, sd.whole)
            want = frozenset(x + y for x in left[(s1, s2)] for y in right[(t1, t2)])
            if got != want:
                return Verdict.fail("bar*", {"S1": sorted(s1), "S1'": sorted(t1), "S2": sorted(s2),
                                             "S2'": sorted(t2), "product bar": sorted(got),
                                             "bar product": sorted(want)}, checked)
    return Verdict.ok("bar*", checked)


# ---------------------------------------------------------------------------
# revision on split languages


def _formula(f, lang: Language) -> Formula:
    return parse_formula(f, lang) if isinstance(f, str) else f


def _check_in(f: Formula, lang: Language, what: str):
    if not f.atoms() <= set(lang.vars):
        raise LanguageError(f"{what} must be written in {lang}")


def check_revision_split(sd: SplitDistance, phi, phi2, psi, psi2) -> Verdict:
    """(phi & phi') * (psi & psi') equals (phi * psi) & (phi' * psi')."""
    l1, l2, lang = sd.left.language, sd.right.language, sd.language
    phi, psi = _formula(phi, l1), _formula(psi, l1)
    phi2, psi2 = _formula(phi2, l2), _formula(psi2, l2)
    for f, l, w in ((phi, l1, "phi"), (psi, l1, "psi"), (phi2, l2, "phi'"), (psi2, l2, "psi'")):
        _check_in(f, l, w)
    parts = [models_of(f, l) for f, l in ((phi, l1), (psi, l1), (phi2, l2), (psi2, l2))]
    if any(not p.members for p in parts):
        return Verdict.ok("revision split", 0, "an argument is unsatisfiable")
    lhs = bar(models_of(phi & phi2, lang), models_of(psi & psi2, lang), sd.whole)
    a = bar(parts[0], parts[1], sd.left)
    b = bar(parts[2], parts[3], sd.right)
    rhs = frozenset(x + y for x in a.members for y in b.members)
    if lhs.members != rhs:
        return Verdict.fail("revision split", {"phi": str(phi), "phi'": str(phi2), "psi": str(psi),
                                               "psi'": str(psi2), "lhs": sorted(lhs.members),
                                               "rhs": sorted(rhs)}, 1)
    return Verdict.ok("revision split", 1)


def check_revision_interpolation(sd: SplitDistance, phi, phi2, psi, psi2, rho, jp: Language | None = None) -> Verdict:
    """If (phi & phi') * (psi & psi') |- rho then phi' * psi' |- rho.

    The split is (L - J) + J with phi, psi in L - J, rho in J and phi', psi'
    in J' within J.  The conclusion is read in J with the J-component distance.
    """
    l1, l2, lang = sd.left.language, sd.right.language, sd.language
    jp = jp or l2
    if not set(jp.vars) <= set(l2.vars):
        raise LanguageError("J' must lie inside J")
    phi, psi = _formula(phi, l1), _formula(psi, l1)
    phi2, psi2, rho = _formula(phi2, l2), _formula(psi2, l2), _formula(rho, l2)
    for f, l, w in ((phi, l1, "phi"), (psi, l1, "psi"), (phi2, jp, "phi'"), (psi2, jp, "psi'"), (rho, l2, "rho")):
        _check_in(f, l, w)
    m_phi2, m_psi2 = models_of(phi2, l2), models_of(psi2, l2)
    if not (models_of(phi, l1).members and models_of(psi, l1).members and m_phi2.members and m_psi2.members):
        return Verdict.ok("revision interpolation", 0, "an argument is unsatisfiable")
    lhs = bar(models_of(phi & phi2, lang), models_of(psi & psi2, lang), sd.whole)
    if not lhs.members <= models_of(rho, lang).members:
        return Verdict.ok("revision interpolation", 0, "vacuous")
    concl = bar(m_phi2, m_psi2, sd.right)
    if not concl.members <= models_of(rho, l2).members:
        return Verdict.fail("revision interpolation", {"phi": str(phi), "phi'": str(phi2), "psi": str(psi),
                                                       "psi'": str(psi2), "rho": str(rho),
                                                       "phi' * psi'": sorted(concl.members)}, 1)
    return Verdict.ok("revision interpolation", 1)


def split_suite(sd: SplitDistance) -> dict[str, Verdict]:
    """Every check of this module over all literal instantiations of the split."""
    l1, l2 = sd.left.language, sd.right.language
    out = dict(check_GHD(sd))
    out["bar*"] = verify_bar_factorization(sd)
    lits1, lits2 = list(literal_conjunctions(l1)), list(literal_conjunctions(l2))
    out["revision split"] = combine("revision split", (
        check_revision_split(sd, a, b, c, e)
        for a, c in itertools.product(lits1, repeat=2) for b, e in itertools.product(lits2, repeat=2)))
    out["revision interpolation"] = audit_revision_interpolation(sd)
    return out


def audit_revision_interpolation(sd: SplitDistance) -> Verdict:
    """The lemma on all instances: literal conjunctions, J' any part of J, rho any set over J."""
    l1, l2, lang = sd.left.language, sd.right.language, sd.language
    pts2 = list(all_models(l2))
    lits1 = list(literal_conjunctions(l1))
    checked, vacuous = 0, 0
    for k in range(len(l2) + 1):
        for names in itertools.combinations(l2.vars, k):
            jp = l2.select(names)
            lits2 = list(literal_conjunctions(jp))
            for phi, psi in itertools.product(lits1, repeat=2):
                a = bar(models_of(phi, l1), models_of(psi, l1), sd.left)
                for phi2, psi2 in itertools.product(lits2, repeat=2):
                    lhs = bar(models_of(phi & phi2, lang), models_of(psi & psi2, lang), sd.whole)
                    shadow = restrict(lhs, l2).members
                    concl = bar(models_of(phi2, l2), models_of(psi2, l2), sd.right).members
                    # rho ranges over every subset of J-models; the premise holds iff rho covers the shadow
                    for r in range(len(pts2) + 1):
                        for rho in itertools.combinations(pts2, r):
                            rho = frozenset(rho)
                            if not shadow <= rho:
                                vacuous += 1
                                continue
                            checked += 1
                            if not concl <= rho:
                                return Verdict.fail("revision interpolation", {
                                    "phi": str(phi), "psi": str(psi), "phi'": str(phi2), "psi'": str(psi2),
                                    "J'": list(jp.vars), "rho models": sorted(rho)}, checked)
    return Verdict.ok("revision interpolation", checked, f"{vacuous} instances with false premise")


# ---------------------------------------------------------------------------
# AGM postulates


def check_agm_postulates(distance: Distance, kbs: Iterable[ModelSet] | None = None,
                         targets: Iterable[ModelSet] | None = None) -> dict[str, Verdict]:
    """Success, consistency and vacuity of T * phi over pools of model sets."""
    lang = distance.language
    pts = list(all_models(lang))
    pool = [ModelSet(lang, s) for s in _subsets(pts)]
    kbs = list(kbs) if kbs is not None else pool
    targets = list(targets) if targets is not None else pool
    fails = {"success": None, "consistency": None, "vacuity": None}
    counts = {"success": 0, "consistency": 0, "vacuity": 0}
    for t in kbs:
        for y in targets:
            out = bar(t, y, distance).members
            counts["success"] += 1
            counts["consistency"] += 1
            if not out <= y.members and fails["success"] is None:
                fails["success"] = {"T": sorted(t.members), "phi": sorted(y.members)}
            if not out and fails["consistency"] is None:
                fails["consistency"] = {"T": sorted(t.members), "phi": sorted(y.members)}
            both = t.members & y.members
            if both:
                counts["vacuity"] += 1
                if out != both and fails["vacuity"] is None:
                    fails["vacuity"] = {"T": sorted(t.members), "phi": sorted(y.members), "got": sorted(out)}
    return {k: (Verdict.fail(k, fails[k], counts[k]) if fails[k] else Verdict.ok(k, counts[k])) for k in fails}


# ---------------------------------------------------------------------------
# sweep over small component distances, including ties


@dataclass
class GhdSweep:
    structures: int = 0
    ghd: int = 0
    factorizing: int = 0
    divergences: int = 0
    first_divergence: dict | None = None
    records: list | None = None


def ghd_sweep(values: Iterable[int] = (1, 2, 3), combinators: Mapping | None = None,
              on_record: Callable[[dict], None] | None = None) -> GhdSweep:
    """Every pair of one-variable component distances with values in ``values``.

    For each combinator the GHD verdict is compared with bar factorization;
    a divergence is a GHD distance that does not factorize.
    """
    combinators = combinators or {"sum": lambda a, b: a + b, "max": max}
    values = [Fraction(v) for v in values]
    l1, l2 = Language(("a",)), Language(("b",))
    sweep = GhdSweep()
    comps = [(u, v) for u in values for v in values]
    for (u1, v1), (u2, v2) in itertools.product(comps, repeat=2):
        d1 = Distance(l1, {((0,), (0,)): 0, ((1,), (1,)): 0, ((0,), (1,)): u1, ((1,), (0,)): v1})
        d2 = Distance(l2, {((0,), (0,)): 0, ((1,), (1,)): 0, ((0,), (1,)): u2, ((1,), (0,)): v2})
        for name, op in combinators.items():
            sd = combine_distances(d1, d2, op)
            g = check_GHD(sd)
            is_ghd = g["ghd1"].holds and g["ghd2"].holds
            fac = verify_bar_factorization(sd).holds
            sweep.structures += 1
            sweep.ghd += is_ghd
            sweep.factorizing += fac
            rec = {"combinator": name, "left": [str(u1), str(v1)], "right": [str(u2), str(v2)],
                   "ghd": is_ghd, "factorizes": fac, "ties": len({u1, v1, u2, v2}) < 4}
            if is_ghd and not fac:
                sweep.divergences += 1
                if sweep.first_divergence is None:
                    sweep.first_divergence = rec
            if on_record:
                on_record(rec)
    return sweep
