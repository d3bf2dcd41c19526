"""Multiplicative size laws on products and the oracles that cross-check them.

The checkers here take explicit structures.  The two oracles enumerate
structures themselves: component relations up to isomorphism, product
relations either exhaustively (products of at most four points) or through
"type combinators" for larger products, where an edge between two product
points is decided by how their components compare (equal, better, worse,
incomparable).
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Sequence

from .lang import Language, ModelSet, models_of, product, restrict
from .pref import (PreferenceRelation, ProductStructure, abstract_relation, check_GH, is_smooth, mu,
                   nonempty_subsets, product_points)
from .search import better_masks, edges_of, mu_mask, relation_codes
from .size import SizeSystem, principal_filter_from_mu, submasks
from .verdict import Verdict, combine

MAX_ORACLE_BOUND = 3


# ---------------------------------------------------------------------------
# abstract independence


@dataclass(frozen=True)
class IndependenceInstance:
    """f: D -> C with compositions on both sides and a way to split results."""

    f: Callable[[Any], Any]
    compose_d: Callable[[Any, Any], Any]
    compose_c: Callable[[Any, Any], Any]
    split: Callable[[Any, Any], tuple]
    info: Callable[[Any, Any], Any] = lambda a, b: None


def check_independence(inst: IndependenceInstance, samples: Iterable[tuple]) -> Verdict:
    """f(a o b) = f(a) o' f(b), and f(a), f(b) are recoverable from f(a o b)."""
    n = 0
    for a, b in samples:
        n += 1
        fa, fb = inst.f(a), inst.f(b)
        joint = inst.f(inst.compose_d(a, b))
        if joint != inst.compose_c(fa, fb):
            return Verdict.fail("independence", {"part": "composition", "left": a, "right": b}, n)
        if tuple(inst.split(joint, inst.info(a, b))) != (fa, fb):
            return Verdict.fail("independence", {"part": "recovery", "left": a, "right": b}, n)
    return Verdict.ok("independence", n)


def formula_independence() -> IndependenceInstance:
    """Formulas on disjoint languages: conjunction versus product of model sets."""
    def f(d):
        phi, lang = d
        return models_of(phi, lang)

    return IndependenceInstance(
        f=f,
        compose_d=lambda a, b: (a[0] & b[0], a[1].disjoint_union(b[1])),
        compose_c=product,
        split=lambda c, langs: (restrict(c, langs[0]), restrict(c, langs[1])),
        info=lambda a, b: (a[1], b[1]),
    )


# ---------------------------------------------------------------------------
# (mu*1), (mu*2) and friends on explicit product structures


def _component_domain(ps: ProductStructure):
    return [list(nonempty_subsets(c.carrier)) for c in ps.components]


def mu_star_1_parts(ps: ProductStructure, domain: Iterable[Sequence] | None = None) -> tuple[Verdict, Verdict]:
    """Both inclusions of mu(X1 x .. x Xn) = mu(X1) x .. x mu(Xn), separately.

    ``domain`` is an iterable of tuples of component subsets; default all
    tuples of nonempty subsets.
    """
    if domain is None:
        domain = itertools.product(*_component_domain(ps))
    sub = sup = None
    n = 0
    for parts in domain:
        parts = tuple(frozenset(p) for p in parts)
        n += 1
        rect = frozenset(product_points(parts))
        lhs = mu(ps.composed, rect)
        rhs = frozenset(product_points([mu(c, p) for c, p in zip(ps.components, parts)]))
        if sub is None and not lhs <= rhs:
            sub = {"factors": parts, "mu_product": lhs, "product_mu": rhs, "extra": lhs - rhs}
        if sup is None and not rhs <= lhs:
            sup = {"factors": parts, "mu_product": lhs, "product_mu": rhs, "missing": rhs - lhs}
        if sub is not None and sup is not None:
            break
    v_sub = Verdict.ok("mu*1:subset", n) if sub is None else Verdict.fail("mu*1:subset", sub, n)
    v_sup = Verdict.ok("mu*1:supset", n) if sup is None else Verdict.fail("mu*1:supset", sup, n)
    return v_sub, v_sup


def check_mu_star_1(ps, domain=None) -> Verdict:
    """mu of a product is the product of the mus; also accepts a sublanguage family."""
    if hasattr(ps, "mu_star_1_parts"):
        sub, sup = ps.mu_star_1_parts()
    else:
        sub, sup = mu_star_1_parts(ps, domain)
    return combine("mu*1", [sub, sup])


def check_mu_star_2(ps: ProductStructure, block: int = 0, domain: Iterable | None = None) -> Verdict:
    """mu(S) c= G  =>  mu(S|X') c= G|X', for S ranging over subsets of the product.

    Taking G = mu(S) is the strongest instance, since restriction is monotone.
    """
    if not 0 <= block < len(ps.blocks):
        raise ValueError(f"no block {block}")
    comp = ps.components[block]
    n = 0
    for s in (nonempty_subsets(ps.composed.carrier) if domain is None else domain):
        s = frozenset(s)
        n += 1
        proj_s = frozenset(ps.split(p)[block] for p in s)
        proj_mu = frozenset(ps.split(p)[block] for p in mu(ps.composed, s))
        lhs = mu(comp, proj_s)
        if not lhs <= proj_mu:
            return Verdict.fail("mu*2", {"sigma": s, "block": block, "mu_restricted": lhs,
                                         "restricted_mu": proj_mu}, n)
    return Verdict.ok("mu*2", n)


def check_note_independence(ps: ProductStructure) -> Verdict:
    """s r' < t r' for one r' implies s r'' < t r'' for every r'' (and symmetrically)."""
    if len(ps.blocks) != 2:
        raise ValueError("two-block product expected")
    c1, c2 = ps.components
    r = ps.composed.less
    n = 0
    p1, p2 = sorted(c1.carrier), sorted(c2.carrier)
    for s, t in itertools.permutations(p1, 2):
        for rho in p2:
            if r(s + rho, t + rho):
                for rho2 in p2:
                    n += 1
                    if not r(s + rho2, t + rho2):
                        return Verdict.fail("note", {"sigma": s, "tau": t, "rho": rho, "rho2": rho2}, n)
    for s, t in itertools.permutations(p2, 2):
        for rho in p1:
            if r(rho + s, rho + t):
                for rho2 in p1:
                    n += 1
                    if not r(rho2 + s, rho2 + t):
                        return Verdict.fail("note", {"sigma": s, "tau": t, "rho": rho, "rho2": rho2}, n)
    return Verdict.ok("note", n)


def check_small_or(ps: ProductStructure, gamma: Iterable, gamma2: Iterable) -> dict[str, Verdict]:
    """Both halves of the small-or-small fact for one rectangle.

    Smallness is relational: every element has a strictly better one in the
    base.  Each half is reported vacuous when its GH premise fails.
    """
    c1, c2 = ps.components
    g1, g2 = frozenset(gamma), frozenset(gamma2)
    if not g1 <= c1.carrier or not g2 <= c2.carrier:
        raise ValueError("Gamma must lie inside the component carriers")

    def small(rel, g, base):
        return all(any(rel.less(s, x) for s in base) for x in g)

    gh1, gh2 = check_GH(ps)
    rect = frozenset(product_points([g1, g2]))
    prod_small = small(ps.composed, rect, ps.composed.carrier)
    f1, f2 = small(c1, g1, c1.carrier), small(c2, g2, c2.carrier)
    out = {}
    if not gh2.holds or not prod_small:
        out["product_small_implies_factor_small"] = Verdict.ok("small-or(1)", 0, note="premise unmet")
    elif f1 or f2:
        out["product_small_implies_factor_small"] = Verdict.ok("small-or(1)", 1)
    else:
        out["product_small_implies_factor_small"] = Verdict.fail("small-or(1)", {"gamma": g1, "gamma2": g2}, 1)
    if not gh1.holds or not (f1 or f2):
        out["factor_small_implies_product_small"] = Verdict.ok("small-or(2)", 0, note="premise unmet")
    elif prod_small:
        out["factor_small_implies_product_small"] = Verdict.ok("small-or(2)", 1)
    else:
        out["factor_small_implies_product_small"] = Verdict.fail("small-or(2)", {"gamma": g1, "gamma2": g2}, 1)
    return out


# ---------------------------------------------------------------------------
# size systems on a product


@dataclass
class ProductSizes:
    """Size systems on two components and on their rectangles."""

    sys1: SizeSystem
    sys2: SizeSystem
    sysp: SizeSystem

    def rect(self, g1: int, g2: int) -> int:
        pts = product_points([self.sys1.points(g1), self.sys2.points(g2)])
        return self.sysp.mask(pts)

    def base_pairs(self) -> Iterator[tuple[int, int, int]]:
        for x in self.sys1.bases:
            for y in self.sys2.bases:
                r = self.rect(x, y)
                if not self.sysp.has_base(r):
                    from .size import DomainError
                    raise DomainError(f"rectangle over {sorted(self.sys1.points(x))} x "
                                      f"{sorted(self.sys2.points(y))} is not a base set")
                yield x, y, r


def product_sizes(ps: ProductStructure) -> ProductSizes:
    """Principal filters of the component relations and of the product on rectangles."""
    c1, c2 = ps.components
    d1, d2 = list(nonempty_subsets(c1.carrier)), list(nonempty_subsets(c2.carrier))
    sys1 = principal_filter_from_mu({x: mu(c1, x) for x in d1}, c1.carrier)
    sys2 = principal_filter_from_mu({y: mu(c2, y) for y in d2}, c2.carrier)
    rects = {frozenset(product_points([x, y])) for x in d1 for y in d2}
    sysp = principal_filter_from_mu({r: mu(ps.composed, r) for r in rects}, ps.composed.carrier)
    return ProductSizes(sys1, sys2, sysp)


def check_s_times_s(sizes: ProductSizes) -> Verdict:
    """G1 x G2 small in S1 x S2 iff G1 small in S1 or G2 small in S2."""
    n = 0
    s1, s2, sp = sizes.sys1, sizes.sys2, sizes.sysp
    for x, y, r in sizes.base_pairs():
        for g1 in submasks(x):
            for g2 in submasks(y):
                n += 1
                lhs = sp.is_small(sizes.rect(g1, g2), r)
                rhs = s1.is_small(g1, x) or s2.is_small(g2, y)
                if lhs != rhs:
                    return Verdict.fail("s*s", {"sigma1": s1.points(x), "sigma2": s2.points(y),
                                                "gamma1": s1.points(g1), "gamma2": s2.points(g2),
                                                "product_small": lhs}, n)
    return Verdict.ok("s*s", n)


PRODUCT_LAWS = {
    "b*1=>b": "G1 in F(S1) => G1 x S2 in F(S1 x S2), and symmetrically",
    "s*1=>s": "G1 in I(S1) => G1 x S2 in I(S1 x S2), and symmetrically",
    "s*x=>s": "G1 in I(S1), G2 c= S2 => G1 x G2 in I(S1 x S2)",
    "b*b=>b": "G1 in F(S1), G2 in F(S2) => G1 x G2 in F(S1 x S2)",
    "b*m=>m": "G1 in F(S1), G2 in M+(S2) => G1 x G2 in M+(S1 x S2)",
    "m*m=>m": "G1 in M+(S1), G2 in M+(S2) => G1 x G2 in M+(S1 x S2)",
    "pr(b)=b": "G in F(S1 x S2) => G|L1 in F(S1) and G|L2 in F(S2)",
}


def check_product_size_laws(sizes: ProductSizes, law: str) -> Verdict:
    if law not in PRODUCT_LAWS:
        raise KeyError(f"unknown product law {law!r}")
    s1, s2, sp = sizes.sys1, sizes.sys2, sizes.sysp
    n = 0

    def fail(w):
        return Verdict.fail(law, {k: (s1 if k.endswith("1") else s2 if k.endswith("2") else sp).points(v)
                                  if isinstance(v, int) else v for k, v in w.items()}, n, note=PRODUCT_LAWS[law])

    for x, y, r in sizes.base_pairs():
        if law == "pr(b)=b":
            for g in submasks(r):
                if not sp.is_big(g, r):
                    continue
                n += 1
                pts = sp.points(g)
                p1 = s1.mask({p[:len(next(iter(s1.universe)))] for p in pts}) if pts else 0
                p2 = s2.mask({p[len(p) - len(next(iter(s2.universe))):] for p in pts}) if pts else 0
                if not (s1.is_big(p1, x) and s2.is_big(p2, y)):
                    return fail({"sigma1": x, "sigma2": y, "gamma": g, "proj1": p1 if p1 else 0})
            continue
        for g1 in submasks(x):
            for g2 in submasks(y):
                rg = sizes.rect(g1, g2)
                if law == "b*1=>b":
                    checks = []
                    if g2 == y and s1.is_big(g1, x):
                        checks.append(sp.is_big(rg, r))
                    if g1 == x and s2.is_big(g2, y):
                        checks.append(sp.is_big(rg, r))
                elif law == "s*1=>s":
                    checks = []
                    if g2 == y and s1.is_small(g1, x):
                        checks.append(sp.is_small(rg, r))
                    if g1 == x and s2.is_small(g2, y):
                        checks.append(sp.is_small(rg, r))
                elif law == "s*x=>s":
                    checks = [sp.is_small(rg, r)] if s1.is_small(g1, x) else []
                elif law == "b*b=>b":
                    checks = [sp.is_big(rg, r)] if s1.is_big(g1, x) and s2.is_big(g2, y) else []
                elif law == "b*m=>m":
                    checks = [sp.is_mplus(rg, r)] if s1.is_big(g1, x) and s2.is_mplus(g2, y) else []
                else:
                    checks = [sp.is_mplus(rg, r)] if s1.is_mplus(g1, x) and s2.is_mplus(g2, y) else []
                for ok in checks:
                    n += 1
                    if not ok:
                        return fail({"sigma1": x, "sigma2": y, "gamma1": g1, "gamma2": g2})
    return Verdict.ok(law, n, note=PRODUCT_LAWS[law])


# ---------------------------------------------------------------------------
# oracles


TYPES = ("=", "<", ">", "|")


def _type(code: int, n: int, i: int, j: int) -> int:
    if i == j:
        return 0
    if code >> (i * n + j) & 1:
        return 1
    if code >> (j * n + i) & 1:
        return 2
    return 3


@dataclass(frozen=True)
class _Component:
    n: int
    code: int

    def better(self):
        return better_masks(self.code, self.n)

    def lt(self, i, j):
        return bool(self.code >> (i * self.n + j) & 1)


@dataclass
class OracleReport:
    name: str
    bound: int
    structures: int = 0
    skipped: int = 0
    divergences: int = 0
    first_divergence: str | None = None
    records: list = field(default_factory=list)

    def summary(self) -> str:
        return f"{self.divergences} divergences / {self.structures} structures ({self.skipped} skipped)"

    def to_json(self) -> dict:
        return {"oracle": self.name, "bound": self.bound, "structures": self.structures,
                "skipped": self.skipped, "divergences": self.divergences,
                "first_divergence": self.first_divergence}


class _Kernel:
    """Precomputed tables for one pair of component relations."""

    def __init__(self, c1: _Component, c2: _Component):
        self.c1, self.c2 = c1, c2
        n1, n2 = c1.n, c2.n
        self.N = n1 * n2
        b1, b2 = c1.better(), c2.better()
        self.subs1 = list(range(1, 1 << n1))
        self.subs2 = list(range(1, 1 << n2))
        self.mu1 = [mu_mask(b1, x) for x in range(1 << n1)]
        self.mu2 = [mu_mask(b2, y) for y in range(1 << n2)]
        self.rect = [[0] * (1 << n2) for _ in range(1 << n1)]
        for x in range(1 << n1):
            for y in range(1 << n2):
                m = 0
                for i in range(n1):
                    if x >> i & 1:
                        for k in range(n2):
                            if y >> k & 1:
                                m |= 1 << (i * n2 + k)
                self.rect[x][y] = m
        self.pairs = [(p, q) for p in range(self.N) for q in range(self.N) if p != q]
        self.pair_types = [(_type(c1.code, n1, p // n2, q // n2), _type(c2.code, n2, p % n2, q % n2))
                           for p, q in self.pairs]
        present = sorted(set(self.pair_types))
        self.type_pairs = present
        # GH premises per product pair, from the component comparison types
        self.gh1_needed = [t1 in (0, 1) and t2 in (0, 1) and (t1 == 1 or t2 == 1) for t1, t2 in self.pair_types]
        self.gh2_allowed = [t1 == 1 or t2 == 1 for t1, t2 in self.pair_types]

    def combinator_code(self, bits: int) -> int:
        code = 0
        chosen = {tp for k, tp in enumerate(self.type_pairs) if bits >> k & 1}
        for (p, q), tp in zip(self.pairs, self.pair_types):
            if tp in chosen:
                code |= 1 << (p * self.N + q)
        return code

    def evaluate(self, pcode: int, want_ss: bool) -> dict | None:
        N = self.N
        better = [0] * N
        gh1 = gh2 = True
        for k, (p, q) in enumerate(self.pairs):
            if pcode >> (p * N + q) & 1:
                better[q] |= 1 << p
                if not self.gh2_allowed[k]:
                    gh2 = False
            elif self.gh1_needed[k]:
                gh1 = False
        rect, mu1, mu2 = self.rect, self.mu1, self.mu2
        mup = {}
        mu_star = True
        for x in self.subs1:
            row = rect[x]
            for y in self.subs2:
                r = row[y]
                m = mu_mask(better, r)
                # smoothness on the rectangle
                rest = r & ~m
                while rest:
                    low = rest & -rest
                    if not better[low.bit_length() - 1] & m:
                        return None
                    rest ^= low
                mup[x, y] = m
                if m != rect[mu1[x]][mu2[y]]:
                    mu_star = False
        out = {"gh": gh1 and gh2, "gh1": gh1, "gh2": gh2, "mu1": mu_star}
        if want_ss:
            out["ss"] = self._ss(mup)
        return out

    def _ss(self, mup) -> bool:
        rect, mu1, mu2 = self.rect, self.mu1, self.mu2
        for (x, y), m in mup.items():
            m1, m2 = mu1[x], mu2[y]
            for g1 in submasks(x):
                row = rect[g1]
                s1 = g1 & m1 == 0
                for g2 in submasks(y):
                    if (row[g2] & m == 0) != (s1 or g2 & m2 == 0):
                        return False
        return True

    def product_codes(self) -> Iterator[tuple[str, int]]:
        N = self.N
        if N <= 4:
            for code in range(1 << (N * N)):
                if any(code >> (p * N + p) & 1 for p in range(N)):
                    continue
                yield "all", code
        else:
            for bits in range(1 << len(self.type_pairs)):
                yield "comb", self.combinator_code(bits)


def _component_list(bound: int) -> list[_Component]:
    return [_Component(n, c) for n in range(1, bound + 1) for c in relation_codes(n, smooth=True)]


def _run_pair(args) -> tuple[int, int, int, str | None, list]:
    c1, c2, oracle, keep = args
    k = _Kernel(c1, c2)
    n = skipped = div = 0
    first = None
    records = []
    for mode, pcode in k.product_codes():
        res = k.evaluate(pcode, want_ss=(oracle == "big-small"))
        structure = f"{c1.n}:{c1.code:x}|{c2.n}:{c2.code:x}|{mode}:{pcode:x}"
        if res is None:
            skipped += 1
            if keep:
                records.append({"structure": structure, "skipped": "precondition unmet: product not smooth"})
            continue
        n += 1
        d = res["gh"] != res["mu1"] if oracle == "gh-rep" else res["mu1"] != res["ss"]
        if d:
            div += 1
            if first is None:
                first = structure
        if keep:
            rec = {"structure": structure, "mu1": res["mu1"], "gh": res["gh"]}
            if "ss" in res:
                rec["ss"] = res["ss"]
            rec["diverges"] = d
            records.append(rec)
    return n, skipped, div, first, records


def _run_oracle(name: str, bound: int, jobs: int = 1, keep_records: bool = False,
                on_record: Callable[[dict], None] | None = None) -> OracleReport:
    if not 1 <= bound <= MAX_ORACLE_BOUND:
        raise ValueError(f"bound must be between 1 and {MAX_ORACLE_BOUND}, got {bound}")
    comps = _component_list(bound)
    tasks = [(a, b, name, keep_records or on_record is not None) for a in comps for b in comps]
    report = OracleReport(name, bound)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_pair, tasks, chunksize=1))
    else:
        results = map(_run_pair, tasks)
    for n, skipped, div, first, records in results:
        report.structures += n
        report.skipped += skipped
        report.divergences += div
        if report.first_divergence is None:
            report.first_divergence = first
        for rec in records:
            if on_record is not None:
                on_record(rec)
            if keep_records:
                report.records.append(rec)
    return report


def oracle_gh_rep(bound: int, jobs: int = 1, keep_records: bool = False, on_record=None) -> OracleReport:
    """GH versus (mu*1) on every smooth structure within the bound."""
    return _run_oracle("gh-rep", bound, jobs, keep_records, on_record)


def oracle_big_small_equivalence(bound: int, jobs: int = 1, keep_records: bool = False,
                                 on_record=None) -> OracleReport:
    """(mu*1) versus (s*s) on principal filters of every smooth structure within the bound.

    Principal filters with nonempty mu satisfy (Opt), (iM) and (<omega*s) by
    construction, so every enumerated structure meets the preconditions.
    """
    return _run_oracle("big-small", bound, jobs, keep_records, on_record)


def structure_from_record(structure: str) -> ProductStructure:
    """Rebuild the explicit product structure named by an oracle record."""
    left, right, prod = structure.split("|")
    n1, c1 = (int(v, 16) if i else int(v) for i, v in enumerate(left.split(":")))
    n2, c2 = (int(v, 16) if i else int(v) for i, v in enumerate(right.split(":")))
    pcode = int(prod.split(":")[1], 16)
    r1 = abstract_relation(n1, edges_of(c1, n1), "x")
    r2 = abstract_relation(n2, edges_of(c2, n2), "y")
    N = n1 * n2
    pts = [(p // n2, p % n2) for p in range(N)]
    edges = [(pts[p], pts[q]) for p, q in edges_of(pcode, N)]
    comp = PreferenceRelation(frozenset(pts), frozenset(edges), Language(("x", "y")))
    return ProductStructure((Language(("x",)), Language(("y",))), (r1, r2), comp, "explicit")


def rectangle_smooth(ps: ProductStructure) -> bool:
    rects = [frozenset(product_points(parts)) for parts in itertools.product(*_component_domain(ps))]
    return is_smooth(ps.composed, rects)
