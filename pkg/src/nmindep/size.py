"""Abstract size: ideals of small sets, filters of big sets, medium sets.

A :class:`SizeSystem` records, for each base set in its domain, which
subsets are small.  Big and medium are derived: ``A`` is big in ``X`` iff
``X - A`` is small, medium iff neither.  Sets are kept as bitmasks over a
fixed point universe; the public API takes and returns frozensets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping

from .verdict import Verdict


class SizeSystemError(ValueError):
    pass


class DomainError(ValueError):
    """A rule needs a base set that the system's domain does not contain."""


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, from ``mask`` down to 0."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


class SizeSystem:
    """Small subsets per base set; everything else follows by duality."""

    def __init__(self, universe: Iterable, small: Mapping | None = None, mu: Mapping | None = None):
        self.universe = tuple(sorted(universe, key=_key))
        self.index = {p: i for i, p in enumerate(self.universe)}
        if len(self.index) != len(self.universe):
            raise SizeSystemError("duplicate points in the universe")
        if (small is None) == (mu is None):
            raise SizeSystemError("give either small families or mu sets")
        self._mu: dict[int, int] | None = None
        self._small: dict[int, frozenset[int]] = {}
        if mu is not None:
            self._mu = {}
            for x, m in mu.items():
                xm, mm = self.mask(x), self.mask(m)
                if mm & ~xm:
                    raise SizeSystemError(f"mu({sorted(x, key=_key)}) is not a subset of its base")
                if mm == 0 and xm:
                    raise SizeSystemError(
                        f"mu({sorted(x, key=_key)}) is empty: every subset would be both small and big")
                self._mu[xm] = mm
        else:
            for x, fam in small.items():
                xm = self.mask(x)
                masks = frozenset(self.mask(a) for a in fam)
                for a in masks:
                    if a & ~xm:
                        raise SizeSystemError(f"small set {self.points(a)} not inside base {self.points(xm)}")
                    if (xm & ~a) in masks:
                        raise SizeSystemError(
                            f"{self.points(a)} and its complement are both small in {self.points(xm)}")
                self._small[xm] = masks
        self.bases: tuple[int, ...] = tuple(sorted(self._mu if self._mu is not None else self._small,
                                                   key=lambda m: (bin(m).count("1"), m)))
        self._base_set = frozenset(self.bases)

    @classmethod
    def from_masks(cls, universe, small_masks: Mapping[int, Iterable[int]]) -> "SizeSystem":
        pts = tuple(sorted(universe, key=_key))
        conv = lambda m: frozenset(pts[i] for i in bits(m))
        return cls(pts, small={conv(x): [conv(a) for a in fam] for x, fam in small_masks.items()})

    # -- conversion --

    def mask(self, s: Iterable) -> int:
        if isinstance(s, int):
            return s
        out = 0
        for p in s:
            try:
                out |= 1 << self.index[p]
            except KeyError:
                raise SizeSystemError(f"point {p!r} is not in the universe") from None
        return out

    def points(self, mask: int) -> frozenset:
        return frozenset(self.universe[i] for i in bits(mask))

    def has_base(self, x) -> bool:
        return self.mask(x) in self._base_set

    def _need(self, xm: int, rule: str, role: str):
        if xm not in self._base_set:
            raise DomainError(f"{rule}: base set {role}={sorted(self.points(xm), key=_key)} is not in the domain")

    # -- classification --

    def is_small(self, a, x) -> bool:
        am, xm = self.mask(a), self.mask(x)
        if xm not in self._base_set:
            raise DomainError(f"{sorted(self.points(xm), key=_key)} is not a base set")
        if am & ~xm:
            raise SizeSystemError("subset is not inside its base set")
        if self._mu is not None:
            return am & self._mu[xm] == 0
        return am in self._small[xm]

    def is_big(self, a, x) -> bool:
        xm = self.mask(x)
        return self.is_small(xm & ~self.mask(a), xm)

    def is_medium(self, a, x) -> bool:
        return not self.is_small(a, x) and not self.is_big(a, x)

    def is_mplus(self, a, x) -> bool:
        return not self.is_small(a, x)

    def classify(self, a, x) -> str:
        if self.is_small(a, x):
            return "small"
        return "big" if self.is_big(a, x) else "medium"

    def small_family(self, x) -> list[int]:
        xm = self.mask(x)
        if self._mu is not None:
            return [a for a in submasks(xm & ~self._mu[xm])]
        return sorted(self._small[xm])

    def big_family(self, x) -> list[int]:
        xm = self.mask(x)
        return [xm & ~a for a in self.small_family(xm)]

    def mplus_family(self, x) -> list[int]:
        xm = self.mask(x)
        return [a for a in submasks(xm) if not self.is_small(a, xm)]

    def to_json(self) -> dict:
        pts = list(self.universe)
        return {"points": [list(p) if isinstance(p, tuple) else p for p in pts],
                "bases": list(self.bases),
                "small": {str(x): sorted(self.small_family(x)) for x in self.bases}}

    @classmethod
    def from_json(cls, data: Mapping) -> "SizeSystem":
        pts = [tuple(p) if isinstance(p, list) else p for p in data.get("points", [])]
        bases = [int(b) for b in data["bases"]]
        if not pts:
            width = max((b.bit_length() for b in bases), default=0)
            pts = list(range(width))
        small = {int(k): [int(a) for a in v] for k, v in data.get("small", {}).items()}
        for b in bases:
            small.setdefault(b, [])
        return cls.from_masks(pts, small)


def _key(p):
    return (str(type(p)), p) if not isinstance(p, tuple) else ("tuple", p)


def principal_filter_from_mu(mu_table: Mapping, universe: Iterable | None = None) -> SizeSystem:
    """Big in X iff containing mu(X); small iff disjoint from mu(X)."""
    if universe is None:
        universe = set().union(*[set(x) for x in mu_table]) if mu_table else set()
    return SizeSystem(universe, mu={frozenset(x): frozenset(m) for x, m in mu_table.items()})


def principal_filter_from_relation(rel, domain: Iterable | None = None) -> SizeSystem:
    """Principal filters of a preference relation over a domain (default: all nonempty subsets)."""
    from .pref import mu, nonempty_subsets
    dom = nonempty_subsets(rel.carrier) if domain is None else domain
    return principal_filter_from_mu({frozenset(x): mu(rel, x) for x in dom}, rel.carrier)


# ---------------------------------------------------------------------------
# rule catalogue
#
# Each rule is an instance generator plus a predicate.  Generators yield only
# instances whose premises hold, so a rule fails iff some instance's
# conclusion is false.  Instances are dicts of masks and replay through the
# same predicate.


@dataclass(frozen=True)
class SizeRule:
    name: str
    schema: str
    instances: Callable[[SizeSystem], Iterator[dict]]
    conclusion: Callable[[SizeSystem, dict], bool]


def _subsets_of_bases(sys):
    for x in sys.bases:
        for a in submasks(x):
            yield x, a


def _nested_pairs(sys):
    for x in sys.bases:
        for y in sys.bases:
            if x & ~y == 0:
                yield x, y


def _disjoint_pairs(sys, rule):
    for x in sys.bases:
        for y in sys.bases:
            if x & y == 0 and x < y:
                sys._need(x | y, rule, "X u Y")
                yield x, y


def _gen_opt(sys):
    for x in sys.bases:
        yield {"X": x, "A": 0}


def _gen_im(sys):
    for x in sys.bases:
        for a in sys.small_family(x):
            for b in submasks(a):
                yield {"X": x, "A": a, "B": b}


def _gen_emi(sys):
    for x, y in _nested_pairs(sys):
        for a in sys.small_family(x):
            yield {"X": x, "Y": y, "A": a}


def _gen_emf(sys):
    for x, y in _nested_pairs(sys):
        for a in submasks(x):
            if sys.is_big(a, y):
                yield {"X": x, "Y": y, "A": a}


def _gen_disj(family: str, rule: str):
    def gen(sys):
        fam = getattr(sys, family)
        for x, y in _disjoint_pairs(sys, rule):
            for a in fam(x):
                for b in fam(y):
                    yield {"X": x, "Y": y, "A": a, "B": b}
    return gen


def _gen_i1(sys):
    for x in sys.bases:
        yield {"X": x}


def _gen_small_pairs(sys):
    for x in sys.bases:
        sm = sys.small_family(x)
        for a, b in itertools.combinations_with_replacement(sm, 2):
            yield {"X": x, "A": a, "B": b}


def _gen_big_pairs(sys):
    for x in sys.bases:
        bg = sys.big_family(x)
        for a, b in itertools.combinations_with_replacement(bg, 2):
            yield {"X": x, "A": a, "B": b}


def _gen_in(n):
    def gen(sys):
        for x in sys.bases:
            # unions of at most n small sets, remembering one decomposition
            sm = sys.small_family(x)
            reach = {a: (a,) for a in sm}
            frontier = dict(reach)
            for _ in range(n - 1):
                nxt = {}
                for u, parts in frontier.items():
                    for a in sm:
                        v = u | a
                        if v not in reach and v not in nxt:
                            nxt[v] = parts + (a,)
                reach.update(nxt)
                frontier = nxt
            for u in sorted(reach):
                yield {"X": x, "parts": reach[u]}
    return gen


def _gen_fn(n):
    def gen(sys):
        for x in sys.bases:
            bg = sys.big_family(x)
            reach = {a: (a,) for a in bg}
            frontier = dict(reach)
            for _ in range(n - 1):
                nxt = {}
                for u, parts in frontier.items():
                    for a in bg:
                        v = u & a
                        if v not in reach and v not in nxt:
                            nxt[v] = parts + (a,)
                reach.update(nxt)
                frontier = nxt
            for u in sorted(reach):
                yield {"X": x, "parts": reach[u]}
    return gen


def _chains(sys, length: int):
    """Chains X1 c= X2 c= ... of bases, each big in the next."""
    def extend(chain):
        if len(chain) == length:
            yield chain
            return
        last = chain[-1]
        for y in sys.bases:
            if last & ~y == 0 and sys.is_big(last, y):
                yield from extend(chain + (y,))
    for x in sys.bases:
        yield from extend((x,))


def _gen_mplus_n(n):
    def gen(sys):
        # X1 need not be a base; X2..Xn are
        for x2 in sys.bases:
            for x1 in sys.big_family(x2):
                if n == 2:
                    yield {"chain": (x1, x2)}
                    continue
                for rest in _chains(sys, n - 1):
                    if rest[0] == x2:
                        yield {"chain": (x1,) + rest}
    return gen


def _gen_milder(n):
    def gen(sys):
        # A big in X1, X_i big in X_{i+1}; n big steps in total
        for x1 in sys.bases:
            for a in sys.big_family(x1):
                if n == 1:
                    yield {"A": a, "chain": (x1,)}
                    continue
                for chain in _chains(sys, n):
                    if chain[0] == x1:
                        yield {"A": a, "chain": chain}
    return gen


def _gen_two_step(inner: str, outer: str):
    """A in inner(X), X in outer(Y), for X c= Y bases."""
    def gen(sys):
        fam = {"F": sys.big_family, "M+": sys.mplus_family}
        test = {"F": sys.is_big, "M+": sys.is_mplus}
        for x, y in _nested_pairs(sys):
            if not test[outer](x, y):
                continue
            for a in fam[inner](x):
                yield {"A": a, "X": x, "Y": y}
    return gen


def _gen_mplus_omega4(sys):
    for x in sys.bases:
        sm = sys.small_family(x)
        for a in sm:
            for b in sm:
                if x & ~b == 0:
                    continue
                sys._need(x & ~b, "M+omega(4)", "X - B")
                yield {"X": x, "A": a, "B": b}


def _gen_mpp1(sys):
    for x in sys.bases:
        for a in sys.small_family(x):
            for b in submasks(x):
                if sys.is_big(b, x) or x & ~b == 0:
                    continue
                sys._need(x & ~b, "M++(1)", "X - B")
                yield {"X": x, "A": a, "B": b}


def _gen_mpp2(sys):
    for x in sys.bases:
        for a in sys.big_family(x):
            for b in submasks(x):
                if sys.is_big(b, x) or x & ~b == 0:
                    continue
                sys._need(x & ~b, "M++(2)", "X - B")
                yield {"X": x, "A": a, "B": b}


def _union(parts):
    out = 0
    for p in parts:
        out |= p
    return out


def _inter(parts, x):
    out = x
    for p in parts:
        out &= p
    return out


def _milder_ok(s, i):
    return not s.is_small(i["A"], i["chain"][-1])


_RULES: dict[str, SizeRule] = {}


def _add(name, schema, gen, concl):
    _RULES[name] = SizeRule(name, schema, gen, concl)


_add("Opt", "0 in I(X)", _gen_opt, lambda s, i: s.is_small(0, i["X"]))
_add("iM", "A in I(X), B c= A => B in I(X)", _gen_im, lambda s, i: s.is_small(i["B"], i["X"]))
_add("eMI", "X c= Y => I(X) c= I(Y)", _gen_emi, lambda s, i: s.is_small(i["A"], i["Y"]))
_add("eMF", "X c= Y => F(Y) n P(X) c= F(X)", _gen_emf, lambda s, i: s.is_big(i["A"], i["X"]))
_add("Idisj", "A in I(X), B in I(Y), X n Y = 0 => A u B in I(X u Y)",
     _gen_disj("small_family", "Idisj"), lambda s, i: s.is_small(i["A"] | i["B"], i["X"] | i["Y"]))
_add("Fdisj", "A in F(X), B in F(Y), X n Y = 0 => A u B in F(X u Y)",
     _gen_disj("big_family", "Fdisj"), lambda s, i: s.is_big(i["A"] | i["B"], i["X"] | i["Y"]))
_add("M+disj", "A in M+(X), B in M+(Y), X n Y = 0 => A u B in M+(X u Y)",
     _gen_disj("mplus_family", "M+disj"), lambda s, i: s.is_mplus(i["A"] | i["B"], i["X"] | i["Y"]))
_add("I1", "X not in I(X)", _gen_i1, lambda s, i: not s.is_small(i["X"], i["X"]))
_add("I2", "A, B in I(X) => A u B != X", _gen_small_pairs, lambda s, i: i["A"] | i["B"] != i["X"])
_add("Iomega", "A, B in I(X) => A u B in I(X)", _gen_small_pairs,
     lambda s, i: s.is_small(i["A"] | i["B"], i["X"]))
_add("Fomega", "A, B in F(X) => A n B in F(X)", _gen_big_pairs,
     lambda s, i: s.is_big(i["A"] & i["B"], i["X"]))
_add("M+omega(1)", "A in F(X), X in M+(Y) => A in M+(Y)", _gen_two_step("F", "M+"),
     lambda s, i: s.is_mplus(i["A"], i["Y"]))
_add("M+omega(2)", "A in M+(X), X in F(Y) => A in M+(Y)", _gen_two_step("M+", "F"),
     lambda s, i: s.is_mplus(i["A"], i["Y"]))
_add("M+omega(3)", "A in F(X), X in F(Y) => A in F(Y)", _gen_two_step("F", "F"),
     lambda s, i: s.is_big(i["A"], i["Y"]))
_add("M+omega(4)", "A, B in I(X) => A - B in I(X - B)", _gen_mplus_omega4,
     lambda s, i: s.is_small(i["A"] & ~i["B"], i["X"] & ~i["B"]))
_add("M++(1)", "A in I(X), B not in F(X) => A - B in I(X - B)", _gen_mpp1,
     lambda s, i: s.is_small(i["A"] & ~i["B"], i["X"] & ~i["B"]))
_add("M++(2)", "A in F(X), B not in F(X) => A - B in F(X - B)", _gen_mpp2,
     lambda s, i: s.is_big(i["A"] & ~i["B"], i["X"] & ~i["B"]))
_add("M++(3)", "A in M+(X), X in M+(Y) => A in M+(Y)", _gen_two_step("M+", "M+"),
     lambda s, i: s.is_mplus(i["A"], i["Y"]))
# Scenario 1, by the content of each case: A c= X c= Y
_add("Scenario1(1)", "X in F(Y), A in F(X) => A in F(Y)", _gen_two_step("F", "F"),
     lambda s, i: s.is_big(i["A"], i["Y"]))
_add("Scenario1(2)", "X in M+(Y), A in F(X) => A in M+(Y)", _gen_two_step("F", "M+"),
     lambda s, i: s.is_mplus(i["A"], i["Y"]))
_add("Scenario1(3)", "X in F(Y), A in M+(X) => A in M+(Y)", _gen_two_step("M+", "F"),
     lambda s, i: s.is_mplus(i["A"], i["Y"]))
_add("Scenario1(4)", "X in M+(Y), A in M+(X) => A in M+(Y)", _gen_two_step("M+", "M+"),
     lambda s, i: s.is_mplus(i["A"], i["Y"]))


def _parametric(name: str) -> SizeRule | None:
    import re
    m = re.fullmatch(r"(In|Fn|M\+n|nSmallNotAll)\((\d+)\)", name)
    if not m:
        return None
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise ValueError(f"{name}: n must be positive")
    if kind == "In":
        return SizeRule(name, f"A1..A{n} in I(X) => A1 u .. u A{n} != X", _gen_in(n),
                        lambda s, i: _union(i["parts"]) != i["X"])
    if kind == "Fn":
        return SizeRule(name, f"A1..A{n} in F(X) => A1 n .. n A{n} != 0", _gen_fn(n),
                        lambda s, i: _inter(i["parts"], i["X"]) != 0)
    if kind == "M+n":
        if n < 2:
            raise ValueError(f"{name}: n must be at least 2")
        return SizeRule(name, f"X1 in F(X2), .., X{n - 1} in F(X{n}) => X1 in M+(X{n})", _gen_mplus_n(n),
                        lambda s, i: s.is_mplus(i["chain"][0], i["chain"][-1]))
    return SizeRule(name, f"big*..*big ({n} times) is not small", _gen_milder(n), _milder_ok)


SCENARIO1_RULES = {1: "Scenario1(1)", 2: "Scenario1(2)", 3: "Scenario1(3)", 4: "Scenario1(4)"}
FIXED_RULES = tuple(_RULES)


def get_rule(name: str) -> SizeRule:
    if name in _RULES:
        return _RULES[name]
    rule = _parametric(name)
    if rule is None:
        raise KeyError(f"unknown size rule {name!r}")
    return rule


def rule_names() -> list[str]:
    return list(_RULES) + ["In(n)", "Fn(n)", "M+n(n)", "nSmallNotAll(n)", "ProjBig"]


def _witness(sys: SizeSystem, inst: dict) -> dict:
    out = {}
    for k, v in inst.items():
        if isinstance(v, tuple):
            out[k] = [sorted(sys.points(m), key=_key) for m in v]
        else:
            out[k] = sorted(sys.points(v), key=_key)
    return out


def check_rule(sys: SizeSystem, rule: str, **kwargs) -> Verdict:
    """Exhaustively instantiate a size rule over the system's domain."""
    if rule == "ProjBig":
        return check_proj_big(sys, **kwargs)
    r = get_rule(rule)
    n = 0
    for inst in r.instances(sys):
        n += 1
        if not r.conclusion(sys, inst):
            w = _witness(sys, inst)
            w["_masks"] = inst
            return Verdict.fail(rule, w, n, note=r.schema)
    return Verdict.ok(rule, n, note=r.schema)


def replay(sys: SizeSystem, verdict: Verdict) -> bool:
    """True iff the verdict's witness is a genuine violation in ``sys``."""
    if verdict.holds:
        return False
    inst = verdict.witness["_masks"]
    if verdict.rule == "ProjBig":
        return sys.is_big(inst["A"], inst["X"]) and not sys.is_big(inst["PA"], inst["PX"])
    r = get_rule(verdict.rule)
    return _premises(sys, verdict.rule, inst) and not r.conclusion(sys, inst)


def _premises(sys: SizeSystem, rule: str, i: dict) -> bool:
    """Re-derive an instance's premises independently of its generator."""
    sm, bg, mp = sys.is_small, sys.is_big, sys.is_mplus
    sub = lambda a, b: a & ~b == 0
    table = {
        "Opt": lambda: True,
        "iM": lambda: sm(i["A"], i["X"]) and sub(i["B"], i["A"]),
        "eMI": lambda: sub(i["X"], i["Y"]) and sm(i["A"], i["X"]),
        "eMF": lambda: sub(i["X"], i["Y"]) and sub(i["A"], i["X"]) and bg(i["A"], i["Y"]),
        "Idisj": lambda: i["X"] & i["Y"] == 0 and sm(i["A"], i["X"]) and sm(i["B"], i["Y"]),
        "Fdisj": lambda: i["X"] & i["Y"] == 0 and bg(i["A"], i["X"]) and bg(i["B"], i["Y"]),
        "M+disj": lambda: i["X"] & i["Y"] == 0 and mp(i["A"], i["X"]) and mp(i["B"], i["Y"]),
        "I1": lambda: True,
        "I2": lambda: sm(i["A"], i["X"]) and sm(i["B"], i["X"]),
        "Iomega": lambda: sm(i["A"], i["X"]) and sm(i["B"], i["X"]),
        "Fomega": lambda: bg(i["A"], i["X"]) and bg(i["B"], i["X"]),
        "M+omega(1)": lambda: bg(i["A"], i["X"]) and mp(i["X"], i["Y"]),
        "M+omega(2)": lambda: mp(i["A"], i["X"]) and bg(i["X"], i["Y"]),
        "M+omega(3)": lambda: bg(i["A"], i["X"]) and bg(i["X"], i["Y"]),
        "M+omega(4)": lambda: sm(i["A"], i["X"]) and sm(i["B"], i["X"]),
        "M++(1)": lambda: sm(i["A"], i["X"]) and sub(i["B"], i["X"]) and not bg(i["B"], i["X"]),
        "M++(2)": lambda: bg(i["A"], i["X"]) and sub(i["B"], i["X"]) and not bg(i["B"], i["X"]),
        "M++(3)": lambda: mp(i["A"], i["X"]) and mp(i["X"], i["Y"]),
        "Scenario1(1)": lambda: bg(i["X"], i["Y"]) and bg(i["A"], i["X"]),
        "Scenario1(2)": lambda: mp(i["X"], i["Y"]) and bg(i["A"], i["X"]),
        "Scenario1(3)": lambda: bg(i["X"], i["Y"]) and mp(i["A"], i["X"]),
        "Scenario1(4)": lambda: mp(i["X"], i["Y"]) and mp(i["A"], i["X"]),
    }
    if rule in table:
        return table[rule]()
    if rule.startswith("In(") or rule.startswith("Fn("):
        test = sm if rule.startswith("In(") else bg
        return all(test(a, i["X"]) for a in i["parts"])
    if rule.startswith("M+n("):
        c = i["chain"]
        return all(bg(c[k], c[k + 1]) for k in range(len(c) - 1))
    if rule.startswith("nSmallNotAll("):
        c = (i["A"],) + tuple(i["chain"])
        return all(bg(c[k], c[k + 1]) for k in range(len(c) - 1))
    raise KeyError(rule)


def check_scenario1(sys: SizeSystem, case: int, a=None, x=None, y=None) -> Verdict:
    """One Scenario-1 case on a nested triple, or over all triples if none given."""
    if case not in SCENARIO1_RULES:
        raise ValueError(f"Scenario-1 case must be 1..4, got {case}")
    rule = SCENARIO1_RULES[case]
    if a is None and x is None and y is None:
        return check_rule(sys, rule)
    am, xm, ym = sys.mask(a), sys.mask(x), sys.mask(y)
    if am & ~xm or xm & ~ym:
        raise ValueError("Scenario 1 needs A c= X c= Y")
    inst = {"A": am, "X": xm, "Y": ym}
    if not _premises(sys, rule, inst):
        return Verdict.ok(rule, 0, note="premises do not hold")
    if get_rule(rule).conclusion(sys, inst):
        return Verdict.ok(rule, 1)
    w = _witness(sys, inst)
    w["_masks"] = inst
    return Verdict.fail(rule, w, 1)


def check_milder(sys: SizeSystem, n: int, a, x_chain: Iterable) -> Verdict:
    """A big in X1, each X_i big in X_{i+1}: A must not be small in X_n."""
    chain = tuple(sys.mask(x) for x in x_chain)
    if len(chain) != n or n < 1:
        raise ValueError(f"expected a chain of {n} sets")
    am = sys.mask(a)
    full = (am,) + chain
    for k in range(len(full) - 1):
        if full[k] & ~full[k + 1]:
            raise ValueError("chain is not nested")
    rule = f"nSmallNotAll({n})"
    inst = {"A": am, "chain": chain}
    if not _premises(sys, rule, inst):
        return Verdict.ok(rule, 0, note="premises do not hold")
    if _milder_ok(sys, inst):
        return Verdict.ok(rule, 1)
    w = _witness(sys, inst)
    w["_masks"] = inst
    return Verdict.fail(rule, w, 1)


def check_proj_big(sys: SizeSystem, projector: Callable | None = None, **_) -> Verdict:
    """Projections of big sets are big: A in F(X) => A|J in F(X|J).

    ``projector`` maps universe points to universe points (typically a
    product point to its padded restriction).
    """
    if projector is None:
        raise ValueError("ProjBig needs a projector")
    n = 0
    proj = lambda m: sys.mask(frozenset(projector(p) for p in sys.points(m)))
    for x in sys.bases:
        px = proj(x)
        if px == x:
            continue
        sys._need(px, "ProjBig", "X|J")
        for a in sys.big_family(x):
            n += 1
            pa = proj(a)
            if not sys.is_big(pa, px):
                inst = {"A": a, "X": x, "PA": pa, "PX": px}
                w = _witness(sys, inst)
                w["_masks"] = inst
                return Verdict.fail("ProjBig", w, n)
    return Verdict.ok("ProjBig", n)
