"""Propositional languages, models, model sets and formulas.

A model over a :class:`Language` is a plain tuple of value indices, one per
variable in the language's order.  Two-valued models use ``0`` for false and
``1`` for true.  Everything here is immutable.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping

MAX_ENUM_VARS = 24

Model = tuple


class LanguageError(ValueError):
    pass


class SizeGuardError(ValueError):
    pass


@dataclass(frozen=True)
class Language:
    vars: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise LanguageError(f"duplicate variable names in {self.vars}")

    @classmethod
    def of(cls, spec: str | Iterable[str]) -> "Language":
        """``Language.of("p,q,r")`` or ``Language.of(["p", "q"])``."""
        if isinstance(spec, str):
            spec = [v.strip() for v in spec.split(",") if v.strip()]
        return cls(tuple(spec))

    def __len__(self):
        return len(self.vars)

    def __iter__(self):
        return iter(self.vars)

    def __contains__(self, name):
        return name in self.vars

    def __str__(self):
        return "{" + ",".join(self.vars) + "}"

    def index(self, name: str) -> int:
        return self.vars.index(name)

    def is_sublanguage_of(self, other: "Language") -> bool:
        return set(self.vars) <= set(other.vars)

    def disjoint(self, other: "Language") -> bool:
        return not set(self.vars) & set(other.vars)

    def disjoint_union(self, other: "Language") -> "Language":
        if not self.disjoint(other):
            raise LanguageError(f"languages {self} and {other} overlap")
        return Language(self.vars + other.vars)

    def minus(self, other: "Language | Iterable[str]") -> "Language":
        drop = set(other)
        return Language(tuple(v for v in self.vars if v not in drop))

    def select(self, names: Iterable[str]) -> "Language":
        """Sublanguage with the given names, kept in this language's order."""
        keep = set(names)
        unknown = keep - set(self.vars)
        if unknown:
            raise LanguageError(f"{sorted(unknown)} not in {self}")
        return Language(tuple(v for v in self.vars if v in keep))

    def projector(self, sub: "Language") -> Callable[[Model], Model]:
        if not sub.is_sublanguage_of(self):
            raise LanguageError(f"{sub} is not a sublanguage of {self}")
        idx = [self.index(v) for v in sub.vars]
        return lambda m: tuple(m[i] for i in idx)

    def reorderer(self, target: "Language") -> Callable[[Model], Model]:
        """Map models over ``self`` to models over ``target`` (same variable set)."""
        if set(target.vars) != set(self.vars):
            raise LanguageError(f"{target} is not a permutation of {self}")
        return self.projector(target)


@dataclass(frozen=True)
class ValueSet:
    values: tuple = ("0", "1")

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) < 2:
            raise ValueError("a value set needs at least two elements")
        if len(set(self.values)) != len(self.values):
            raise ValueError("duplicate values")

    def __len__(self):
        return len(self.values)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.values) - 1

    def label(self, i: int) -> str:
        return str(self.values[i])


TWO = ValueSet(("0", "1"))
THREE = ValueSet(("0", "1/2", "1"))


def all_models(lang: Language, values: ValueSet = TWO) -> Iterator[Model]:
    """All total valuations in canonical (lexicographic) order."""
    if len(lang) > MAX_ENUM_VARS:
        raise SizeGuardError(f"{len(lang)} variables exceed the enumeration guard of {MAX_ENUM_VARS}")
    return itertools.product(range(len(values)), repeat=len(lang))


def format_model(m: Model, lang: Language, values: ValueSet = TWO) -> str:
    if values == TWO:
        return " ".join(v if x else "!" + v for v, x in zip(lang.vars, m)) or "<>"
    return ",".join(f"{v}={values.label(x)}" for v, x in zip(lang.vars, m)) or "<>"


@dataclass(frozen=True)
class ModelSet:
    language: Language
    members: frozenset
    values: ValueSet = TWO

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(tuple(m) for m in self.members))
        n, k = len(self.language), len(self.values)
        for m in self.members:
            if len(m) != n or any(not (0 <= x < k) for x in m):
                raise LanguageError(f"model {m} is not a total valuation of {self.language}")

    @classmethod
    def full(cls, lang: Language, values: ValueSet = TWO) -> "ModelSet":
        return cls(lang, frozenset(all_models(lang, values)), values)

    @classmethod
    def empty(cls, lang: Language, values: ValueSet = TWO) -> "ModelSet":
        return cls(lang, frozenset(), values)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, m):
        return tuple(m) in self.members

    def __bool__(self):
        return bool(self.members)

    def _same(self, other: "ModelSet"):
        if other.language != self.language or other.values != self.values:
            raise LanguageError(f"model sets over {self.language} and {other.language} cannot be combined")

    def __and__(self, other: "ModelSet") -> "ModelSet":
        self._same(other)
        return ModelSet(self.language, self.members & other.members, self.values)

    def __or__(self, other: "ModelSet") -> "ModelSet":
        self._same(other)
        return ModelSet(self.language, self.members | other.members, self.values)

    def __sub__(self, other: "ModelSet") -> "ModelSet":
        self._same(other)
        return ModelSet(self.language, self.members - other.members, self.values)

    def __le__(self, other: "ModelSet") -> bool:
        self._same(other)
        return self.members <= other.members

    def with_members(self, members: Iterable[Model]) -> "ModelSet":
        return ModelSet(self.language, frozenset(members), self.values)

    def reorder(self, target: Language) -> "ModelSet":
        f = self.language.reorderer(target)
        return ModelSet(target, frozenset(f(m) for m in self.members), self.values)

    def to_json(self) -> dict:
        return {"vars": list(self.language.vars), "models": [list(m) for m in self]}

    @classmethod
    def from_json(cls, data: Mapping, values: ValueSet = TWO) -> "ModelSet":
        return cls(Language(tuple(data["vars"])), frozenset(tuple(m) for m in data["models"]), values)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def __str__(self):
        return "{" + ", ".join(format_model(m, self.language, self.values) for m in self) + "}"


def restrict(s: ModelSet, sub: Language) -> ModelSet:
    proj = s.language.projector(sub)
    return ModelSet(sub, frozenset(proj(m) for m in s.members), s.values)


def product(a: ModelSet, b: ModelSet) -> ModelSet:
    lang = a.language.disjoint_union(b.language)
    if a.values != b.values:
        raise LanguageError("factors use different value sets")
    return ModelSet(lang, frozenset(x + y for x in a.members for y in b.members), a.values)


def is_rich(s: ModelSet) -> bool:
    """Closed under cut and paste along every split of the language.

    Equivalent to being the product of the single-variable projections.
    """
    if not s.members:
        return True
    size = 1
    for i in range(len(s.language)):
        size *= len({m[i] for m in s.members})
    return size == len(s.members)


# ---------------------------------------------------------------------------
# many-valued value functions


@dataclass(frozen=True)
class ValueFunction:
    domain: ModelSet
    table: Mapping
    values: ValueSet = TWO

    def __post_init__(self):
        table = {tuple(m): v for m, v in dict(self.table).items()}
        missing = self.domain.members - table.keys()
        if missing:
            raise ValueError(f"value function is not total: missing {sorted(missing)[:3]}")
        extra = table.keys() - self.domain.members
        if extra:
            raise ValueError(f"value function defined outside its domain: {sorted(extra)[:3]}")
        for v in table.values():
            if not (0 <= v < len(self.values)):
                raise ValueError(f"value {v} outside the value set")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_callable(cls, domain: ModelSet, fn: Callable[[Model], int], values: ValueSet = TWO):
        return cls(domain, {m: fn(m) for m in domain.members}, values)

    @classmethod
    def characteristic(cls, domain: ModelSet, s: ModelSet) -> "ValueFunction":
        return cls(domain, {m: int(m in s.members) for m in domain.members}, TWO)

    def __call__(self, m: Model) -> int:
        return self.table[tuple(m)]

    def __le__(self, other: "ValueFunction") -> bool:
        return all(self(m) <= other(m) for m in self.domain.members)


def is_insensitive(vf: ValueFunction, j: Language) -> bool:
    """True iff models agreeing off ``j`` always get the same value."""
    rest = vf.domain.language.minus(j)
    proj = vf.domain.language.projector(rest)
    seen: dict = {}
    for m in vf.domain.members:
        key = proj(m)
        if seen.setdefault(key, vf(m)) != vf(m):
            return False
    return True


def _extension_values(vf: ValueFunction, j: Language, partial: Model) -> list[int]:
    proj = vf.domain.language.projector(j)
    vals = [vf(m) for m in vf.domain.members if proj(m) == tuple(partial)]
    if not vals:
        raise ValueError(f"partial model {partial} over {j} has no extension in the domain")
    return vals


def f_plus(vf: ValueFunction, j: Language, partial: Model) -> int:
    return max(_extension_values(vf, j, partial))


def f_minus(vf: ValueFunction, j: Language, partial: Model) -> int:
    return min(_extension_values(vf, j, partial))


# ---------------------------------------------------------------------------
# formulas


class Formula:
    __slots__ = ()

    def atoms(self) -> frozenset:
        raise NotImplementedError

    def evaluate(self, env: Mapping[str, int]) -> bool:
        raise NotImplementedError

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(Formula):
    value: bool

    def atoms(self):
        return frozenset()

    def evaluate(self, env):
        return self.value


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def atoms(self):
        return frozenset([self.name])

    def evaluate(self, env):
        return bool(env[self.name])


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def atoms(self):
        return self.arg.atoms()

    def evaluate(self, env):
        return not self.arg.evaluate(env)


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    def atoms(self):
        return self.left.atoms() | self.right.atoms()


class And(_Binary):
    def evaluate(self, env):
        return self.left.evaluate(env) and self.right.evaluate(env)


class Or(_Binary):
    def evaluate(self, env):
        return self.left.evaluate(env) or self.right.evaluate(env)


class Implies(_Binary):
    def evaluate(self, env):
        return (not self.left.evaluate(env)) or self.right.evaluate(env)


class Iff(_Binary):
    def evaluate(self, env):
        return self.left.evaluate(env) == self.right.evaluate(env)


TOP = Const(True)
BOTTOM = Const(False)


def conj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return BOTTOM
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def cube(m: Model, lang: Language) -> Formula:
    """The conjunction of literals true exactly in ``m``."""
    return conj(Atom(v) if x else Not(Atom(v)) for v, x in zip(lang.vars, m))


def dnf(s: ModelSet) -> Formula:
    """Canonical generator: full DNF over ``s.language`` (``TOP`` for the full set)."""
    if s.values != TWO:
        raise LanguageError("formulas only describe two-valued model sets")
    if len(s) == 1 << len(s.language):
        return TOP
    return disj(cube(m, s.language) for m in s)


# precedence: higher binds tighter
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def to_text(f: Formula) -> str:
    def go(g: Formula, ctx: int) -> str:
        if isinstance(g, Const):
            return "true" if g.value else "false"
        if isinstance(g, Atom):
            return g.name
        if isinstance(g, Not):
            return "!" + go(g.arg, 5)
        prec = _PREC[type(g)]
        right_assoc = type(g) in (Implies, Iff)
        lctx = prec + 1 if right_assoc else prec
        rctx = prec if right_assoc else prec + 1
        s = f"{go(g.left, lctx)} {_SYM[type(g)]} {go(g.right, rctx)}"
        return f"({s})" if prec < ctx else s

    return go(f, 0)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariableError(ValueError):
    def __init__(self, name: str, lang: Language):
        super().__init__(f"unknown variable {name!r} (language is {lang})")
        self.name = name


_TOKEN = re.compile(r"\s*(?:(<->)|(->)|([!&|()])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos:].lstrip()[0]!r}", pos)
        tok = next(g for g in m.groups() if g is not None)
        out.append((tok, m.start(m.lastindex)))
        pos = m.end()
    out.append(("<eof>", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, lang: Language | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.lang = lang

    def peek(self):
        return self.toks[self.i][0]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            what = "end of input" if tok == "<eof>" else repr(tok)
            raise FormulaSyntaxError(f"expected {expected!r}, found {what}", pos)
        self.i += 1
        return tok, pos

    def parse(self) -> Formula:
        f = self.iff()
        tok, pos = self.toks[self.i]
        if tok != "<eof>":
            raise FormulaSyntaxError(f"unexpected {tok!r}", pos)
        return f

    def iff(self):
        left = self.implies()
        if self.peek() == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def implies(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok, pos = self.toks[self.i]
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            f = self.iff()
            if self.peek() != ")":
                raise FormulaSyntaxError("unclosed parenthesis opened", pos)
            self.take(")")
            return f
        if tok == "<eof>":
            raise FormulaSyntaxError("unexpected end of input", pos)
        if tok in ("true", "false"):
            self.take()
            return Const(tok == "true")
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            self.take()
            if self.lang is not None and tok not in self.lang:
                raise UnknownVariableError(tok, self.lang)
            return Atom(tok)
        raise FormulaSyntaxError(f"unexpected {tok!r}", pos)


def parse_formula(text: str, lang: Language | None = None) -> Formula:
    """Parse the ASCII grammar ``! & | -> <->`` (tightest first, arrows right-associative)."""
    return _Parser(text, lang).parse()


def compile_formula(f: Formula, lang: Language) -> Callable[[Model], bool]:
    unknown = f.atoms() - set(lang.vars)
    if unknown:
        raise UnknownVariableError(sorted(unknown)[0], lang)
    pos = {v: i for i, v in enumerate(lang.vars)}

    def build(g):
        if isinstance(g, Const):
            val = g.value
            return lambda m: val
        if isinstance(g, Atom):
            i = pos[g.name]
            return lambda m: m[i] == 1
        if isinstance(g, Not):
            a = build(g.arg)
            return lambda m: not a(m)
        a, b = build(g.left), build(g.right)
        if isinstance(g, And):
            return lambda m: a(m) and b(m)
        if isinstance(g, Or):
            return lambda m: a(m) or b(m)
        if isinstance(g, Implies):
            return lambda m: (not a(m)) or b(m)
        return lambda m: a(m) == b(m)

    return build(f)


def models_of(f: Formula, lang: Language) -> ModelSet:
    test = compile_formula(f, lang)
    return ModelSet(lang, frozenset(m for m in all_models(lang) if test(m)))


def equivalent(f: Formula, g: Formula, lang: Language) -> bool:
    return models_of(Iff(f, g), lang) == ModelSet.full(lang)
