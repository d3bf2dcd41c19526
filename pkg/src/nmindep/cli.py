"""Command-line front end.

Exit codes: 0 when every checked law holds, 1 when a counterexample was
found, 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Callable

from . import consequence, interp, mulsize, revision, size
from .consequence import NmLogic, check_logical_rule, formula_pool, get_logical_rule
from .lang import (Language, LanguageError, ModelSet, all_models, format_model, models_of, parse_formula,
                   to_text)
from .pref import PreferenceRelation, RelationError, is_ranked, is_smooth
from .search import relations
from .verdict import Verdict, jsonable

EXIT_OK, EXIT_FOUND, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    out = json.dumps(jsonable(payload), sort_keys=True, indent=1) if args.json else text
    if getattr(args, "output", None):
        Path(args.output).write_text(out + "\n")
    else:
        print(out)


def _load_json(ref: str) -> dict:
    """A path, or the name of a bundled data file."""
    path = Path(ref)
    try:
        if path.exists():
            return json.loads(path.read_text())
        bundled = resources.files("nmindep") / "data" / path.name
        if bundled.is_file():
            return json.loads(bundled.read_text())
    except json.JSONDecodeError as e:
        raise UsageError(f"{ref}: invalid JSON ({e})") from e
    raise UsageError(f"cannot read {ref}")


def load_relation(ref: str) -> PreferenceRelation:
    data = _load_json(ref)
    if "vars" not in data or "carrier" not in data:
        raise UsageError(f"{ref}: a structure needs 'vars' and 'carrier'")
    try:
        return PreferenceRelation.from_json(data)
    except (RelationError, TypeError, ValueError) as e:
        raise UsageError(f"{ref}: {e}") from e


def _verdict_text(v: Verdict) -> str:
    line = f"{v.rule}: {'holds' if v.holds else 'FAILS'} ({v.checked} instances)"
    if v.note:
        line += f"\n  schema: {v.note}"
    if v.witness:
        w = {k: val for k, val in v.witness.items() if not k.startswith("_")}
        line += "\n  witness: " + json.dumps(jsonable(w), sort_keys=True)
    return line


def _report_verdicts(args, verdicts: list[Verdict], extra: dict | None = None) -> int:
    payload = {"verdicts": [v.to_json() for v in verdicts], **(extra or {})}
    _emit(args, payload, "\n".join(_verdict_text(v) for v in verdicts))
    return EXIT_OK if all(v.holds for v in verdicts) else EXIT_FOUND


# ---------------------------------------------------------------------------
# check


def run_rule(rel: PreferenceRelation, rule: str, depth: int = 2) -> Verdict:
    """Check a logical or size rule on the structure given by a relation."""
    try:
        get_logical_rule(rule)
    except KeyError:
        pass
    else:
        logic = NmLogic(rel.language, rel)
        return check_logical_rule(logic, rule, formula_pool(logic, depth))
    try:
        size.get_rule(rule)
    except KeyError:
        raise UsageError(f"unknown rule {rule!r}") from None
    return size.check_rule(size.principal_filter_from_relation(rel), rule)


def cmd_check(args) -> int:
    rel = load_relation(args.structure)
    verdicts = [run_rule(rel, r, args.depth) for r in args.rule]
    return _report_verdicts(args, verdicts, {"structure": args.structure})


# ---------------------------------------------------------------------------
# fixtures


def _claims_report(args, name: str, claims: list[tuple[str, bool, bool]]) -> int:
    rows = [{"claim": c, "expected": e, "observed": o, "pass": e == o} for c, e, o in claims]
    text = "\n".join(f"{'PASS' if r['pass'] else 'FAIL'}  {r['claim']}: expected {r['expected']}, "
                     f"observed {r['observed']}" for r in rows)
    _emit(args, {"fixture": name, "claims": rows}, text)
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_FOUND


def _fixture_mulmu(variant: int) -> list[tuple[str, bool, bool]]:
    got = interp.mul_mu_claims(variant)
    return [(k, interp.EXPECTED_MUL_MU[variant][k], got[k]) for k in got]


RANKED_LOGICAL = ("AND", "OR", "CM", "CUT", "CUM", "RatM")
RANKED_SIZE = ("M+omega(1)", "M+omega(2)", "M+omega(3)", "M+omega(4)", "M++(1)", "M++(2)", "M++(3)")


def ranked_structures(n: int = 3):
    """Every ranked smooth relation on n abstract points, placed on models of p, q."""
    for rel in relations(n, smooth=True):
        if is_ranked(rel):
            edges = [(a[0], b[0]) for a, b in rel.edges]
            yield NmLogic.from_abstract(n, edges)


def _fixture_ranked() -> list[tuple[str, bool, bool]]:
    out = []
    for logic in ranked_structures(3):
        tag = json.dumps(jsonable(logic.relation.to_json()["edges"]))
        pool = formula_pool(logic)
        for r in RANKED_LOGICAL:
            out.append((f"{r} on {tag}", True, check_logical_rule(logic, r, pool).holds))
        sys_ = size.principal_filter_from_relation(logic.relation)
        for r in RANKED_SIZE:
            out.append((f"{r} on {tag}", True, size.check_rule(sys_, r).holds))
    return out


def _fixture_ghd() -> list[tuple[str, bool, bool]]:
    out = []
    for n1, n2 in ((1, 1), (1, 2), (2, 1)):
        l1, l2 = Language(tuple("pq"[:n1])), Language(tuple("rs"[:n2]))
        for k, v in revision.split_suite(revision.sum_hamming(l1, l2)).items():
            out.append((f"sum-Hamming {n1}+{n2}: {k}", True, v.holds))
    mx = revision.max_distance(revision.Distance.hamming(Language(("p",))),
                               revision.Distance.hamming(Language(("q",))))
    g = revision.check_GHD(mx)
    out.append(("max distance 1+1: GHD1", False, g["ghd1"].holds))
    out.append(("max distance 1+1: bar factorization", False, revision.verify_bar_factorization(mx).holds))
    return out


FIXTURES: dict[str, Callable[[], list]] = {
    "mulmu1": lambda: _fixture_mulmu(1),
    "mulmu2": lambda: _fixture_mulmu(2),
    "mulmu3": lambda: _fixture_mulmu(3),
    "ranked-suite": _fixture_ranked,
    "ghd-suite": _fixture_ghd,
}


def cmd_fixtures(args) -> int:
    if args.name not in FIXTURES:
        raise UsageError(f"unknown fixture {args.name!r}; choose from {', '.join(FIXTURES)}")
    return _claims_report(args, args.name, FIXTURES[args.name]())


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args) -> int:
    bound = args.bound if args.bound is not None else 2
    stream = [] if args.records else None
    on_record = stream.append if stream is not None else None
    if args.name in ("gh-rep", "big-small"):
        run = mulsize.oracle_gh_rep if args.name == "gh-rep" else mulsize.oracle_big_small_equivalence
        try:
            rep = run(bound, jobs=args.jobs, on_record=on_record)
        except ValueError as e:
            raise UsageError(str(e)) from e
        summary = rep.to_json()
        line = f"{args.name} bound {bound}: {rep.summary()}"
        div = rep.divergences
    elif args.name == "ghd":
        sw = revision.ghd_sweep(range(1, bound + 2), on_record=on_record)
        summary = {"oracle": "ghd", "bound": bound, "structures": sw.structures, "ghd": sw.ghd,
                   "factorizing": sw.factorizing, "divergences": sw.divergences,
                   "first_divergence": sw.first_divergence}
        line = f"ghd bound {bound}: {sw.divergences} divergences / {sw.structures} structures"
        div = sw.divergences
    else:
        raise UsageError(f"unknown oracle {args.name!r}")
    lines = [json.dumps(jsonable(r), sort_keys=True) for r in stream or []]
    lines.append(json.dumps(jsonable(summary), sort_keys=True) if args.json else line)
    text = "\n".join(lines)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK if div == 0 else EXIT_FOUND


# ---------------------------------------------------------------------------
# mu, interpolate, revise, parse


def _parse(text: str, lang: Language | None):
    try:
        return parse_formula(text, lang)
    except ValueError as e:
        raise UsageError(str(e)) from e


def cmd_mu(args) -> int:
    rel = load_relation(args.structure)
    logic = NmLogic(rel.language, rel)
    f = _parse(args.formula, rel.language)
    m = logic.mu(f)
    text = f"mu({to_text(f)}) = {m}"
    _emit(args, {"formula": to_text(f), "mu": m.to_json()}, text)
    return EXIT_OK


def _problem_family(spec) -> interp.RelationFamily:
    if isinstance(spec, str):
        if spec.startswith("mulmu") and spec[5:] in ("1", "2", "3"):
            return interp.fixture_mul_mu(int(spec[5:]))
        raise UsageError(f"unknown structure {spec!r}")
    if isinstance(spec, dict) and "set_variant" in spec:
        comps = [PreferenceRelation.from_json(c) for c in spec["set_variant"]]
        return interp.set_variant_family([c.language for c in comps], comps)
    raise UsageError("structure must be a fixture name or {'set_variant': [...]}")


def cmd_interpolate(args) -> int:
    data = _load_json(args.problem)
    try:
        blocks = data["blocks"]
        fam = _problem_family(data["structure"])
        j, jp, jpp = blocks.get("J", []), blocks["J'"], blocks.get("J''", [])
        phi, psi = data["phi"], data["psi"]
    except KeyError as e:
        raise UsageError(f"{args.problem}: missing field {e}") from e
    try:
        res = interp.nm_interpolant(fam, phi, psi, j, jp, jpp)
    except interp.PreconditionError as e:
        found = interp.search_interpolants(fam.logic(), phi, psi, fam.sublanguage(jp))
        payload = {"refused": str(e), "witness": e.witness, "interpolants by search": [to_text(f) for f in found]}
        text = f"refused: {e}\n  witness: {json.dumps(jsonable(e.witness), sort_keys=True)}\n" \
               f"  interpolants over J' by search: {[to_text(f) for f in found] or 'none'}"
        _emit(args, payload, text)
        return EXIT_FOUND
    except (interp.InterpolationError, LanguageError, ValueError) as e:
        raise UsageError(str(e)) from e
    payload = {"theta": res.theta.to_json(), "formula": to_text(res.formula) if res.formula else None,
               "phi |~ theta": res.phi_entails_theta, "theta |~ psi": res.theta_entails_psi}
    text = (f"theta = {res.theta}\nformula over J': {to_text(res.formula) if res.formula else 'none'}\n"
            f"phi |~ theta: {res.phi_entails_theta}\ntheta |~ psi: {res.theta_entails_psi}")
    _emit(args, payload, text)
    return EXIT_OK if res.ok else EXIT_FOUND


def cmd_revise(args) -> int:
    try:
        kb = ModelSet.from_json(_load_json(args.kb))
        d = revision.Distance.from_json(_load_json(args.distance)) if args.distance \
            else revision.Distance.hamming(kb.language)
        if d.language != kb.language:
            raise UsageError("distance and knowledge base use different languages")
        res = revision.revise(kb, _parse(args.phi, kb.language), d)
    except (revision.RevisionError, KeyError, TypeError) as e:
        raise UsageError(str(e)) from e
    _emit(args, {"models": res.models.to_json(), "theory": to_text(res.theory)},
          f"models: {res.models}\ntheory: {to_text(res.theory)}")
    return EXIT_OK


def cmd_parse(args) -> int:
    lang = Language(tuple(args.vars.split(","))) if args.vars else None
    f = _parse(args.formula, lang)
    lang = lang or Language(tuple(sorted(f.atoms())))
    ms = models_of(f, lang)
    _emit(args, {"formula": to_text(f), "models": ms.to_json()},
          f"{to_text(f)}\nmodels: {ms}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled modes")
    common.add_argument("--bound", type=int, default=None, help="enumeration bound")
    common.add_argument("--output", "-o", help="write the report to a file")

    p = argparse.ArgumentParser(prog="nmindep", description="Checkers for independence in nonmonotonic logics.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="check rules on a structure")
    c.add_argument("--rule", action="append", required=True, help="rule id (repeatable)")
    c.add_argument("--structure", required=True, help="relation JSON (path or bundled name)")
    c.add_argument("--depth", type=int, default=2, help="formula pool depth")
    c.set_defaults(func=cmd_check)

    f = sub.add_parser("fixtures", parents=[common], help="reproduce a built-in fixture")
    f.add_argument("name", help=", ".join(FIXTURES))
    f.set_defaults(func=cmd_fixtures)

    o = sub.add_parser("oracle", parents=[common], help="run an exhaustive oracle")
    o.add_argument("name", choices=["gh-rep", "big-small", "ghd"])
    o.add_argument("--records", action="store_true", help="stream one JSON line per structure")
    o.set_defaults(func=cmd_oracle)

    m = sub.add_parser("mu", parents=[common], help="minimal models of a formula")
    m.add_argument("--structure", required=True)
    m.add_argument("--formula", required=True)
    m.set_defaults(func=cmd_mu)

    i = sub.add_parser("interpolate", parents=[common], help="nonmonotonic interpolant for a problem file")
    i.add_argument("--problem", required=True)
    i.set_defaults(func=cmd_interpolate)

    r = sub.add_parser("revise", parents=[common], help="distance-based revision")
    r.add_argument("--kb", required=True, help="model set JSON")
    r.add_argument("--phi", required=True)
    r.add_argument("--distance", help="distance JSON (default: Hamming)")
    r.set_defaults(func=cmd_revise)

    q = sub.add_parser("parse", parents=[common], help="parse a formula and list its models")
    q.add_argument("formula")
    q.add_argument("--vars", help="comma-separated language")
    q.set_defaults(func=cmd_parse)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
