import itertools

import pytest
from hypothesis import given, strategies as st

from nmindep.consequence import (NmLogic, check_logical_rule, check_scenario1_logical,
                                 check_two_language_law, formula_pool, get_logical_rule,
                                 logical_rule_names, nm_entails, replay_logical, theory_of)
from nmindep.interp import fixture_mul_mu
from nmindep.lang import BOTTOM, TOP, Language, ModelSet, all_models, models_of, parse_formula
from nmindep.pref import PreferenceRelation, abstract_relation, build_forget, build_set_variant, is_ranked, is_smooth
from nmindep.search import relations

PQR = Language(("p", "q", "r"))


def placed(rel):
    return NmLogic.from_abstract(len(rel.carrier), [(a[0], b[0]) for a, b in rel.edges])


def smooth_logics(max_points=4):
    for n in range(1, max_points + 1):
        for rel in relations(n, smooth=True):
            yield rel, placed(rel)


def single_edge_logic():
    rel = PreferenceRelation(frozenset(all_models(PQR)), {((0, 0, 0), (1, 0, 0))}, PQR)
    return NmLogic(PQR, rel)


def test_example_entailments():
    L = single_edge_logic()
    assert nm_entails(L, "!q & !r", "!p & !q")
    assert not nm_entails(L, "true", "!p & !q")
    assert nm_entails(L, "p | q", "p | q")


def test_theory_of():
    assert theory_of(ModelSet.empty(PQR)) == BOTTOM
    assert theory_of(ModelSet.full(PQR)) == TOP
    assert str(theory_of(ModelSet(PQR, {(0, 0, 0)}))) == "!p & !q & !r"


def reference_entails(rel, lang, a, b):
    ma = {m for m in models_of(parse_formula(a), lang).members if m in rel.carrier}
    minimal = {m for m in ma if not any((n, m) in rel.edges for n in ma)}
    return minimal <= models_of(parse_formula(b), lang).members


@given(st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda e: e[0] != e[1])),
       st.sampled_from(["p", "!p", "q", "p & q", "p | q", "true", "!q | p"]),
       st.sampled_from(["p", "!p", "q", "p & !q", "p | q", "false", "true"]))
def test_entailment_matches_reference(edges, a, b):
    L = NmLogic.from_abstract(4, edges)
    assert L.entails(a, b) == reference_entails(L.relation, L.language, a, b)


KLM = ["SC", "REF", "LLE", "RW", "CCL", "AND", "OR", "CUT", "CM", "CUM", "PR", "ResM", "SubsetSupset",
       "wOR", "disjOR", "AND1", "CM2", "wCM", "MuIn", "Scenario1Logical(1)", "ANDn(3)", "CMn(2)", "CP"]


@pytest.mark.parametrize("rule", KLM)
def test_smooth_structures_satisfy_preferential_rules(rule):
    for rel, L in smooth_logics(4):
        pool = formula_pool(L, depth=1)
        v = check_logical_rule(L, rule, pool)
        assert v.holds, (rule, rel.edges, v.witness)


@pytest.mark.parametrize("rule", ["RatM", "RatMeq", "LogEqPrime", "DR", "LogPar", "LogUnion", "LogUnionPrime",
                                  "Scenario1Logical(2)", "Scenario1Logical(3)"])
def test_ranked_structures_satisfy_rational_rules(rule):
    for rel, L in smooth_logics(4):
        if is_ranked(rel):
            v = check_logical_rule(L, rule, formula_pool(L, depth=1))
            assert v.holds, (rule, rel.edges, v.witness)


def test_non_ranked_ratm_counterexample_replays():
    for rel, L in smooth_logics(3):
        v = check_logical_rule(L, "RatM")
        if not v.holds:
            assert not is_ranked(rel)
            assert replay_logical(L, v)
            return
    pytest.fail("no 3-point counterexample to RatM")


def test_cp_tracks_empty_mu():
    for n in (2, 3):
        for rel in relations(n):
            L = placed(rel)
            empty_mu = any(L.mu_mask(x) == 0 for x in range(1, L.carrier + 1) if x & ~L.carrier == 0)
            assert check_logical_rule(L, "CP").holds == (not empty_mu)


def test_scenario1_case2_holds_for_every_relation():
    # a point of mu(alpha) inside beta is minimal in alpha & beta too, so no relation can break case 2
    for n in (1, 2, 3):
        for rel in relations(n):
            assert check_scenario1_logical(placed(rel), 2).holds


def test_scenario1_case3_needs_smoothness():
    for n in (2, 3):
        for rel in relations(n):
            L = placed(rel)
            v = check_scenario1_logical(L, 3)
            assert v.holds == is_smooth(rel)
            if not v.holds:
                assert replay_logical(L, v)


def test_scenario1_vacuous_on_inconsistent_alpha():
    L = placed(abstract_relation(2, [(0, 1)]))
    assert check_scenario1_logical(L, 1, formula_pool(L, base=[parse_formula("false")], depth=0)).holds
    with pytest.raises(ValueError):
        check_scenario1_logical(L, 4)


def test_rule_names():
    for n in KLM + ["RatM"]:
        assert get_logical_rule(n).name == n
    with pytest.raises(KeyError):
        get_logical_rule("Nope")
    assert "RatM" in logical_rule_names()


def test_two_language_laws():
    chain = PreferenceRelation(frozenset({(0,), (1,)}), {((0,), (1,))}, Language(("p",)))
    other = PreferenceRelation(frozenset({(0,), (1,)}), {((1,), (0,))}, Language(("q",)))
    ps = build_set_variant([chain, other])
    for law in ("b*b", "b*m", "m*m"):
        assert check_two_language_law(ps, law).holds, law
    fg = build_forget(chain, other)
    assert check_two_language_law(fg, "forget").holds
    assert not check_two_language_law(ps, "forget").holds


def test_b_times_b_fails_without_factorization():
    fam = fixture_mul_mu(2)
    results = [check_two_language_law(fam.structure(a, b), "b*b") for _, a, b in fam.splits()]
    assert any(not v.holds for v in results)
