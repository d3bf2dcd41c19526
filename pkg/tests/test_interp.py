import itertools

import pytest
from hypothesis import given, settings, strategies as st

from nmindep.consequence import literal_conjunctions
from nmindep.interp import (EXPECTED_MUL_MU, MUL_MU_LANGUAGE, MUL_MU_PHI, MUL_MU_PSI, InterpolationError,
                            MonotonicProblem, PreconditionError, audit_monotonic, block_languages,
                            check_mu_star_1_family, definable_over, dominates, fixture_mul_mu,
                            is_interpolant_direct, is_interpolant_monotonic, monotonic_band,
                            mul_mu_claims, nm_interpolant, search_interpolants, set_variant_family)
from nmindep.lang import (THREE, TOP, TWO, Language, ModelSet, ValueFunction, equivalent, models_of,
                          parse_formula, restrict)
from nmindep.pref import PreferenceRelation, abstract_relation

ABC = Language(("a", "b", "c"))
A, B, C = (Language((v,)) for v in "abc")


def char(formula, gamma):
    return ValueFunction.characteristic(gamma, models_of(parse_formula(formula), gamma.language))


def problem(f, g, gamma=None):
    gamma = gamma or ModelSet.full(ABC)
    return MonotonicProblem(gamma, A, B, C, char(f, gamma), char(g, gamma))


def test_band_collapses_to_middle_variable():
    p = problem("b & c", "b")
    band = monotonic_band(p)
    assert band.lower == band.upper == {(0,): 0, (1,): 1}


def test_self_interpolation_band():
    p = problem("b", "b")
    band = monotonic_band(p)
    assert band.lower == band.upper == {(0,): 0, (1,): 1}


def test_bottom_function_three_valued():
    gamma = ModelSet.full(ABC, THREE)
    f = ValueFunction.from_callable(gamma, lambda m: 0, THREE)
    g = ValueFunction.from_callable(gamma, lambda m: min(m[0], m[1]), THREE)
    p = MonotonicProblem(gamma, A, B, C, f, g)
    band = monotonic_band(p)
    assert all(v == 0 for v in band.lower.values())
    # g- at b is the least value of g over a
    assert band.upper == {(0,): 0, (1,): 0, (2,): 0}


def test_band_edges_are_interpolants():
    p = problem("b & c", "b | a")
    band = monotonic_band(p)
    for h in (band.lower, band.upper):
        assert is_interpolant_monotonic(p, h).holds
        assert is_interpolant_direct(p, h)


def test_perturbed_edge_names_point():
    gamma = ModelSet.full(ABC, THREE)
    f = ValueFunction.from_callable(gamma, lambda m: min(m[1], m[2]), THREE)
    g = ValueFunction.from_callable(gamma, lambda m: m[1], THREE)
    p = MonotonicProblem(gamma, A, B, C, f, g)
    band = monotonic_band(p)
    h = dict(band.lower)
    h[(2,)] -= 1
    v = is_interpolant_monotonic(p, h, band)
    assert not v.holds and v.witness["point"] == (2,)
    assert not is_interpolant_direct(p, h)
    h = dict(band.upper)
    h[(1,)] += 1
    v = is_interpolant_monotonic(p, h, band)
    assert not v.holds and v.witness["point"] == (1,)


def test_problem_validation():
    with pytest.raises(InterpolationError, match="depends"):
        problem("a", "b")
    with pytest.raises(InterpolationError, match="depends"):
        problem("b", "c")
    with pytest.raises(InterpolationError, match="f > g"):
        problem("b", "false")
    with pytest.raises(InterpolationError, match="partition"):
        MonotonicProblem(ModelSet.full(ABC), A, B, B, char("b", ModelSet.full(ABC)), char("b", ModelSet.full(ABC)))
    not_rich = ModelSet(ABC, {(0, 0, 0), (1, 1, 1)})
    with pytest.raises(InterpolationError, match="rich"):
        problem("b", "b", not_rich)


@pytest.mark.parametrize("values", [TWO, THREE], ids=["two", "three"])
def test_audit_one_variable_blocks_exhaustive(values):
    audit = audit_monotonic(values, (1, 1, 1))
    assert audit.problems > 0 and audit.disagreements == 0
    if values is TWO:
        assert audit.exhaustive


def test_audit_sampled_config():
    audit = audit_monotonic(TWO, (2, 1, 2), max_pairs=20, samples_h=20)
    assert not audit.exhaustive
    assert audit.problems == 20 and audit.disagreements == 0
    assert audit.band_violations > 0


@settings(max_examples=40)
@given(st.dictionaries(st.tuples(st.integers(0, 1), st.integers(0, 1)), st.integers(0, 2), min_size=4, max_size=4),
       st.dictionaries(st.tuples(st.integers(0, 1), st.integers(0, 1)), st.integers(0, 2), min_size=4, max_size=4),
       st.dictionaries(st.tuples(st.integers(0, 1)), st.integers(0, 2), min_size=2, max_size=2))
def test_band_agrees_with_definition(ft, gt, h):
    # f reads (b, c), g reads (a, b); values in {0, 1, 2}
    gamma = ModelSet.full(ABC, TWO)
    f = ValueFunction.from_callable(gamma, lambda m: ft[(m[1], m[2])], THREE)
    g = ValueFunction.from_callable(gamma, lambda m: max(gt[(m[0], m[1])], ft[(m[1], 0)], ft[(m[1], 1)]), THREE)
    p = MonotonicProblem(gamma, A, B, C, f, g)
    band = monotonic_band(p)
    assert all(band.lower[m] <= band.upper[m] for m in band.points)
    assert is_interpolant_monotonic(p, h, band).holds == is_interpolant_direct(p, h)


def test_band_json():
    band = monotonic_band(problem("b & c", "b"))
    assert band.to_json() == {"points": [{"model": [0], "lower": 0, "upper": 0},
                                         {"model": [1], "lower": 1, "upper": 1}]}


def test_block_languages():
    lang, j, jp, jpp = block_languages((2, 1, 0))
    assert lang.vars == ("a", "b", "c") and jpp.vars == ()


def test_definable_over():
    q = Language(("q",))
    assert definable_over(models_of(parse_formula("!p & !q & !r"), MUL_MU_LANGUAGE), q) is None
    assert definable_over(ModelSet.full(MUL_MU_LANGUAGE), q) == TOP
    got = definable_over(models_of(parse_formula("q"), MUL_MU_LANGUAGE), q)
    assert equivalent(got, parse_formula("q"), q)


@pytest.mark.parametrize("s,t", [((0,), (1,)), ((0, 1), (1, 1)), ((0, 0), (1, 1))])
def test_dominance_instances(s, t):
    assert dominates(s, t)
    assert not dominates(t, s)


def test_dominance_incomparable():
    assert not dominates((0, 1), (1, 0)) and not dominates((1, 0), (0, 1))
    assert not dominates((0, 1), (0, 1))


@pytest.mark.parametrize("variant", [1, 2, 3])
def test_mul_mu_claims(variant):
    assert mul_mu_claims(variant) == EXPECTED_MUL_MU[variant]


def test_mul_mu_bad_variant():
    with pytest.raises(ValueError):
        fixture_mul_mu(4)


def test_mul_mu_2_names_true_as_witness_of_failure():
    fam = fixture_mul_mu(2)
    sub, _ = fam.mu_star_1_parts()
    assert not sub.holds
    logic = fam.logic()
    mu_true = logic.modelset(logic.mu_mask(logic.carrier))
    assert not mu_true.members <= {(0, 0, 0)}


def test_nm_interpolant_refuses_mul_mu_1():
    fam = fixture_mul_mu(1)
    with pytest.raises(PreconditionError) as err:
        nm_interpolant(fam, MUL_MU_PHI, MUL_MU_PSI, ["p"], ["q"], ["r"])
    assert "split" in err.value.witness
    assert search_interpolants(fam.logic(), MUL_MU_PHI, MUL_MU_PSI, Language(("q",))) == []
    res = nm_interpolant(fam, MUL_MU_PHI, MUL_MU_PSI, ["p"], ["q"], ["r"], check_precondition=False)
    assert not res.ok


def test_nm_interpolant_input_errors():
    fam = fixture_mul_mu(1)
    with pytest.raises(InterpolationError, match="J''"):
        nm_interpolant(fam, "p", "p", ["p"], ["q"], ["r"])
    with pytest.raises(InterpolationError, match="J u J'"):
        nm_interpolant(fam, "q", "r", ["p"], ["q"], ["r"])
    with pytest.raises(InterpolationError, match="does not entail"):
        nm_interpolant(fam, "q", "p", ["p"], ["q"], ["r"])
    with pytest.raises(InterpolationError, match="partition"):
        nm_interpolant(fam, "q", "q", ["p"], ["q"], [])


def chain2(name):
    return abstract_relation(2, [(0, 1)], name)


def gh_family():
    return set_variant_family([Language((v,)) for v in "pqr"], [chain2(v) for v in "pqr"])


def test_set_variant_family_has_mu_star_1():
    assert check_mu_star_1_family(gh_family()).holds


def test_nm_interpolant_on_gh_family_all_literal_pairs():
    fam = gh_family()
    logic = fam.logic()
    lang = fam.language
    checked = 0
    for phi in literal_conjunctions(lang.select(["q", "r"])):
        for psi in literal_conjunctions(lang.select(["p", "q"])):
            if not logic.entails(phi, psi):
                continue
            res = nm_interpolant(fam, phi, psi, ["p"], ["q"], ["r"])
            assert res.ok
            # Theta is a cylinder over q
            assert definable_over(res.theta, Language(("q",))) is not None or not res.theta.members
            checked += 1
    assert checked > 5


def test_nm_interpolant_self():
    fam = gh_family()
    res = nm_interpolant(fam, "q", "q", ["p"], ["q"], ["r"])
    assert res.ok
    assert equivalent(res.formula, parse_formula("q"), Language(("q",)))


def test_empty_outer_blocks():
    fam = gh_family()
    res = nm_interpolant(fam, "q & r", "p | q", [], ["p", "q"], ["r"])
    assert res.ok
    res = nm_interpolant(fam, "q", "p | q", ["p"], ["q", "r"], [])
    assert res.ok


def test_classical_left_interpolation_on_gh_plus():
    # phi |- alpha |~ psi over the middle block, whenever phi |~ psi
    fam = gh_family()
    logic = fam.logic()
    lang = fam.language
    q = Language(("q",))
    for phi in literal_conjunctions(lang.select(["q", "r"])):
        for psi in literal_conjunctions(lang.select(["p", "q"])):
            if logic.entails(phi, psi):
                assert search_interpolants(logic, phi, psi, q, classical_left=True)
