import itertools

import pytest
from hypothesis import given, strategies as st

from nmindep.pref import is_ranked, mu, nonempty_subsets
from nmindep.search import relations
from nmindep.size import (DomainError, SizeSystem, SizeSystemError, check_milder, check_rule,
                          check_scenario1, get_rule, principal_filter_from_mu,
                          principal_filter_from_relation, replay, rule_names)

ABC = frozenset("abc")


def smooth_upto(n):
    for k in range(1, n + 1):
        yield from relations(k, smooth=True)


def test_principal_filter_classification():
    sys = principal_filter_from_mu({ABC: {"a"}})
    got = {frozenset(s): sys.classify(s, ABC) for k in range(4) for s in itertools.combinations("abc", k)}
    for s, c in got.items():
        assert c == ("big" if "a" in s else "small")
    assert "medium" not in got.values()


def test_principal_filter_at_top():
    sys = principal_filter_from_mu({ABC: ABC})
    assert sys.is_big(ABC, ABC)
    assert not any(sys.is_big(s, ABC) for s in [{"a", "b"}, {"c"}, set()])
    assert sys.is_medium({"a", "b"}, ABC)


def test_empty_mu_rejected():
    with pytest.raises(SizeSystemError):
        principal_filter_from_mu({ABC: set()})
    with pytest.raises(SizeSystemError):
        principal_filter_from_mu({ABC: {"z"}})


def test_complement_pair_rejected():
    with pytest.raises(SizeSystemError):
        SizeSystem("abcd", small={frozenset("abcd"): [frozenset("ab"), frozenset("cd")]})


mu_tables = st.dictionaries(
    st.sets(st.sampled_from("abc"), min_size=1).map(frozenset),
    st.sets(st.sampled_from("abc"), min_size=1).map(frozenset),
).map(lambda d: {x: (m & x) or frozenset([min(x)]) for x, m in d.items()})


@given(mu_tables)
def test_basic_rules_on_any_principal_filter(table):
    if not table:
        return
    sys = principal_filter_from_mu(table, "abc")
    for rule in ("Opt", "iM", "I1", "Iomega", "Fomega"):
        assert check_rule(sys, rule).holds, rule


@given(mu_tables)
def test_duality(table):
    if not table:
        return
    sys = principal_filter_from_mu(table, "abc")
    for x in table:
        for k in range(len(x) + 1):
            for a in itertools.combinations(sorted(x), k):
                assert sys.is_small(set(a), x) == sys.is_big(x - set(a), x)


def brute_mplus_two_step(rel, inner, outer):
    """A in inner(X), X in outer(Y) => A in M+(Y), straight from mu; inner/outer in {'F', 'M+'}."""
    test = {"F": lambda a, x: mu(rel, x) <= a, "M+": lambda a, x: bool(a & mu(rel, x))}
    subs = list(nonempty_subsets(rel.carrier))
    for y in subs:
        for x in subs:
            if not x <= y or not test[outer](x, y):
                continue
            for k in range(len(x) + 1):
                for a in itertools.combinations(sorted(x), k):
                    a = frozenset(a)
                    if test[inner](a, x) and not a & mu(rel, y):
                        return False
    return True


@pytest.mark.parametrize("rule,inner,outer", [
    ("M+omega(1)", "F", "M+"), ("M+omega(2)", "M+", "F"), ("M++(3)", "M+", "M+"),
])
def test_two_step_rules_match_reference(rule, inner, outer):
    for rel in smooth_upto(4):
        sys = principal_filter_from_relation(rel)
        assert check_rule(sys, rule).holds == brute_mplus_two_step(rel, inner, outer), (rule, rel.edges)


@pytest.mark.parametrize("rule", ["M+omega(1)", "M+omega(2)", "M+omega(3)", "M+omega(4)",
                                  "M++(1)", "M++(2)", "M++(3)", "Scenario1(1)", "Scenario1(2)",
                                  "Scenario1(3)", "eMI", "eMF", "Idisj", "Fdisj", "I2", "In(3)", "Fn(2)",
                                  "M+n(3)", "nSmallNotAll(2)"])
def test_ranked_relations_pass(rule):
    for rel in smooth_upto(4):
        if is_ranked(rel):
            v = check_rule(principal_filter_from_relation(rel), rule)
            assert v.holds, (rule, rel.edges, v.witness)


def test_non_ranked_counterexample_replays():
    for rel in smooth_upto(4):
        sys = principal_filter_from_relation(rel)
        v = check_rule(sys, "M++(3)")
        if not v.holds:
            assert not is_ranked(rel)
            assert replay(sys, v)
            assert len(rel.carrier) <= 4
            return
    pytest.fail("no smooth relation on 4 points violates M++(3)")


def test_holding_verdict_does_not_replay():
    rel = next(iter(relations(2, smooth=True)))
    sys = principal_filter_from_relation(rel)
    assert not replay(sys, check_rule(sys, "iM"))


def test_scenario1_single_triples():
    sys = principal_filter_from_mu({ABC: {"a"}, frozenset("ab"): {"a"}, frozenset("a"): {"a"}})
    for case in (1, 2, 3, 4):
        assert check_scenario1(sys, case, ABC, ABC, ABC).holds
    with pytest.raises(ValueError):
        check_scenario1(sys, 1, ABC, {"a"}, ABC)


def test_scenario1_case4_non_ranked_counterexample():
    found = None
    for rel in smooth_upto(4):
        sys = principal_filter_from_relation(rel)
        v = check_scenario1(sys, 4)
        if not v.holds:
            found = (rel, sys, v)
            break
    assert found is not None
    rel, sys, v = found
    assert not is_ranked(rel) and replay(sys, v)


def test_milder_cases():
    sys = principal_filter_from_mu({frozenset("abcd"): {"a"}, frozenset("abc"): {"a"}, frozenset("ab"): {"a"}})
    assert check_milder(sys, 1, {"a"}, [frozenset("ab")]).holds
    assert check_milder(sys, 2, {"a", "b"}, [frozenset("abc"), frozenset("abcd")]).holds
    # A big in X1 and X1 big in X2, yet A small in X2
    crafted = SizeSystem("abcd", small={frozenset("abc"): [frozenset("c"), frozenset()],
                                        frozenset("abcd"): [frozenset("d"), frozenset("ab"), frozenset()]})
    v = check_milder(crafted, 2, {"a", "b"}, [frozenset("abc"), frozenset("abcd")])
    assert not v.holds
    assert not check_rule(crafted, "nSmallNotAll(2)").holds
    with pytest.raises(ValueError):
        check_milder(crafted, 2, {"a"}, [frozenset("abcd"), frozenset("abc")])


def test_domain_errors_name_missing_base():
    sys = principal_filter_from_mu({frozenset("a"): {"a"}, frozenset("b"): {"b"}})
    with pytest.raises(DomainError, match="X u Y"):
        check_rule(sys, "Idisj")


def test_rule_catalogue():
    names = rule_names()
    for n in ("Opt", "iM", "M++(3)", "Scenario1(4)", "ProjBig"):
        assert n in names
    with pytest.raises(KeyError):
        get_rule("Bogus")
    assert "In(2)" not in names and get_rule("In(2)").name == "In(2)"


def test_json_round_trip():
    sys = principal_filter_from_mu({ABC: {"a", "b"}})
    back = SizeSystem.from_json(sys.to_json())
    for k in range(4):
        for a in itertools.combinations("abc", k):
            assert back.classify(set(a), ABC) == sys.classify(set(a), ABC)
