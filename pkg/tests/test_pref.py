import itertools

import pytest
from hypothesis import given, strategies as st

from nmindep.consequence import NmLogic
from nmindep.lang import Language, ModelSet, all_models, models_of, parse_formula
from nmindep.pref import (PreferenceRelation, ProductStructure, RelationError, abstract_relation,
                          build_counting, build_forget, build_lexicographic, build_set_variant,
                          build_weighted, check_GH, check_GHplus, is_acyclic, is_ranked, is_smooth,
                          is_transitive, mu)

PQR = Language(("p", "q", "r"))
chain = abstract_relation(2, [(0, 1)])


def single_edge():
    return PreferenceRelation(frozenset(all_models(PQR)), {((0, 0, 0), (1, 0, 0))}, PQR)


def test_mu_of_single_edge_relation():
    x = models_of(parse_formula("!q & !r"), PQR)
    assert mu(single_edge(), x).members == {(0, 0, 0)}


def test_mu_trivial_cases():
    r = abstract_relation(3, [])
    pts = frozenset(r.carrier)
    assert mu(r, pts) == pts
    assert mu(chain, frozenset()) == frozenset()
    with pytest.raises(RelationError):
        mu(chain, {(7,)})


def test_irreflexive():
    with pytest.raises(RelationError):
        abstract_relation(2, [(0, 0)])


def test_two_cycle_is_not_smooth():
    r = abstract_relation(2, [(0, 1), (1, 0)])
    assert mu(r, r.carrier) == frozenset()
    assert not is_smooth(r)
    assert is_smooth(abstract_relation(1, []))


def relations_on(n):
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for k in range(len(pairs) + 1):
        for es in itertools.combinations(pairs, k):
            yield abstract_relation(n, es)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_smooth_iff_strict_order_on_small_carriers(n):
    # on finite carriers, smoothness on all subsets is the same as acyclicity plus transitivity
    for r in relations_on(n):
        assert is_smooth(r) == (is_transitive(r) and is_acyclic(r))


def test_ranked():
    assert is_ranked(PreferenceRelation.from_ranks({(0,): 0, (1,): 1, (2,): 1}))
    assert not is_ranked(abstract_relation(3, [(0, 1)]))


@given(st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda e: e[0] != e[1])),
       st.sets(st.integers(0, 3)))
def test_mu_inside_and_idempotent_on_edge_free(edges, xs):
    r = abstract_relation(4, edges)
    x = frozenset((i,) for i in xs)
    m = mu(r, x)
    assert m <= x
    if not any(a in m and b in m for a, b in r.edges):
        assert mu(r, m) == m


def test_set_variant_two_chains():
    ps = build_set_variant([chain, chain])
    r = ps.composed
    assert r.less((0, 0), (0, 1)) and r.less((0, 0), (1, 1)) and r.less((0, 0), (1, 0))
    assert not r.less((0, 1), (1, 0)) and not r.less((1, 0), (0, 1))
    assert all(v.holds for v in check_GH(ps))
    assert check_GHplus(ps).holds


def test_counting_equals_set_variant_on_two_chains():
    assert build_counting([chain, chain]).composed.edges == build_set_variant([chain, chain]).composed.edges


def test_weighted_opposite_orders():
    rev = abstract_relation(2, [(1, 0)])
    ps = build_weighted([chain, rev], [2, 1])
    assert ps.composed.less((0, 0), (1, 1))
    with pytest.raises(RelationError):
        build_weighted([chain, rev], [1])
    with pytest.raises(RelationError):
        build_weighted([chain, rev], [1, 0])


def test_deleted_edge_breaks_gh1():
    ps = build_set_variant([chain, chain])
    broken = ps.composed.without_edge((0, 0), (1, 1))
    gh1, gh2 = check_GH(ProductStructure(ps.blocks, ps.components, broken))
    assert not gh1.holds and gh2.holds
    assert gh1.witness["missing"] == [(0, 0), (1, 1)]


def test_counting_compensation_fails_gh_plus_only():
    c2 = abstract_relation(3, [(0, 1)])
    ps = build_counting([chain, c2])
    assert all(v.holds for v in check_GH(ps))
    v = check_GHplus(ps)
    assert not v.holds
    assert v.witness["product"] and not v.witness["componentwise"]


def test_forget_and_lex():
    minor = abstract_relation(2, [(0, 1)], "y")
    ps = build_forget(chain, minor)
    assert ps.composed.edges == {((0, 0), (1, 0)), ((0, 1), (1, 1))}
    assert build_forget(chain, abstract_relation(2, [], "y")).composed.edges == ps.composed.edges
    lex = build_lexicographic(abstract_relation(2, []), minor)
    assert lex.composed.edges == {((0, 0), (0, 1)), ((1, 0), (1, 1))}


def smooth_components(n):
    return [r for r in relations_on(n) if is_smooth(r)]


@pytest.mark.parametrize("n1,n2", [(2, 2), (2, 3), (3, 3)])
def test_set_variant_always_gh(n1, n2):
    for a in smooth_components(n1):
        for b in smooth_components(n2):
            ps = build_set_variant([a, b])
            assert all(v.holds for v in check_GH(ps))
            assert check_GHplus(ps).holds


@given(st.sets(st.tuples(st.tuples(st.integers(0, 1), st.integers(0, 1)),
                         st.tuples(st.integers(0, 1), st.integers(0, 1))).filter(lambda e: e[0] != e[1])))
def test_gh_plus_implies_gh(edges):
    comp = PreferenceRelation(frozenset(itertools.product((0, 1), repeat=2)), edges, Language(("x0", "x1")))
    ps = ProductStructure((Language(("x0",)), Language(("x1",))), (chain, chain), comp)
    if check_GHplus(ps).holds:
        assert all(v.holds for v in check_GH(ps))


def test_forget_logic_on_one_variable_blocks():
    # a & a2 |~ b & b2 iff a |~1 b and a2 |- b2, for consistent literal conjunctions
    main = PreferenceRelation(frozenset(all_models(Language(("p",)))), {((0,), (1,))}, Language(("p",)))
    minor = PreferenceRelation.empty(all_models(Language(("q",))), Language(("q",)))
    ps = build_forget(main, minor)
    whole = NmLogic(ps.language, ps.composed)
    left = NmLogic(Language(("p",)), main)
    lits = {"p": ["true", "p", "!p"], "q": ["true", "q", "!q"]}
    for a, b in itertools.product(lits["p"], repeat=2):
        for a2, b2 in itertools.product(lits["q"], repeat=2):
            joint = whole.entails(f"{a} & {a2}", f"{b} & {b2}")
            m2a = models_of(parse_formula(a2), Language(("q",)))
            m2b = models_of(parse_formula(b2), Language(("q",)))
            assert joint == (left.entails(a, b) and m2a <= m2b)


def test_json_round_trip():
    r = single_edge()
    assert PreferenceRelation.from_json(r.to_json()) == r
