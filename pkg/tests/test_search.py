import pytest
from hypothesis import given, strategies as st

from nmindep.pref import is_ranked, is_smooth
from nmindep.search import (canonical, code_of, edges_of, find_relation, is_ranked_code, is_smooth_code,
                            relation_codes, relations)

# unlabeled digraphs without loops, and partial orders, by number of points
ALL_UP_TO_ISO = {1: 1, 2: 3, 3: 16, 4: 218}
POSETS_UP_TO_ISO = {1: 1, 2: 2, 3: 5, 4: 16}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_counts_up_to_isomorphism(n):
    assert len(relation_codes(n)) == ALL_UP_TO_ISO[n]
    assert len(relation_codes(n, smooth=True)) == POSETS_UP_TO_ISO[n]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ranked_smooth_are_weak_orders(n):
    # weak orders up to isomorphism are compositions of n
    ranked = [c for c in relation_codes(n, smooth=True) if is_ranked_code(c, n)]
    assert len(ranked) == 2 ** (n - 1)


def test_labelled_counts():
    assert len(relation_codes(3, up_to_iso=False)) == 2 ** 6
    # labelled posets on 3 points
    assert len(relation_codes(3, smooth=True, up_to_iso=False)) == 19


@given(st.integers(0, 2 ** 12 - 1), st.randoms(use_true_random=False))
def test_canonical_is_invariant(code, rnd):
    n = 4
    code &= ~sum(1 << (i * n + i) for i in range(n))
    perm = list(range(n))
    rnd.shuffle(perm)
    moved = code_of([(perm[i], perm[j]) for i, j in edges_of(code, n)], n)
    assert canonical(moved, n) == canonical(code, n)


@pytest.mark.parametrize("n", [2, 3])
def test_code_predicates_agree_with_relations(n):
    for code, rel in zip(relation_codes(n, up_to_iso=False), relations(n, up_to_iso=False)):
        assert is_smooth_code(code, n) == is_smooth(rel)
        assert is_ranked_code(code, n) == is_ranked(rel)


def test_find_relation_prefers_small_carriers():
    r = find_relation(4, lambda r: not is_ranked(r))
    assert len(r.carrier) == 3
    assert find_relation(2, lambda r: len(r.carrier) > 5) is None
    with pytest.raises(ValueError):
        relation_codes(5)
