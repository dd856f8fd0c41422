import random

import pytest
from hypothesis import given, settings, strategies as st

from imp2.enumeration import (
    A_RULES, P_RULES, pair_rank, pair_unrank, sentence_rank, sentence_unrank,
    tuple_rank, tuple_unrank, union_rank, union_schedule,
)
from imp2.syntax import Assign, Lit, Loc, Mul, Skip, parse, to_text
from conftest import FACTORIAL
from oracles import random_sentence, round_robin, tuples_by_sum

P_SIZES = [1, None, None, None, None]
A_SIZES = [1, None, None, None, None, None]


def test_pair_examples():
    assert pair_rank(0, 0) == 0
    assert pair_rank(0, 26) == 351
    assert pair_rank(7, 2) == 52
    assert pair_unrank(0) == (0, 0)
    assert pair_unrank(351) == (0, 26)
    assert pair_unrank(52) == (7, 2)


def test_pair_matches_brute_force_order():
    order = tuples_by_sum(2, 40)
    for i, (a, b) in enumerate(order):
        assert pair_rank(a, b) == i
        assert pair_unrank(i) == (a, b)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_tuple_matches_brute_force_order(k):
    order = tuples_by_sum(k, 12)
    for i, t in enumerate(order):
        assert tuple_rank(t, k) == i
        assert tuple_unrank(i, k) == t


def test_tuple_examples():
    assert tuple_rank((0, 0, 0)) == 0
    assert [tuple_rank(t) for t in [(0, 0, 1), (0, 1, 0), (1, 0, 0)]] == [1, 2, 3]


@pytest.mark.parametrize("k", [2, 3, 4])
def test_layer_fairness(k):
    # ranks below a layer boundary are exactly the tuples of smaller sum
    for s in range(13):
        below = {t for t in tuples_by_sum(k, s) if sum(t) < s}
        boundary = len(below)
        assert {tuple_unrank(i, k) for i in range(boundary)} == below


def test_tuple_arity_zero_rejected():
    with pytest.raises(ValueError):
        tuple_rank((), 0)
    with pytest.raises(ValueError):
        tuple_unrank(3, 0)


def test_pair_consistency_random():
    rng = random.Random(7)
    for _ in range(10**4):
        a, b = rng.randrange(10**rng.randrange(1, 40)), rng.randrange(10**rng.randrange(1, 40))
        assert tuple_rank((a, b), 2) == pair_rank(a, b)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 10**30), min_size=1, max_size=5))
def test_tuple_roundtrip_big(t):
    k = len(t)
    assert tuple_unrank(tuple_rank(t, k), k) == tuple(t)


@pytest.mark.parametrize("sizes", [P_SIZES, A_SIZES, [1, 1, None, None, None, None, None],
                                   [3, None, 1, 5, None], [2, 4, 1]])
def test_union_matches_round_robin(sizes):
    finite_total = None if None in sizes else sum(sizes)
    sched = round_robin(sizes, 500 if finite_total is None else finite_total)
    for pos, (rule, inner) in enumerate(sched):
        assert union_schedule(sizes, pos) == (rule, inner)
        assert union_rank(sizes, rule, inner) == pos
    if finite_total is not None:
        with pytest.raises(ValueError):
            union_schedule(sizes, finite_total)


def test_union_examples():
    assert union_schedule(P_SIZES, 0) == (P_RULES.index("skip"), 0)
    assert union_schedule(P_SIZES, 5) == (P_RULES.index("assign"), 1)
    assert union_schedule(A_SIZES, 26) == (A_RULES.index("numeral"), 5)


def test_known_positions():
    assert sentence_unrank(1405) == Assign(0, Lit(5))
    assert sentence_unrank(142049) == Assign(1, Mul(Loc(1), Loc(0)))
    factorial = parse(FACTORIAL)
    loop = factorial.second.second
    assert sentence_unrank(17972673899864641600766) == loop
    assert sentence_rank(loop) == 17972673899864641600766
    assert len(str(sentence_rank(factorial))) == 90
    assert to_text(sentence_unrank(1405)) == "x[0] := 5"


def test_skip_is_first():
    assert sentence_rank(Skip()) == 0
    assert sentence_unrank(0) == Skip()


def test_bijection_prefix():
    for n in range(20000):
        assert sentence_rank(sentence_unrank(n)) == n


def test_bijection_random_trees():
    rng = random.Random(11)
    for _ in range(2000):
        s = random_sentence(rng, depth=rng.randrange(1, 6))
        assert sentence_unrank(sentence_rank(s)) == s


def test_unrank_is_injective_on_prefix():
    seen = {sentence_unrank(n) for n in range(5000)}
    assert len(seen) == 5000


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        sentence_unrank(-1)
