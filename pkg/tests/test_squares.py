import pytest
from hypothesis import given
from hypothesis import strategies as st

from icpr.errors import NotRepresentable
from icpr.squares import (
    EXTENDED_POOL,
    PAPER_POOL,
    Kind,
    RepairPair,
    SquaresRep,
    Triplet,
    all_triplets,
    apply_repair,
    classify_triplet,
    find_repair,
    is_good,
    iter_representations,
    min_squares_count,
    squares_rep,
)

from conftest import brute_min_squares, legendre_set


@pytest.mark.parametrize("n, expected", [(0, 0), (7, 4), (33, 3), (9, 1)])
def test_min_squares_count_examples(n, expected):
    assert min_squares_count(n) == expected


def test_min_squares_count_matches_brute_force(brute_table):
    four = legendre_set(10**4)
    for n, expected in enumerate(brute_table):
        assert min_squares_count(n) == expected, n
        assert (expected == 4) == (n in four), n


@given(st.integers(min_value=0, max_value=(1 << 31) - 1))
def test_rep_is_valid_and_minimal_count_is_consistent(n):
    rep = squares_rep(n, 4)
    assert sum(t * t for t in rep.terms) == n
    assert len(rep.terms) == min_squares_count(n)


def test_all_reps_up_to_a_million_sum_correctly():
    for n in range(10**6 + 1):
        terms = squares_rep(n, 4).terms
        assert sum(t * t for t in terms) == n
        assert len(terms) <= 4


def test_squares_rep_examples():
    assert squares_rep(12, 3).terms == (2, 2, 2)
    assert squares_rep(64, 4).terms == (8,)
    with pytest.raises(NotRepresentable):
        squares_rep(7, 3)
    with pytest.raises(NotRepresentable):
        squares_rep(12, 2)


def test_squares_rep_is_lexicographically_greatest_minimal():
    for n in range(1, 600):
        k = brute_min_squares(n)
        minimal = [r for r in iter_representations(n, k) if len(r) == k]
        assert squares_rep(n).terms == max(minimal)


def test_squares_rep_type_rejects_bad_terms():
    with pytest.raises(ValueError):
        SquaresRep(5, (1, 2))
    with pytest.raises(ValueError):
        SquaresRep(6, (1, 2, 1))
    with pytest.raises(ValueError):
        SquaresRep(4, (1, 1, 1, 1, 0))
    assert SquaresRep(6, (2, 1, 1)).terms == (2, 1, 1)


def test_iter_representations_is_complete_and_ordered():
    from itertools import combinations_with_replacement

    for n in range(0, 120):
        expected = set()
        for k in range(0, 6):
            for combo in combinations_with_replacement(range(1, 11), k):
                if sum(x * x for x in combo) == n:
                    expected.add(tuple(sorted(combo, reverse=True)))
        got = list(iter_representations(n, 5))
        assert set(got) == expected
        assert got == sorted(got, reverse=True)


@pytest.mark.parametrize("n, expected", [(10, True), (16, False), (23, False), (1, True), (4, False)])
def test_is_good(n, expected):
    assert is_good(n) is expected


@given(st.integers(min_value=0, max_value=10**9))
def test_good_numbers_need_at_most_three_squares(n):
    if is_good(n):
        assert min_squares_count(n) <= 3


def test_classify_examples():
    assert classify_triplet((7, 7, 7)) == classify_triplet(Triplet(7, 7, 7))
    c = classify_triplet((7, 7, 7))
    assert (c.kind, c.good_count) == (Kind.BAD, 0)
    c = classify_triplet((2, 1, 2))
    assert (c.kind, c.good_count) == (Kind.VERY_GOOD, 3)
    c = classify_triplet((1, 1, 1))
    assert (c.kind, c.good_count) == (Kind.BAD, 1)
    with pytest.raises(ValueError):
        classify_triplet((8, 0, 0))


def test_exactly_162_bad_triplets():
    kinds = [classify_triplet(t).kind for t in all_triplets()]
    assert len(kinds) == 512
    assert kinds.count(Kind.BAD) == 3 * 3**2 * 5 + 3**3 == 162


@pytest.mark.parametrize("t, p, expected", [
    ((7, 7, 7), (1, 2), (6, 5, 3)),
    ((1, 1, 1), (1, 3), (0, 6, 0)),
    ((0, 0, 0), (1, 2), (7, 6, 4)),
])
def test_apply_repair_examples(t, p, expected):
    result = apply_repair(t, p)
    assert result == expected
    assert classify_triplet(result).kind is Kind.VERY_GOOD


def test_find_repair_examples():
    assert find_repair((7, 7, 7), PAPER_POOL) == (RepairPair(1, 2), Triplet(6, 5, 3))
    pair, _ = find_repair((1, 1, 1), PAPER_POOL)
    assert pair == (1, 3)
    assert classify_triplet(apply_repair((1, 1, 1), (1, 2))).kind is Kind.GOOD
    assert find_repair((6, 7, 3), EXTENDED_POOL) == (RepairPair(2, 1), Triplet(2, 5, 2))


def test_pool_order_and_contents():
    assert PAPER_POOL == ((1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (2, 1), (2, 3))
    assert EXTENDED_POOL[:8] == PAPER_POOL
    assert set(EXTENDED_POOL) == {(x, y) for x in range(1, 8) for y in range(1, 8) if x * y <= 7}
    assert len(EXTENDED_POOL) == len(set(EXTENDED_POOL)) == 16


def test_every_bad_triplet_is_repairable():
    for t in all_triplets():
        if classify_triplet(t).kind is Kind.BAD:
            hit = find_repair(t, EXTENDED_POOL)
            assert hit is not None, t
            assert classify_triplet(hit[1]).kind is Kind.VERY_GOOD


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6),
       st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.sampled_from(EXTENDED_POOL))
def test_repair_is_a_function_of_residues(a, b, c, da, db, dc, p):
    t1 = Triplet.of(a, b, c)
    t2 = Triplet.of(a + 8 * da, b + 8 * db, c + 8 * dc)
    assert apply_repair(t1, p) == apply_repair(t2, p)
    assert classify_triplet(t1) == classify_triplet(t2)
