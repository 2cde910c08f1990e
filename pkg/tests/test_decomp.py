from math import isqrt

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from icpr.decomp import (
    MAX_WIDTH,
    Decomposition,
    ReductionTrace,
    Route,
    Step,
    SymMat2,
    check_dnn,
    decompose,
    lift,
    mod8_split,
    reduce,
    table3_regenerate,
    table3_summary,
    verify,
)
from icpr.errors import NotDNN, TraceMismatch
from icpr.squares import EXTENDED_POOL, Kind, Triplet, apply_repair, classify_triplet

from conftest import dnn_matrices


@st.composite
def dnn(draw, max_entry=(1 << 31) - 1):
    a = draw(st.integers(0, max_entry))
    c = draw(st.integers(0, max_entry))
    b = draw(st.integers(0, min(isqrt(a * c), max_entry)))
    return SymMat2(a, b, c)


@pytest.mark.parametrize("A, expected", [((8, 1, 8), True), ((1, 2, 1), False), ((0, 1, 5), False), ((0, 0, 0), True)])
def test_check_dnn(A, expected):
    assert check_dnn(A) is expected


def test_symmat_bounds():
    with pytest.raises(ValueError):
        SymMat2(-1, 0, 0)
    with pytest.raises(ValueError):
        SymMat2(1 << 31, 0, 0)
    with pytest.raises(TypeError):
        SymMat2(1.0, 0, 0)
    assert SymMat2((1 << 31) - 1, 0, 0).det == 0


def test_reduce_examples():
    R, trace = reduce((2, 3, 5))
    assert R.as_tuple() == (1, 1, 2)
    assert trace.steps.count(Step.SHEAR) == 1
    R, trace = reduce((5, 2, 6))
    assert R.as_tuple() == (5, 2, 6) and trace.steps == ()
    R, trace = reduce((1, 2, 5))
    assert R.as_tuple() == (1, 1, 2)
    assert trace.steps.count(Step.SHEAR) == 1
    with pytest.raises(NotDNN):
        reduce((1, 2, 1))


def test_single_shear_image():
    trace = ReductionTrace(SymMat2(2, 3, 5), (Step.SHEAR,))
    assert trace.end.as_tuple() == (2, 1, 1)


@given(dnn())
def test_reduce_normal_form_and_determinant(A):
    R, trace = reduce(A)
    assert R.c >= R.a >= R.b >= 0
    assert R.det == A.det
    assert trace.end == R
    m = A
    for step in trace.steps:
        m = ReductionTrace(m, (step,)).end
        assert m.det == A.det and check_dnn(m)


def test_lift_examples():
    D = Decomposition(((1, 0), (1, 1)), Route.AEQB)
    assert verify((2, 1, 1), D)
    lifted = lift(D, ReductionTrace(SymMat2(2, 3, 5), (Step.SHEAR,)))
    assert set(lifted.columns) == {(1, 1), (1, 2)}
    assert verify((2, 3, 5), lifted) and lifted.width == D.width
    assert lift(D, ReductionTrace(SymMat2(2, 1, 1))) == D
    with pytest.raises(TraceMismatch):
        lift(Decomposition(((1, 1),), Route.AEQB), ReductionTrace(SymMat2(2, 1, 1)))


@settings(deadline=None)
@given(dnn(max_entry=10**6))
def test_lift_round_trip(A):
    R, trace = reduce(A)
    D = decompose(R)
    lifted = lift(D, trace)
    assert verify(A, lifted)
    assert lifted.width == D.width


def test_verify_examples():
    assert verify((2, 3, 5), [(1, 1), (1, 2)])
    assert not verify((2, 3, 5), [(1, 1)])
    assert verify((0, 0, 0), [])
    assert not verify((1, 0, 0), [])
    assert not verify((1, 0, 1), [(1, 0), (0, 1), (-1, 0), (1, 0)])


def test_decompose_examples():
    D = decompose((8, 1, 8))
    assert D.width == 9 and D.route is Route.BSQLEC
    assert (1, 1) in D.columns
    assert decompose((7, 0, 7)).width == 8
    D = decompose((1, 1, 1))
    assert D.columns == ((1, 1),) and D.route is Route.AEQB
    D = decompose((0, 0, 0))
    assert D.columns == () and D.route is Route.ZERO and D.width == 0
    with pytest.raises(NotDNN):
        decompose((1, 2, 1))


def test_mod8_example_certificate():
    A = (70, 63, 75)
    assert classify_triplet(Triplet.of(*A)).kind is Kind.BAD
    D = mod8_split(*A, (2, 1))
    assert sorted(D.columns) == sorted([(2, 1), (5, 5), (6, 6), (2, 0), (1, 0), (0, 3), (0, 2)])
    assert verify(A, D) and D.width == 7
    best = decompose(A)
    assert best.route is Route.MOD8 and verify(A, best)
    # route competition finds something at least as narrow
    assert best.width <= 7


def test_mod8_split_rejects_infeasible_pair():
    with pytest.raises(ValueError):
        mod8_split(70, 69, 70, (1, 7))


def test_columns_are_canonical():
    D = decompose((70, 63, 75))
    assert list(D.columns) == sorted(D.columns, reverse=True)
    assert (0, 0) not in D.columns


def test_route_width_bounds_small_scan():
    for a, b, c in dnn_matrices(40):
        D = decompose((a, b, c))
        assert verify((a, b, c), D)
        assert D.width <= MAX_WIDTH
        if D.route in (Route.BZERO, Route.AEQB):
            assert D.width <= 8
        if D.route in (Route.BSQLEC, Route.WITNESS):
            assert D.width <= 9
        assert D.width <= 9  # reduced a <= c <= 40 <= 64


@settings(max_examples=300, deadline=None)
@given(dnn())
def test_decompose_large_entries(A):
    D = decompose(A)
    assert verify(A, D)
    assert D.width <= MAX_WIDTH


@settings(max_examples=300, deadline=None)
@given(st.integers(65, 5000), st.integers(0, 60), st.integers(0, 60))
def test_decompose_near_diagonal(a, da, dc):
    # b close to a and c: where repair feasibility is tightest
    c = a + dc
    b = max(0, a - da)
    assume(b * b <= a * c)
    D = decompose((a, b, c))
    assert verify((a, b, c), D) and D.width <= MAX_WIDTH


@given(dnn(max_entry=10**6), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_repair_eligibility_depends_only_on_residues(A, da, db, dc):
    B = (A.a + 8 * da, A.b + 8 * db, A.c + 8 * dc)

    def eligible(m):
        t = Triplet.of(*m)
        return [p for p in EXTENDED_POOL if classify_triplet(apply_repair(t, p)).kind is Kind.VERY_GOOD]

    assert eligible(A.as_tuple()) == eligible(B)


def test_table3_regeneration():
    rows = table3_regenerate()
    assert len(rows) == 162
    assert rows[Triplet(7, 7, 7)].pair == (1, 2)
    assert rows[Triplet(7, 7, 7)].result == (6, 5, 3)
    for t, row in rows.items():
        assert classify_triplet(t).kind is Kind.BAD
        assert classify_triplet(row.result).kind is Kind.VERY_GOOD
        assert apply_repair(t, row.pair) == row.result
        assert row.pair.x * row.pair.y <= 7
    summary = table3_summary(rows)
    assert summary["mirror_closed"]
    assert summary["bad_triplets"] == 162
    assert summary["paper_pool_sufficed"] + len(summary["paper_pool_failed"]) == 162
