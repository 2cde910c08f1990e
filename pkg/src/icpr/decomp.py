"""Constructive factorization A = B B^T of 2x2 doubly nonnegative integer matrices.

The pipeline first moves A into the normal form c >= a >= b >= 0 by
determinant-preserving integer congruences (swaps and shears), builds a
certificate there by the cheapest of several routes, and maps the columns
back to A.  Every certificate is checked exactly before it is returned.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cache
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import NotDNN, RepairGap, TraceMismatch, WidthOverflow
from .spanning import SpanWitness, witness_table
from .squares import (
    EXTENDED_POOL,
    PAPER_POOL,
    Kind,
    RepairPair,
    Triplet,
    _msc,
    all_triplets,
    classify_triplet,
    find_repair,
    good_count,
    square_terms,
)

ENTRY_BOUND = 1 << 31
MAX_WIDTH = 10
SMALL_DIAGONAL = 64
SMALL_DIAGONAL_WIDTH = 9

Column = tuple[int, int]


@dataclass(frozen=True)
class SymMat2:
    """The symmetric matrix ((a, b), (b, c)) with nonnegative entries below 2**31."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError(f"{name} must be an int, got {v!r}")
            if not 0 <= v < ENTRY_BOUND:
                raise ValueError(f"{name}={v} outside 0..2**31-1")

    @property
    def det(self) -> int:
        return self.a * self.c - self.b * self.b

    def __add__(self, other: "SymMat2") -> "SymMat2":
        return SymMat2(self.a + other.a, self.b + other.b, self.c + other.c)

    def as_tuple(self) -> tuple[int, int, int]:
        return self.a, self.b, self.c


def as_matrix(A: SymMat2 | Sequence[int]) -> SymMat2:
    if isinstance(A, SymMat2):
        return A
    a, b, c = A
    return SymMat2(a, b, c)


class Step(enum.Enum):
    SWAP = "Swap"
    SHEAR = "Shear"


def _apply_step(m: tuple[int, int, int], step: Step) -> tuple[int, int, int]:
    a, b, c = m
    if step is Step.SWAP:
        return c, b, a
    # second row minus first: column (x, y) -> (x, y - x)
    return a, b - a, a + c - 2 * b


@dataclass(frozen=True)
class ReductionTrace:
    start: SymMat2
    steps: tuple[Step, ...] = ()

    @property
    def end(self) -> SymMat2:
        m = self.start.as_tuple()
        for step in self.steps:
            m = _apply_step(m, step)
            if min(m) < 0:
                raise ValueError(f"trace leaves the nonnegative matrices at {m}")
        return SymMat2(*m)


class Route(enum.Enum):
    ZERO = "Zero"
    BZERO = "BZero"
    AEQB = "AEqB"
    BSQLEC = "BSqLeC"
    WITNESS = "Witness"
    MOD8 = "Mod8"


_ROUTE_RANK = {r: i for i, r in enumerate(Route)}


def canonical_columns(columns: Iterable[Sequence[int]]) -> tuple[Column, ...]:
    """Drop zero columns and sort the rest lexicographically non-increasing."""
    cols = [(int(x), int(y)) for x, y in columns]
    return tuple(sorted((col for col in cols if col != (0, 0)), reverse=True))


@dataclass(frozen=True)
class Decomposition:
    columns: tuple[Column, ...]
    route: Route
    repair: RepairPair | None = None

    def __post_init__(self):
        object.__setattr__(self, "columns", canonical_columns(self.columns))

    @property
    def width(self) -> int:
        return len(self.columns)

    def gram(self) -> tuple[int, int, int]:
        """(sum x^2, sum xy, sum y^2) over the columns."""
        return (
            sum(x * x for x, _ in self.columns),
            sum(x * y for x, y in self.columns),
            sum(y * y for _, y in self.columns),
        )


def check_dnn(A: SymMat2 | Sequence[int]) -> bool:
    A = as_matrix(A)
    return A.b * A.b <= A.a * A.c


def verify(A: SymMat2 | Sequence[int], D: Decomposition | Iterable[Sequence[int]]) -> bool:
    """True iff the columns are nonnegative and reproduce A exactly."""
    a, b, c = as_matrix(A).as_tuple()
    columns = D.columns if isinstance(D, Decomposition) else list(D)
    sa = sb = sc = 0
    for col in columns:
        x, y = col
        if x < 0 or y < 0:
            return False
        sa += x * x
        sb += x * y
        sc += y * y
    return (sa, sb, sc) == (a, b, c)


def reduce(A: SymMat2 | Sequence[int]) -> tuple[SymMat2, ReductionTrace]:
    """Bring a DNN matrix to c >= a >= b >= 0 by swaps and shears.

    A shear (a, b, c) -> (a, b - a, a + c - 2b) is applied while b > a; it
    keeps the determinant and strictly lowers b, so the loop terminates.

    Raises:
        NotDNN: if A is not doubly nonnegative.
    """
    A = as_matrix(A)
    if not check_dnn(A):
        raise NotDNN(f"{A.as_tuple()} is not doubly nonnegative")
    m = A.as_tuple()
    steps = []
    while True:
        if m[0] > m[2]:
            m = _apply_step(m, Step.SWAP)
            steps.append(Step.SWAP)
        if m[1] <= m[0]:
            break
        m = _apply_step(m, Step.SHEAR)
        steps.append(Step.SHEAR)
    return SymMat2(*m), ReductionTrace(A, tuple(steps))


def lift(D: Decomposition, trace: ReductionTrace) -> Decomposition:
    """Map a certificate of ``trace.end`` back to one of ``trace.start``.

    Raises:
        TraceMismatch: if D does not verify against the reduced matrix.
    """
    if not verify(trace.end, D):
        raise TraceMismatch(f"certificate does not reproduce {trace.end.as_tuple()}")
    cols = list(D.columns)
    for step in reversed(trace.steps):
        if step is Step.SWAP:
            cols = [(y, x) for x, y in cols]
        else:
            cols = [(x, x + y) for x, y in cols]
    return Decomposition(tuple(cols), D.route, D.repair)


@cache
def _witnesses() -> Mapping[tuple[int, int], SpanWitness]:
    # built once per process, never mutated afterwards
    return MappingProxyType(witness_table(SMALL_DIAGONAL))


def _x_cols(n: int) -> list[Column]:
    return [(s, 0) for s in square_terms(n)]


def _y_cols(n: int) -> list[Column]:
    return [(0, t) for t in square_terms(n)]


def _j_cols(n: int) -> list[Column]:
    return [(s, s) for s in square_terms(n)]


def _mod8_candidates(a: int, b: int, c: int):
    """(width, tiebreak, pair) for the J-split with and without a repair pair."""
    yield _msc(b) + _msc(a - b) + _msc(c - b), (0, 0), None
    triplet = Triplet.of(a, b, c)
    for rank, (x, y) in enumerate(EXTENDED_POOL):
        m = b - x * y
        ra = a - x * x - m
        rc = c - y * y - m
        if m < 0 or ra < 0 or rc < 0:
            continue
        # among equal widths prefer pairs that repair the residues outright
        repaired = good_count(((triplet.alpha - x * x) % 8, (triplet.beta - x * y) % 8, (triplet.gamma - y * y) % 8)) == 3
        yield 1 + _msc(m) + _msc(ra) + _msc(rc), (1, 0 if repaired else 1, rank), RepairPair(x, y)


def mod8_split(a: int, b: int, c: int, pair: Sequence[int] | None = None) -> Decomposition:
    """Certificate from m J + diag(a - x^2 - m, c - y^2 - m) plus column (x, y).

    Here m = b - xy; without a pair this is b J + diag(a - b, c - b).
    """
    if pair is None:
        if min(a, c) < b:
            raise ValueError("split needs b <= min(a, c)")
        cols = _j_cols(b) + _x_cols(a - b) + _y_cols(c - b)
        return Decomposition(tuple(cols), Route.MOD8)
    x, y = pair
    m = b - x * y
    if m < 0 or a - x * x - m < 0 or c - y * y - m < 0:
        raise ValueError(f"pair {tuple(pair)} is not feasible for {(a, b, c)}")
    cols = [(x, y)] + _j_cols(m) + _x_cols(a - x * x - m) + _y_cols(c - y * y - m)
    return Decomposition(tuple(cols), Route.MOD8, RepairPair(x, y))


def _decompose_reduced(a: int, b: int, c: int) -> Decomposition:
    # normal form: c >= a >= b >= 0
    if a == b == c == 0:
        return Decomposition((), Route.ZERO)

    best = None  # (width, route rank, builder)

    def offer(width, route, build):
        nonlocal best
        key = (width, _ROUTE_RANK[route])
        if best is None or key < best[:2]:
            best = (width, _ROUTE_RANK[route], build)

    if b == 0:
        offer(_msc(a) + _msc(c), Route.BZERO,
              lambda: Decomposition(tuple(_x_cols(a) + _y_cols(c)), Route.BZERO))
    if a == b:
        offer(_msc(b) + _msc(c - b), Route.AEQB,
              lambda: Decomposition(tuple(_j_cols(b) + _y_cols(c - b)), Route.AEQB))
    if b > 0 and b * b <= c:
        offer(1 + _msc(a - 1) + _msc(c - b * b), Route.BSQLEC,
              lambda: Decomposition(tuple([(1, b)] + _x_cols(a - 1) + _y_cols(c - b * b)), Route.BSQLEC))
    if 0 < b < a <= SMALL_DIAGONAL:
        w = _witnesses().get((a, b))
        if w is not None:
            rest = c - sum(v * v for v in w.v)
            offer(len(w.u) + _msc(rest), Route.WITNESS,
                  lambda: Decomposition(tuple(list(zip(w.u, w.v)) + _y_cols(rest)), Route.WITNESS))
    if b > 0:
        width, _, pair = min(_mod8_candidates(a, b, c), key=lambda t: t[:2])

        offer(width, Route.MOD8, lambda: mod8_split(a, b, c, pair))

    return best[2]()


def decompose_reduced(A: SymMat2 | Sequence[int]) -> tuple[Decomposition, SymMat2]:
    """Like ``decompose`` but also returns the reduced normal-form matrix."""
    A = as_matrix(A)
    R, trace = reduce(A)
    D = lift(_decompose_reduced(R.a, R.b, R.c), trace)
    if not verify(A, D):
        raise WidthOverflow(f"internal error: certificate for {A.as_tuple()} does not verify: {D}")
    if D.width > MAX_WIDTH:
        raise WidthOverflow(f"{A.as_tuple()} needs width {D.width} > {MAX_WIDTH}: {D}")
    return D, R


def decompose(A: SymMat2 | Sequence[int]) -> Decomposition:
    """A verified certificate B with B B^T = A and at most 10 columns.

    All applicable routes are evaluated on the reduced matrix and the
    narrowest one wins, ties going to the earlier route in ``Route``.

    Raises:
        NotDNN: if A is not doubly nonnegative.
        WidthOverflow: if the width bound is violated (never expected).
    """
    return decompose_reduced(A)[0]


class Table3Row(NamedTuple):
    pair: RepairPair
    result: Triplet
    paper_pool_sufficed: bool


def table3_regenerate() -> dict[Triplet, Table3Row]:
    """Repair assignment for every bad residue triplet, in both orientations.

    Raises:
        RepairGap: if some bad triplet cannot be repaired by any pair.
    """
    rows = {}
    for t in all_triplets():
        if classify_triplet(t).kind is not Kind.BAD:
            continue
        hit = find_repair(t, EXTENDED_POOL)
        if hit is None:
            raise RepairGap(f"no repair pair makes {tuple(t)} very good")
        pair, result = hit
        rows[t] = Table3Row(pair, result, find_repair(t, PAPER_POOL) is not None)
    return rows


def table3_summary(rows: Mapping[Triplet, Table3Row]) -> dict:
    """Counts for the regenerated repair table, including the alpha/gamma mirror."""
    mirror_closed = all(Triplet(t.gamma, t.beta, t.alpha) in rows for t in rows)
    return {
        "bad_triplets": len(rows),
        "gamma_le_alpha": sum(t.gamma <= t.alpha for t in rows),
        "mirror_closed": mirror_closed,
        "paper_pool_sufficed": sum(r.paper_pool_sufficed for r in rows.values()),
        "paper_pool_failed": sorted(tuple(t) for t, r in rows.items() if not r.paper_pool_sufficed),
        "pairs_used": sorted({tuple(r.pair) for r in rows.values()}),
    }
