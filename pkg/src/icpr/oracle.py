"""Exact integer CP rank by exhaustive search.

This is the ground truth the constructive pipeline is checked against, so
it deliberately shares no code with it: sums of squares are counted here by
plain enumeration, not by the Legendre/Fermat criteria used in ``squares``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Sequence

from .decomp import SymMat2, as_matrix, check_dnn
from .errors import BudgetExceeded, NotDNN

DEFAULT_NODE_CAP = 10**8


@dataclass(frozen=True)
class SearchBudget:
    width_cap: int = 12
    node_cap: int = DEFAULT_NODE_CAP

    def __post_init__(self):
        if self.width_cap < 1 or self.node_cap < 1:
            raise ValueError("width_cap and node_cap must be positive")


def _brute_min_squares(n: int) -> int:
    if n == 0:
        return 0
    r = isqrt(n)
    squares = {i * i for i in range(1, r + 1)}
    if n in squares:
        return 1
    if any(n - s in squares for s in squares):
        return 2
    for i in range(1, r + 1):
        rest = n - i * i
        if any(rest - s in squares for s in squares if s < rest):
            return 3
    return 4


class _Search2x2:
    """Iterative deepening over multisets of columns with both entries positive.

    Columns (x, 0) and (0, y) are not branched on: once the off-diagonal
    entry is used up the rest of the diagonal is covered optimally by the
    fewest squares, which is exact for those columns on their own.
    """

    def __init__(self, budget: SearchBudget, prune_dnn: bool):
        self.budget = budget
        self.prune_dnn = prune_dnn
        self.nodes = 0
        self._msq: dict[int, int] = {}

    def msq(self, n: int) -> int:
        v = self._msq.get(n)
        if v is None:
            v = self._msq[n] = _brute_min_squares(n)
        return v

    def run(self, a: int, b: int, c: int) -> list[tuple[int, int]]:
        for k in range(self.budget.width_cap + 1):
            path: list[tuple[int, int]] = []
            if self._dfs(a, b, c, k, None, path):
                return path
        raise BudgetExceeded("width", f"no decomposition of {(a, b, c)} within width {self.budget.width_cap}")

    def _dfs(self, a, b, c, k, prev, path) -> bool:
        self.nodes += 1
        if self.nodes > self.budget.node_cap:
            raise BudgetExceeded("nodes", f"node cap {self.budget.node_cap} exhausted")
        if max(self.msq(a), self.msq(c)) > k:
            return False
        if b == 0:
            if self.msq(a) + self.msq(c) > k:
                return False
            path.extend((s, 0) for s in _terms(a, self))
            path.extend((0, t) for t in _terms(c, self))
            return True
        if k == 0:
            return False
        if self.prune_dnn and b * b > a * c:
            return False
        x_top = isqrt(a) if prev is None else min(isqrt(a), prev[0])
        for x in range(x_top, 0, -1):
            y_top = min(isqrt(c), b // x)
            if prev is not None and x == prev[0]:
                y_top = min(y_top, prev[1])
            for y in range(y_top, 0, -1):
                path.append((x, y))
                if self._dfs(a - x * x, b - x * y, c - y * y, k - 1, (x, y), path):
                    return True
                path.pop()
        return False


def _terms(n: int, search: _Search2x2) -> list[int]:
    out = []
    while n:
        k = search.msq(n)
        s = isqrt(n)
        while search.msq(n - s * s) != k - 1:
            s -= 1
        out.append(s)
        n -= s * s
    return out


def min_width_certificate(A: SymMat2 | Sequence[int], budget: SearchBudget = SearchBudget(),
                          prune_dnn: bool = True) -> tuple[tuple[int, int], ...]:
    """Columns of a narrowest nonnegative integer B with B B^T = A."""
    A = as_matrix(A)
    if not check_dnn(A):
        raise NotDNN(f"{A.as_tuple()} is not doubly nonnegative")
    cols = _Search2x2(budget, prune_dnn).run(A.a, A.b, A.c)
    return tuple(sorted(cols, reverse=True))


def exact_icpr_2x2(A: SymMat2 | Sequence[int], budget: SearchBudget = SearchBudget(),
                   prune_dnn: bool = True) -> int:
    """Exact integer CP rank of a 2x2 DNN matrix.

    Raises:
        NotDNN: if A is not doubly nonnegative.
        BudgetExceeded: reason "width" if the rank exceeds ``budget.width_cap``,
            reason "nodes" if the node cap ran out first.
    """
    return len(min_width_certificate(A, budget, prune_dnn))


def _as_square(M: Sequence[Sequence[int]]) -> list[list[int]]:
    rows = [list(r) for r in M]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(n):
            v = rows[i][j]
            if not isinstance(v, int) or v < 0:
                raise ValueError("entries must be nonnegative integers")
            if v != rows[j][i]:
                raise ValueError("matrix must be symmetric")
    return rows


def find_decomposition_nxn(M: Sequence[Sequence[int]], budget: SearchBudget | None = None,
                           prune_dnn: bool = True) -> list[tuple[int, ...]] | None:
    """Columns g_1..g_k of a nonnegative integer B = [g_1 ... g_k] with B B^T = M.

    Columns are explored in non-increasing lexicographic order.  The default
    width cap is trace(M), which is complete: each nonzero integer column
    adds at least one to the trace.  Returns None when no decomposition
    exists within the cap.

    Raises:
        BudgetExceeded: reason "nodes" when the node cap is exhausted.
    """
    R = _as_square(M)
    n = len(R)
    if budget is None:
        budget = SearchBudget(width_cap=max(1, sum(R[i][i] for i in range(n))))
    nodes = 0

    def minors_ok() -> bool:
        return all(R[i][j] * R[i][j] <= R[i][i] * R[j][j] for i in range(n) for j in range(i + 1, n))

    def columns(prev):
        g = [0] * n

        def rec(i, tight):
            if i == n:
                if any(g):
                    yield tuple(g)
                return
            top = isqrt(R[i][i])
            for j in range(i):
                if g[j]:
                    top = min(top, R[i][j] // g[j])
            if tight:
                top = min(top, prev[i])
            for v in range(top, -1, -1):
                g[i] = v
                yield from rec(i + 1, tight and v == prev[i])
            g[i] = 0

        yield from rec(0, prev is not None)

    def dfs(k, prev, path):
        nonlocal nodes
        nodes += 1
        if nodes > budget.node_cap:
            raise BudgetExceeded("nodes", f"node cap {budget.node_cap} exhausted")
        if all(R[i][j] == 0 for i in range(n) for j in range(n)):
            return True
        if k == 0 or (prune_dnn and not minors_ok()):
            return False
        for g in list(columns(prev)):
            for i in range(n):
                for j in range(n):
                    R[i][j] -= g[i] * g[j]
            path.append(g)
            if dfs(k - 1, g, path):
                return True
            path.pop()
            for i in range(n):
                for j in range(n):
                    R[i][j] += g[i] * g[j]
        return False

    path: list[tuple[int, ...]] = []
    return path if dfs(budget.width_cap, None, path) else None


def exists_decomposition_nxn(M: Sequence[Sequence[int]], budget: SearchBudget | None = None,
                             prune_dnn: bool = True) -> bool:
    return find_decomposition_nxn(M, budget, prune_dnn) is not None


def icpr_subadditivity_check(A1: SymMat2 | Sequence[int], A2: SymMat2 | Sequence[int],
                             budget: SearchBudget = SearchBudget()) -> dict:
    A1, A2 = as_matrix(A1), as_matrix(A2)
    r1 = exact_icpr_2x2(A1, budget)
    r2 = exact_icpr_2x2(A2, budget)
    r12 = exact_icpr_2x2(A1 + A2, budget)
    return {
        "A1": A1.as_tuple(),
        "A2": A2.as_tuple(),
        "icpr_A1": r1,
        "icpr_A2": r2,
        "icpr_sum": r12,
        "holds": r12 <= r1 + r2,
    }
