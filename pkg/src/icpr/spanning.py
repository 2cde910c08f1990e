"""Spanning vectors and the bounded-knapsack witnesses behind them.

A vector u of positive integers is spanning when every 0 <= b <= u.u can be
written as v.u with 0 <= v <= u componentwise.  Reachable sums are tracked
as Python ints used as bitsets (bit s set <=> sum s reachable), which keeps
the 3.26M-sum case well under a second.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BadRange, OutOfRange
from .squares import iter_representations

MAX_LEN = 5
SYLVESTER_VECTOR = (1806, 42, 6, 2, 1)


@dataclass(frozen=True)
class SpanWitness:
    u: tuple[int, ...]
    b: int
    v: tuple[int, ...]

    def __post_init__(self):
        if len(self.u) != len(self.v):
            raise ValueError("u and v differ in length")
        if any(not 0 <= vi <= ui for ui, vi in zip(self.u, self.v)):
            raise ValueError("v must satisfy 0 <= v <= u")
        if sum(ui * vi for ui, vi in zip(self.u, self.v)) != self.b:
            raise ValueError("v.u does not equal b")

    @property
    def norm_sq(self) -> int:
        return sum(x * x for x in self.u)


def _vector(u: Iterable[int]) -> tuple[int, ...]:
    u = tuple(u)
    if not u or any(not isinstance(x, int) or x <= 0 for x in u):
        raise ValueError(f"expected a non-empty vector of positive integers, got {u!r}")
    return u


def norm_sq(u: Sequence[int]) -> int:
    return sum(x * x for x in u)


def _add_item(reach: int, weight: int, mult: int) -> int:
    """Reachable sums after allowing 0..mult copies of ``weight``."""
    chunk = 1
    while mult > 0:
        take = min(chunk, mult)
        reach |= reach << (take * weight)
        mult -= take
        chunk <<= 1
    return reach


def reachable_sums(u: Sequence[int]) -> int:
    """Bitset of every value v.u with 0 <= v <= u."""
    reach = 1
    for x in u:
        reach = _add_item(reach, x, x)
    return reach


def is_spanning(u: Iterable[int]) -> bool:
    u = _vector(u)
    n = norm_sq(u)
    return reachable_sums(u) == (1 << (n + 1)) - 1


def is_step_vector(u: Iterable[int]) -> bool:
    s = sorted(_vector(u))
    return s[0] == 1 and all(hi - lo in (0, 1) for lo, hi in zip(s, s[1:]))


def span_witness(u: Iterable[int], b: int) -> tuple[int, ...] | None:
    """A v with 0 <= v <= u and v.u = b, or None when b is unreachable.

    Entries are filled greedily from the largest value down (rightmost first
    among equal values), each time taking the largest count that keeps the
    remainder reachable by the entries not yet filled.

    Raises:
        OutOfRange: if b exceeds u.u.
    """
    u = _vector(u)
    if b < 0 or b > norm_sq(u):
        raise OutOfRange(f"b={b} outside 0..{norm_sq(u)}")
    order = sorted(range(len(u)), key=lambda i: (-u[i], -i))
    # suffix[j]: sums reachable using the positions order[j:]
    suffix = [1] * (len(order) + 1)
    for j in range(len(order) - 1, -1, -1):
        x = u[order[j]]
        suffix[j] = _add_item(suffix[j + 1], x, x)
    if not (suffix[0] >> b) & 1:
        return None
    v = [0] * len(u)
    rem = b
    for j, i in enumerate(order):
        x = u[i]
        rest = suffix[j + 1]
        for k in range(min(x, rem // x), -1, -1):
            if (rest >> (rem - k * x)) & 1:
                v[i] = k
                rem -= k * x
                break
    assert rem == 0
    return tuple(v)


def find_spanning_vector(a: int, max_len: int = MAX_LEN) -> tuple[int, ...] | None:
    """First spanning vector among the square representations of ``a``."""
    if a < 1:
        raise ValueError("a must be positive")
    if not 1 <= max_len <= MAX_LEN:
        raise ValueError(f"max_len must lie in 1..{MAX_LEN}")
    for u in iter_representations(a, max_len):
        if is_spanning(u):
            return u
    return None


def conjecture3_witness(a: int, b: int, max_len: int = MAX_LEN) -> SpanWitness | None:
    """Find u with u.u = a, len(u) <= 5, and v <= u with v.u = b.

    Every representation of ``a`` is tried in order of decreasing largest
    term, so numbers without a single spanning vector (33 is the smallest)
    are still covered when different b need different u.

    Raises:
        BadRange: unless 0 <= b < a.
    """
    if not 0 <= b < a:
        raise BadRange(f"need 0 <= b < a, got a={a}, b={b}")
    if not 1 <= max_len <= MAX_LEN:
        raise ValueError(f"max_len must lie in 1..{MAX_LEN}")
    for u in iter_representations(a, max_len):
        v = span_witness(u, b)
        if v is not None:
            return SpanWitness(u, b, v)
    return None


def witness_table(limit: int = 64) -> dict[tuple[int, int], SpanWitness]:
    """Witnesses for every 0 <= b < a <= limit; missing pairs are omitted."""
    table = {}
    for a in range(1, limit + 1):
        for b in range(a):
            w = conjecture3_witness(a, b)
            if w is not None:
                table[a, b] = w
    return table


def verify_sylvester_bound(samples: Sequence[int] = (1, 1000000, 3263440, 3263441)) -> dict:
    """Check that 1806,42,6,2,1 is spanning and report sample witnesses.

    Only the positive half is checked; maximality of 3263441 is not.
    """
    start = time.perf_counter()
    u = SYLVESTER_VECTOR
    spanning = is_spanning(u)
    witnesses = {b: span_witness(u, b) for b in samples}
    return {
        "vector": list(u),
        "norm_sq": norm_sq(u),
        "spanning": spanning,
        "witnesses": {str(b): (list(v) if v is not None else None) for b, v in witnesses.items()},
        "seconds": time.perf_counter() - start,
    }
