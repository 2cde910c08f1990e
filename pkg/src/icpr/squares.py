"""Sums of squares, residue goodness mod 8 and rank-one residue repair.

Everything here is a pure function of its arguments.  The two counting
helpers are memoized because the decomposition scans hit the same small
numbers millions of times; the memo tables hold only derived values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import Iterator, NamedTuple, Sequence

from .errors import NotRepresentable

GOOD_RESIDUES = frozenset({1, 2, 3, 5, 6})


@dataclass(frozen=True)
class SquaresRep:
    target: int
    terms: tuple[int, ...]

    def __post_init__(self):
        if sum(t * t for t in self.terms) != self.target:
            raise ValueError(f"terms {self.terms} do not square-sum to {self.target}")
        if len(self.terms) > 4:
            raise ValueError("at most four terms")
        if any(t <= 0 for t in self.terms) or list(self.terms) != sorted(self.terms, reverse=True):
            raise ValueError("terms must be positive and non-increasing")


class Triplet(NamedTuple):
    alpha: int
    beta: int
    gamma: int

    @classmethod
    def of(cls, a: int, b: int, c: int) -> "Triplet":
        """Residues of the three matrix entries."""
        return cls(a % 8, b % 8, c % 8)


class Kind(enum.Enum):
    BAD = "Bad"
    GOOD = "Good"
    VERY_GOOD = "VeryGood"


@dataclass(frozen=True)
class TripletClass:
    kind: Kind
    good_count: int


class RepairPair(NamedTuple):
    x: int
    y: int


def _check_nonneg(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"expected a nonnegative integer, got {n!r}")


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_legendre_exception(n: int) -> bool:
    """True iff n has the form 4^k (8m + 7), i.e. needs four squares."""
    if n <= 0:
        return False
    while n % 4 == 0:
        n //= 4
    return n % 8 == 7


def _is_probable_prime(n: int) -> bool:
    # deterministic for n < 3.3e24 with these bases
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for base in small:
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_below(n: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * n
    sieve[:2] = b"\x00\x00"
    for p in range(2, isqrt(n - 1) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytes(len(range(p * p, n, p)))
    return tuple(i for i in range(3, n) if sieve[i])


# odd primes up to sqrt(2**31), enough to factor every admissible entry
_ODD_PRIMES = _primes_below(46342)


def _is_sum_of_two_squares(n: int) -> bool:
    """Fermat's criterion: every prime 3 mod 4 divides n to an even power."""
    while n % 2 == 0:
        n //= 2
    check_prime = n > 10**6
    for p in _ODD_PRIMES:
        if p * p > n:
            break
        if check_prime:
            if _is_probable_prime(n):
                break
            check_prime = False
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if p % 4 == 3 and e % 2:
                return False
            check_prime = n > 10**6
    else:
        if n > 46341 ** 2:
            return _two_squares_by_search(n)
    # what is left is 1 or a prime
    return n % 4 != 3


def _two_squares_by_search(n: int) -> bool:
    # fallback beyond the prime table; not reached for entries below 2**31
    x = 0
    while 2 * x * x <= n:
        if is_square(n - x * x):
            return True
        x += 1
    return False


@lru_cache(maxsize=1 << 18)
def _msc(n: int) -> int:
    if n == 0:
        return 0
    if is_square(n):
        return 1
    if _is_sum_of_two_squares(n):
        return 2
    if is_legendre_exception(n):
        return 4
    return 3


def min_squares_count(n: int) -> int:
    """Minimum number of positive squares summing to ``n`` (0 for n = 0)."""
    _check_nonneg(n)
    return _msc(n)


@lru_cache(maxsize=1 << 16)
def _canonical_terms(n: int, k: int) -> tuple[int, ...]:
    # lexicographically greatest k-term representation, k = min count of n
    if k == 0:
        return ()
    t = isqrt(n)
    while t > 0:
        rest = n - t * t
        if _msc(rest) <= k - 1:
            return (t,) + _canonical_terms(rest, _msc(rest) if rest else 0)
        t -= 1
    raise AssertionError("unreachable: count bounds guarantee a first term")


def squares_rep(n: int, max_terms: int = 4) -> SquaresRep:
    """Canonical representation of ``n`` with the fewest possible squares.

    Among minimal representations the lexicographically greatest term list is
    returned, so the output is deterministic and largest-first.

    Raises:
        NotRepresentable: if ``n`` needs more than ``max_terms`` squares.
    """
    _check_nonneg(n)
    if not 0 <= max_terms <= 4:
        raise ValueError("max_terms must lie in 0..4")
    k = _msc(n)
    if k > max_terms:
        raise NotRepresentable(f"{n} needs {k} squares, only {max_terms} allowed")
    return SquaresRep(n, _canonical_terms(n, k))


def square_terms(n: int) -> tuple[int, ...]:
    """Terms of the canonical minimal representation; no validation wrapper."""
    return _canonical_terms(n, _msc(n))


def iter_representations(n: int, max_terms: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """All non-increasing tuples of positive ints with square sum ``n``.

    Yields at most ``max_terms`` terms per tuple, in lexicographically
    decreasing order.  ``largest`` caps the first term.
    """
    if n == 0:
        yield ()
        return
    if max_terms == 0:
        return
    top = isqrt(n) if largest is None else min(largest, isqrt(n))
    for t in range(top, 0, -1):
        # the remaining max_terms terms are all <= t
        if t * t * max_terms < n:
            break
        for rest in iter_representations(n - t * t, max_terms - 1, t):
            yield (t,) + rest


def is_good(n: int) -> bool:
    _check_nonneg(n)
    return n % 8 in GOOD_RESIDUES


def _check_triplet(t: Sequence[int]) -> Triplet:
    t = Triplet(*t)
    if any(not 0 <= r <= 7 for r in t):
        raise ValueError(f"residues must be in 0..7, got {tuple(t)}")
    return t


def triplet_components(t: Sequence[int]) -> tuple[int, int, int]:
    """The three residues whose goodness decides the class of a triplet."""
    alpha, beta, gamma = t
    return (alpha - beta) % 8, beta, (gamma - beta) % 8


def good_count(t: Sequence[int]) -> int:
    return sum(r in GOOD_RESIDUES for r in triplet_components(t))


def classify_triplet(t: Sequence[int]) -> TripletClass:
    t = _check_triplet(t)
    g = good_count(t)
    if g <= 1:
        kind = Kind.BAD
    elif g == 2:
        kind = Kind.GOOD
    else:
        kind = Kind.VERY_GOOD
    return TripletClass(kind, g)


def apply_repair(t: Sequence[int], p: Sequence[int]) -> Triplet:
    """Residues left after subtracting the rank-one matrix of column ``p``."""
    alpha, beta, gamma = _check_triplet(t)
    x, y = p
    return Triplet((alpha - x * x) % 8, (beta - x * y) % 8, (gamma - y * y) % 8)


def _pair_pool(extra: bool) -> tuple[RepairPair, ...]:
    head = [RepairPair(*p) for p in [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (2, 1), (2, 3)]]
    if not extra:
        return tuple(head)
    rest = [RepairPair(x, y) for x in range(1, 8) for y in range(1, 8) if x * y <= 7]
    return tuple(head + [p for p in rest if p not in head])


PAPER_POOL = _pair_pool(extra=False)
EXTENDED_POOL = _pair_pool(extra=True)


def find_repair(t: Sequence[int], pool: Sequence[Sequence[int]] = EXTENDED_POOL) -> tuple[RepairPair, Triplet] | None:
    """First pair in ``pool`` that turns ``t`` into a very good triplet."""
    for p in pool:
        result = apply_repair(t, p)
        if good_count(result) == 3:
            return RepairPair(*p), result
    return None


def all_triplets() -> Iterator[Triplet]:
    for alpha in range(8):
        for beta in range(8):
            for gamma in range(8):
                yield Triplet(alpha, beta, gamma)
