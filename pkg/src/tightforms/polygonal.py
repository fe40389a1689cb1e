"""Generalized polygonal numbers, coefficient vectors, representation sets.

The objects here are the raw material for everything else in the package:
values of the generalized m-gonal polynomial, sorted coefficient multisets
(a1, ..., ak), and the exact set of integers in [0, bound] representable as
a1*p1 + ... + ak*pk with each pi a generalized m-gonal number.

Representation sets are dense bitmasks (bit i set iff i is representable),
so extending a form by one more coefficient is a union of shifted copies of
the parent mask.  All terms are nonnegative, so truncating to [0, bound] at
every step loses nothing below the bound.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import gmpy2
from gmpy2 import mpz, xmpz

__all__ = [
    "polygonal_number",
    "polygonal_sequence",
    "PolygonalSequence",
    "canonical_vector",
    "insert_coeff",
    "is_subvector",
    "drop_one_subvectors",
    "ReprSet",
    "repr_base",
    "repr_extend",
    "repr_set",
    "repr_oracle",
]

ORACLE_BOUND_LIMIT = 10_000
ORACLE_LENGTH_LIMIT = 4


def polygonal_number(m: int, u: int) -> int:
    """Value of the generalized m-gonal polynomial at index u.

    Computed as ((m-2)*u^2 - (m-4)*u) / 2; the numerator is always even, so
    the division is exact.  Negative u is allowed and yields the generalized
    values (for m = 3 and m = 4 these coincide with the nonnegative branch).
    """
    if m < 3:
        raise ValueError(f"m must be >= 3, got {m}")
    return ((m - 2) * u * u - (m - 4) * u) // 2


@dataclass(frozen=True)
class PolygonalSequence:
    """Ascending generalized m-gonal values in [0, bound], deduplicated."""

    m: int
    bound: int
    values: tuple[int, ...]

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)


def polygonal_sequence(m: int, bound: int) -> PolygonalSequence:
    """All generalized m-gonal values in [0, bound], ascending.

    Walks u = 1, 2, ... taking both signs, and stops once both branches
    exceed the bound; both branches are nondecreasing in |u| for m >= 3,
    so nothing past the stopping point can fall back under it.
    """
    if m < 3:
        raise ValueError(f"m must be >= 3, got {m}")
    if bound < 0:
        raise ValueError(f"bound must be >= 0, got {bound}")
    seen = {0}
    u = 1
    while True:
        pos = polygonal_number(m, u)
        neg = polygonal_number(m, -u)
        if pos > bound and neg > bound:
            break
        if pos <= bound:
            seen.add(pos)
        if neg <= bound:
            seen.add(neg)
        u += 1
    return PolygonalSequence(m, bound, tuple(sorted(seen)))


def canonical_vector(coeffs) -> tuple[int, ...]:
    """Sorted tuple form of a coefficient multiset; entries must be positive."""
    vec = tuple(sorted(coeffs))
    for c in vec:
        if not isinstance(c, int) or isinstance(c, bool) or c < 1:
            raise ValueError(f"coefficients must be positive integers, got {c!r}")
    return vec


def insert_coeff(vec: tuple[int, ...], g: int) -> tuple[int, ...]:
    """New sorted vector with g inserted (the multiset join used by escalation)."""
    if g < 1:
        raise ValueError(f"coefficient must be positive, got {g}")
    i = bisect_right(vec, g)
    return vec[:i] + (g,) + vec[i:]


def is_subvector(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    """Multiset inclusion of sorted vectors: every entry of a occurs in b
    with at least the same multiplicity."""
    i = 0
    for x in b:
        if i < len(a) and a[i] == x:
            i += 1
        elif i < len(a) and a[i] < x:
            return False
    return i == len(a)


def drop_one_subvectors(vec: tuple[int, ...]):
    """Distinct subvectors obtained by deleting one entry, in sorted order."""
    for i, c in enumerate(vec):
        if i > 0 and vec[i - 1] == c:
            continue
        yield vec[:i] + vec[i + 1 :]


class ReprSet:
    """Exact membership set of representable values in [0, bound].

    ``bits`` is an mpz with bit i set iff i is representable.  Instances are
    value objects: every operation builds a fresh set and nothing mutates an
    existing one, so they can be shared freely (including across processes;
    they pickle like any small object).
    """

    __slots__ = ("bound", "bits")

    def __init__(self, bound: int, bits) -> None:
        if bound < 0:
            raise ValueError(f"bound must be >= 0, got {bound}")
        self.bound = bound
        self.bits = mpz(bits)

    @classmethod
    def from_values(cls, bound: int, values) -> "ReprSet":
        acc = xmpz(0)
        for v in values:
            if 0 <= v <= bound:
                acc[v] = 1
        return cls(bound, mpz(acc))

    def __contains__(self, x: int) -> bool:
        return 0 <= x <= self.bound and bool(self.bits.bit_test(x))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReprSet):
            return NotImplemented
        return self.bound == other.bound and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.bound, self.bits))

    def __repr__(self) -> str:
        return f"ReprSet(bound={self.bound}, count={self.count()})"

    def count(self) -> int:
        return int(gmpy2.popcount(self.bits))

    def first_missing(self, start: int = 0) -> int | None:
        """Smallest value >= start not in the set, or None if [start, bound]
        is fully covered."""
        i = int(gmpy2.bit_scan0(self.bits, max(start, 0)))
        return i if i <= self.bound else None

    def first_present(self, start: int = 0) -> int | None:
        """Smallest member >= start, or None."""
        i = gmpy2.bit_scan1(self.bits, max(start, 0))
        if i is None or i > self.bound:
            return None
        return int(i)

    def contains_all(self, lo: int, hi: int) -> bool:
        """True iff every integer in [lo, hi] is a member."""
        if lo > hi:
            return True
        miss = self.first_missing(lo)
        return miss is None or miss > hi

    def to_list(self) -> list[int]:
        """Members in ascending order.  Meant for small sets and tests."""
        out = []
        i = gmpy2.bit_scan1(self.bits, 0)
        while i is not None and i <= self.bound:
            out.append(int(i))
            i = gmpy2.bit_scan1(self.bits, int(i) + 1)
        return out


def repr_base(bound: int) -> ReprSet:
    """Representation set of the empty form: {0}."""
    return ReprSet(bound, 1)


def repr_extend(parent: ReprSet, m: int, g: int, bound: int) -> ReprSet:
    """Representation set of the form extended by one coefficient g.

    Union of parent copies shifted by g*p over the m-gonal values p with
    g*p <= bound.  If g exceeds the bound the form gains nothing and the
    result equals the parent set.
    """
    if g < 1:
        raise ValueError(f"coefficient must be positive, got {g}")
    if parent.bound != bound:
        raise ValueError(f"parent bound {parent.bound} != requested bound {bound}")
    base = parent.bits
    acc = xmpz(base)
    for p in polygonal_sequence(m, bound // g).values[1:]:
        acc |= base << (g * p)
    acc &= (xmpz(1) << (bound + 1)) - 1
    return ReprSet(bound, mpz(acc))


def repr_set(m: int, coeffs, bound: int) -> ReprSet:
    """Representation set of the full form given by coeffs, built by folding
    repr_extend over the coefficients.  Order cannot matter: each step is a
    union of shifts, and the fold computes the same k-fold sumset."""
    vec = canonical_vector(coeffs)
    if not vec:
        raise ValueError("coefficient vector must be nonempty")
    acc = repr_base(bound)
    for g in vec:
        acc = repr_extend(acc, m, g, bound)
    return acc


def repr_oracle(m: int, coeffs, bound: int) -> ReprSet:
    """Reference implementation by direct nested enumeration.

    Deliberately independent of the bitmask kernel: walks tuples of m-gonal
    values outright and collects the sums.  Kept slow and obvious; only for
    tests, hence the hard limits on bound and length.
    """
    if bound > ORACLE_BOUND_LIMIT:
        raise ValueError(f"oracle bound limit is {ORACLE_BOUND_LIMIT}, got {bound}")
    vec = canonical_vector(coeffs)
    if not vec:
        raise ValueError("coefficient vector must be nonempty")
    if len(vec) > ORACLE_LENGTH_LIMIT:
        raise ValueError(f"oracle length limit is {ORACLE_LENGTH_LIMIT}, got {len(vec)}")
    values = polygonal_sequence(m, bound).values
    hits = set()

    def walk(i: int, total: int) -> None:
        if i == len(vec):
            hits.add(total)
            return
        c = vec[i]
        for p in values:
            t = total + c * p
            if t > bound:
                break
            walk(i + 1, t)

    walk(0, 0)
    return ReprSet.from_values(bound, hits)
