"""Edge-length vectors and short/long subset combinatorics.

Indices are 1-based in every public surface; internally a subset is an
``n``-bit mask where element ``i`` lives in bit ``i - 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import (
    DimensionMismatch,
    DegreeBoundExceeded,
    EmptySubset,
    FullSubset,
    NonGenericAlpha,
    NonPositiveLength,
    ParseError,
    TooFewEdges,
)

MAX_EDGES = 24


def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"cannot parse {text!r} as a rational")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse {text!r} as a rational") from exc


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Subset:
    mask: int
    n: int

    def __post_init__(self):
        if self.n < 0 or self.mask < 0 or self.mask >> self.n:
            raise DimensionMismatch(f"mask {self.mask:#x} does not fit in {self.n} bits")

    @classmethod
    def of(cls, n: int, elements: Iterable[int]) -> "Subset":
        mask = 0
        for i in elements:
            if not 1 <= i <= n:
                raise DimensionMismatch(f"index {i} outside 1..{n}")
            mask |= 1 << (i - 1)
        return cls(mask, n)

    @classmethod
    def full(cls, n: int) -> "Subset":
        return cls((1 << n) - 1, n)

    def elements(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.n) if self.mask >> i & 1)

    def __iter__(self):
        return iter(self.elements())

    def __len__(self):
        return bin(self.mask).count("1")

    def __contains__(self, i: int) -> bool:
        return 1 <= i <= self.n and bool(self.mask >> (i - 1) & 1)

    def _check(self, other: "Subset"):
        if other.n != self.n:
            raise DimensionMismatch(f"subsets over {self.n} and {other.n} elements")

    def complement(self) -> "Subset":
        return Subset(((1 << self.n) - 1) ^ self.mask, self.n)

    def __or__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.mask | other.mask, self.n)

    def __and__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.mask & other.mask, self.n)

    def __sub__(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.mask & ~other.mask, self.n)

    def issubset(self, other: "Subset") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def add(self, i: int) -> "Subset":
        return self | Subset.of(self.n, [i])

    def remove(self, i: int) -> "Subset":
        return self - Subset.of(self.n, [i])

    def sort_key(self):
        return (len(self), self.elements())

    def label(self, sep: str = ",") -> str:
        return sep.join(map(str, self.elements()))

    def to_json(self) -> list[int]:
        return list(self.elements())

    def __repr__(self):
        return "{" + self.label() + "}"


@dataclass(frozen=True)
class Alpha:
    lengths: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.lengths)

    @property
    def total(self) -> Fraction:
        return sum(self.lengths, Fraction(0))

    def __getitem__(self, i: int) -> Fraction:
        """1-based access to an edge length."""
        return self.lengths[i - 1]

    def weight(self, s: Subset) -> Fraction:
        if s.n != self.n:
            raise DimensionMismatch(f"subset over {s.n} elements, alpha has {self.n}")
        return sum((self.lengths[i - 1] for i in s.elements()), Fraction(0))

    def permuted(self, perm: dict[int, int]) -> "Alpha":
        """Relabel edges: old index ``i`` becomes ``perm[i]``."""
        new = [Fraction(0)] * self.n
        for i in range(1, self.n + 1):
            new[perm.get(i, i) - 1] = self[i]
        return Alpha(tuple(new))

    def to_json(self) -> list[str]:
        return [format_rational(x) for x in self.lengths]

    def __str__(self):
        return "(" + ",".join(self.to_json()) + ")"


def validate_alpha(lengths) -> Alpha:
    """Parse and validate an edge-length vector.

    Genericity is certified by scanning every complementary pair ``(S, S^c)``
    (the pair is represented by the member containing edge 1).  A balanced
    split is reported through the first witness in cardinality-then-lex order.
    """
    values = tuple(parse_rational(x) for x in lengths)
    if len(values) < 3:
        raise TooFewEdges(f"need at least 3 edges, got {len(values)}")
    if len(values) > MAX_EDGES:
        raise DegreeBoundExceeded(f"genericity scan limited to n <= {MAX_EDGES}")
    for i, v in enumerate(values, 1):
        if v <= 0:
            raise NonPositiveLength(f"alpha_{i} = {format_rational(v)} is not positive")
    a = Alpha(values)
    half = a.total / 2
    # reachable sums of subsets containing edge 1
    reachable = {values[0]}
    for v in values[1:]:
        reachable |= {s + v for s in reachable}
    if half in reachable:
        raise NonGenericAlpha(_balanced_witness(a))
    return a


def _balanced_witness(a: Alpha) -> Subset:
    half = a.total / 2
    for k in range(1, a.n + 1):
        for rest in itertools.combinations(range(2, a.n + 1), k - 1):
            s = Subset.of(a.n, (1,) + rest)
            if a.weight(s) == half:
                return s
    raise AssertionError("balanced sum reachable but no witness found")


def is_short(a: Alpha, s: Subset) -> bool:
    return 2 * a.weight(s) < a.total


def is_long(a: Alpha, s: Subset) -> bool:
    return not is_short(a, s)


def all_subsets(n: int) -> list[Subset]:
    """Every subset of 1..n in cardinality-then-lex order."""
    return [Subset.of(n, c) for k in range(n + 1) for c in itertools.combinations(range(1, n + 1), k)]


def enumerate_shorts(a: Alpha, min_size: int = 0) -> list[Subset]:
    if not 0 <= min_size <= a.n:
        raise DimensionMismatch(f"min_size {min_size} outside 0..{a.n}")
    return [s for s in all_subsets(a.n) if len(s) >= min_size and is_short(a, s)]


def core_index_set(a: Alpha) -> list[Subset]:
    """Short subsets with at least two elements; one core component each."""
    return enumerate_shorts(a, 2)


class Markers(NamedTuple):
    m: int  # min S
    n: int  # min S^c
    s_bar: Subset
    sc_bar: Subset


def subset_markers(s: Subset) -> Markers:
    if s.mask == 0:
        raise EmptySubset("markers need a nonempty subset")
    sc = s.complement()
    if sc.mask == 0:
        raise FullSubset("markers need a proper subset")
    m = s.elements()[0]
    n_s = sc.elements()[0]
    return Markers(m, n_s, s.remove(m), sc.remove(n_s))
