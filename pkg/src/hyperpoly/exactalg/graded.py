"""Homogeneous ideals handled one degree at a time.

Everything here is linear algebra on degree slices: the degree-``d`` part of
an ideal is spanned by ``m * g`` for generators ``g`` and monomials ``m`` of
complementary degree, plus every monomial once ``d`` reaches the truncation
degree.  No Groebner bases are needed for anything this package computes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import DegreeBoundExceeded, NotHomogeneous, RingMismatch
from .linalg import SparseEchelon
from .polynomial import Monomial, Polynomial, PolyRing

DEFAULT_MONOMIAL_BUDGET = 200_000


def monomial_budget() -> int:
    env = os.environ.get("HYPERPOLY_MONOMIAL_BUDGET")
    return int(env) if env else DEFAULT_MONOMIAL_BUDGET


class GradedIdeal:
    """Homogeneous generators plus an optional truncation degree.

    With ``truncation=t`` the ideal also contains every element of degree
    ``>= t``.
    """

    def __init__(self, ring: PolyRing, generators: Sequence[Polynomial], truncation: int | None = None):
        gens = []
        for g in generators:
            if g.ring != ring:
                raise RingMismatch(f"generator {g} is not in {ring.names}")
            if g.is_zero():
                continue
            if not g.is_homogeneous():
                raise NotHomogeneous(f"generator {g} is not homogeneous")
            gens.append(g)
        if truncation is not None and truncation < 1:
            raise ValueError("truncation degree must be >= 1")
        self.ring = ring
        self.generators = tuple(gens)
        self.truncation = truncation
        self._slices: dict[int, SparseEchelon] = {}

    def with_generators(self, generators: Sequence[Polynomial]) -> "GradedIdeal":
        return GradedIdeal(self.ring, generators, self.truncation)

    def columns(self, d: int) -> tuple[tuple[Monomial, ...], dict[Monomial, int]]:
        monos = self.ring.monomials(d)
        budget = monomial_budget()
        if len(monos) > budget:
            raise DegreeBoundExceeded(f"degree {d} slice has {len(monos)} monomials (budget {budget})")
        return monos, {m: i for i, m in enumerate(monos)}

    def slice_rows(self, d: int):
        """Yield the spanning rows ``m * g`` of the degree-``d`` slice."""
        _, index = self.columns(d)
        for g in self.generators:
            dg = g.degree()
            if dg > d:
                continue
            terms = list(g.terms.items())
            for m in self.ring.monomials(d - dg):
                yield {index[tuple(a + b for a, b in zip(m, mono))]: c for mono, c in terms}

    def slice(self, d: int) -> SparseEchelon:
        """Echelon basis of the degree-``d`` slice (cached)."""
        if d in self._slices:
            return self._slices[d]
        monos, _ = self.columns(d)
        ech = SparseEchelon(len(monos))
        if self.truncation is not None and d >= self.truncation:
            for i in range(len(monos)):
                ech.add({i: 1})
        else:
            for row in self.slice_rows(d):
                ech.add(row)
                if ech.rank == len(monos):
                    break
        self._slices[d] = ech
        return ech

    def contains(self, f: Polynomial) -> bool:
        if f.is_zero():
            return True
        ech = self.slice(f.degree())
        _, index = self.columns(f.degree())
        return ech.contains({index[m]: c for m, c in f.terms.items()})

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "generators": [g.to_json() for g in self.generators],
            "truncation_degree": self.truncation,
        }


@dataclass(frozen=True)
class HilbertTable:
    dims: tuple[int, ...]

    @property
    def euler(self) -> int:
        return sum(self.dims)

    def trimmed(self) -> "HilbertTable":
        dims = list(self.dims)
        while len(dims) > 1 and dims[-1] == 0:
            dims.pop()
        return HilbertTable(tuple(dims))

    def poincare(self) -> str:
        """Poincare polynomial in the cohomological variable ``t``."""
        parts = []
        for d, b in enumerate(self.dims):
            if not b:
                continue
            power = 2 * d
            mono = "" if power == 0 else ("t" if power == 1 else f"t^{power}")
            coeff = str(b) if (b != 1 or not mono) else ""
            parts.append(coeff + mono)
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "euler": self.euler}


def hilbert_function(ideal: GradedIdeal, max_degree: int) -> HilbertTable:
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    dims = []
    for d in range(max_degree + 1):
        total = len(ideal.columns(d)[0])
        dims.append(total - ideal.slice(d).rank)
    return HilbertTable(tuple(dims))


@dataclass(frozen=True)
class SliceComparison:
    equal: bool
    first_divergence: int | None
    ranks: tuple[tuple[int, int], ...]

    def __bool__(self):
        return self.equal


def ideal_slices_equal(i1: GradedIdeal, i2: GradedIdeal, max_degree: int) -> SliceComparison:
    """Compare the row spaces of the degree slices ``0..max_degree``.

    Two subspaces agree exactly when each has the rank of their sum; this is
    equivalent to comparing the canonical reduced row-echelon forms.
    """
    if i1.ring != i2.ring:
        raise RingMismatch(f"{i1.ring.names} vs {i2.ring.names}")
    ranks = []
    for d in range(max_degree + 1):
        e1, e2 = i1.slice(d), i2.slice(d)
        ranks.append((e1.rank, e2.rank))
        same = e1.rank == e2.rank and all(e1.contains(row) for row in e2.pivots.values())
        if not same:
            return SliceComparison(False, d, tuple(ranks))
    return SliceComparison(True, None, tuple(ranks))


@dataclass(frozen=True)
class NormalForm:
    basis: tuple[Monomial, ...]  # surviving (pivot-free) monomials of the degree
    coords: tuple[Fraction, ...]
    ring: PolyRing

    def is_zero(self) -> bool:
        return not any(self.coords)

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.ring, dict(zip(self.basis, self.coords)))


def normal_form(f: Polynomial, ideal: GradedIdeal, degree: int | None = None) -> NormalForm:
    """Coordinates of ``f`` modulo the ideal slice of its degree.

    ``degree`` is needed only when ``f`` is zero.
    """
    if f.ring != ideal.ring:
        raise RingMismatch(f"{f.ring.names} vs {ideal.ring.names}")
    if not f.is_homogeneous():
        raise NotHomogeneous(f"{f} is not homogeneous")
    d = f.degree() if not f.is_zero() else (degree or 0)
    monos, index = ideal.columns(d)
    ech = ideal.slice(d)
    pivots = ech.rref().keys()
    free = [i for i in range(len(monos)) if i not in pivots]
    red = ech.reduce({index[m]: c for m, c in f.terms.items()})
    return NormalForm(tuple(monos[i] for i in free), tuple(red.get(i, Fraction(0)) for i in free), ideal.ring)


def divide_by_variable(f: Polynomial, name: str) -> Polynomial:
    return f.divide_by_variable(name)
