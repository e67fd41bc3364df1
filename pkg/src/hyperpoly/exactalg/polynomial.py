"""Sparse multivariate polynomials with exact rational coefficients.

Variables carry an algebraic degree (``c_i``, ``b_i``, ``x`` have degree 1,
``p`` has degree 2); cohomological degree is twice the algebraic degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from ..combinat import format_rational, parse_rational
from ..errors import NotDivisible, NotHomogeneous, RingMismatch

Monomial = tuple  # tuple[int, ...] aligned with the ring variables


@lru_cache(maxsize=None)
def weighted_monomials(degrees: tuple[int, ...], d: int) -> tuple[Monomial, ...]:
    """All monomials of weighted degree ``d``, lex-descending on exponents."""
    if not degrees:
        return ((),) if d == 0 else ()
    head, tail = degrees[0], degrees[1:]
    out = []
    for e in range(d // head, -1, -1):
        for rest in weighted_monomials(tail, d - e * head):
            out.append((e,) + rest)
    return tuple(out)


@dataclass(frozen=True)
class PolyRing:
    variables: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [v for v, _ in self.variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if any(d < 1 for _, d in self.variables):
            raise ValueError("variable degrees must be >= 1")

    @classmethod
    def build(cls, *groups: Iterable[str], degrees: Mapping[str, int] | None = None) -> "PolyRing":
        degrees = degrees or {}
        return cls(tuple((name, degrees.get(name, 1)) for g in groups for name in g))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.variables)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.variables)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise RingMismatch(f"variable {name!r} not in ring {self.names}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def monomials(self, d: int) -> tuple[Monomial, ...]:
        return weighted_monomials(self.degrees, d)

    def unit(self, i: int) -> Monomial:
        return tuple(1 if k == i else 0 for k in range(self.nvars))

    def var(self, name: str) -> "Polynomial":
        return Polynomial(self, {self.unit(self.index(name)): Fraction(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.var(v) for v in self.names]

    def const(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def monomial(self, m: Monomial, coeff=1) -> "Polynomial":
        return Polynomial(self, {tuple(m): Fraction(coeff)})

    def without(self, *names: str) -> "PolyRing":
        return PolyRing(tuple(v for v in self.variables if v[0] not in names))

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"

    def to_json(self) -> list[dict]:
        return [{"name": v, "degree": d} for v, d in self.variables]


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, Fraction] | None = None):
        self.ring = ring
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring.names} vs {other.ring.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(self.ring, out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self.ring, {m: c * v for m, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def degrees(self) -> set[int]:
        return {self.ring.monomial_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Weighted degree of a nonzero homogeneous polynomial."""
        degs = self.degrees()
        if len(degs) != 1:
            raise NotHomogeneous(f"{self} is not a nonzero homogeneous polynomial")
        return degs.pop()

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in graded-lex order, leading term first."""
        return sorted(self.terms.items(), key=lambda t: (self.ring.monomial_degree(t[0]), t[0]), reverse=True)

    def substitute(self, mapping: Mapping[str, "Polynomial | int | Fraction"], target: PolyRing | None = None) -> "Polynomial":
        """Replace variables by polynomials in ``target``.

        Unmapped variables go to the same-named variable of ``target``.
        """
        target = target or self.ring
        images = []
        for name in self.ring.names:
            if name in mapping:
                img = mapping[name]
                img = target.const(img) if isinstance(img, (int, Fraction)) else img
                if img.ring != target:
                    raise RingMismatch(f"image of {name} lives in {img.ring.names}")
            else:
                img = target.var(name)
            images.append(img)
        out = target.zero()
        cache: dict = {}
        for m, c in self.terms.items():
            term = target.const(c)
            for k, e in enumerate(m):
                if e:
                    key = (k, e)
                    if key not in cache:
                        cache[key] = images[k] ** e
                    term = term * cache[key]
            out = out + term
        return out

    def set_zero(self, name: str, target: PolyRing | None = None) -> "Polynomial":
        """Substitute ``name -> 0``; by default drop the variable from the ring."""
        target = target or self.ring.without(name)
        return self.substitute({name: 0}, target)

    def divide_by_variable(self, name: str) -> "Polynomial":
        k = self.ring.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[k] == 0:
                raise NotDivisible(f"term {self.ring.format_monomial(m)} is not divisible by {name}")
            out[m[:k] + (m[k] - 1,) + m[k + 1:]] = c
        return Polynomial(self.ring, out)

    def to_json(self) -> list[dict]:
        return [{"monomial": list(m), "coeff": format_rational(c)} for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, ring: PolyRing, data) -> "Polynomial":
        terms: dict = {}
        for t in data:
            m = tuple(int(e) for e in t["monomial"])
            if len(m) != ring.nvars:
                raise RingMismatch(f"monomial {m} has wrong length for {ring.names}")
            terms[m] = terms.get(m, 0) + parse_rational(t["coeff"])
        return cls(ring, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for m, c in self.sorted_terms():
            mono = self.ring.format_monomial(m)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mono == "1":
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            out += (f"-{body}" if sign == "-" else body) if not out else f" {sign} {body}"
        return out

    __repr__ = __str__


def prod(polys: Iterable[Polynomial], ring: PolyRing) -> Polynomial:
    out = ring.one()
    for p in polys:
        out = out * p
    return out
