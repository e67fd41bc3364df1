"""Intersection form on the middle cohomology of a core-component surface."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .combinat import Alpha, Subset, format_rational, is_short
from .errors import BasisNotIndependent, DegenerateTopDegree, NotASurface
from .exactalg import Polynomial, normal_form, row_reduce
from .presentations import core_ordinary_ideal


class UnnormalizedPairing(UserWarning):
    pass


def congruence_diagonalize(matrix: Sequence[Sequence]) -> list[Fraction]:
    """Diagonal of a rational congruence ``P G P^T``, by symmetric elimination."""
    g = [[Fraction(v) for v in row] for row in matrix]
    n = len(g)
    diag = []
    for k in range(n):
        if g[k][k] == 0:
            j = next((j for j in range(k + 1, n) if g[j][j] != 0), None)
            if j is not None:
                _swap(g, k, j)
            else:
                j = next((j for j in range(k + 1, n) if g[k][j] != 0), None)
                if j is not None:
                    # e_k <- e_k + e_j makes the pivot 2 g_kj
                    for i in range(n):
                        g[k][i] += g[j][i]
                    for i in range(n):
                        g[i][k] += g[i][j]
        p = g[k][k]
        diag.append(p)
        if p == 0:
            continue
        for i in range(k + 1, n):
            f = g[i][k] / p
            if f:
                for c in range(k, n):
                    g[i][c] -= f * g[k][c]
                for r in range(k, n):
                    g[r][i] -= f * g[r][k]
    return diag


def _swap(g, a, b):
    g[a], g[b] = g[b], g[a]
    for row in g:
        row[a], row[b] = row[b], row[a]


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(v) for v in row] for row in matrix]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


@dataclass(frozen=True)
class IntersectionForm:
    S: Subset
    basis: tuple[Polynomial, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    normalized: bool
    reference: str  # the monomial whose integral is 1
    diagonal: tuple[Fraction, ...] = field(default=())

    @property
    def signature(self) -> tuple[int, int, int]:
        pos = sum(1 for d in self.diagonal if d > 0)
        neg = sum(1 for d in self.diagonal if d < 0)
        return pos, neg, len(self.diagonal) - pos - neg

    @property
    def determinant(self) -> Fraction:
        return determinant(self.gram)

    @property
    def integral(self) -> bool:
        return all(v.denominator == 1 for row in self.gram for v in row)

    @property
    def odd(self) -> bool:
        return any(self.gram[i][i].numerator % 2 for i in range(len(self.gram)))

    def is_diagonal(self, entries: Sequence[int]) -> bool:
        k = len(self.gram)
        return len(entries) == k and all(
            self.gram[i][j] == (entries[i] if i == j else 0) for i in range(k) for j in range(k)
        )

    def blow_up_report(self) -> str | None:
        """``CP^2 blown up at k points`` when the form is odd unimodular of signature ``(1, k)``."""
        pos, neg, zero = self.signature
        if not (self.normalized and self.integral and abs(self.determinant) == 1 and self.odd):
            return None
        if pos != 1 or zero:
            return None
        if neg == 0:
            return "CP^2"
        return f"CP^2 blown up at {neg} point" + ("s" if neg > 1 else "")

    def to_json(self) -> dict:
        pos, neg, zero = self.signature
        return {
            "s": self.S.to_json(),
            "basis": [str(b) for b in self.basis],
            "gram": [[format_rational(v) for v in row] for row in self.gram],
            "normalized": self.normalized,
            "reference": self.reference,
            "signature": [pos, neg],
            "determinant": format_rational(self.determinant),
            "blow_up": self.blow_up_report(),
        }

    def table(self) -> str:
        cells = [[format_rational(v) for v in row] for row in self.gram]
        width = max((len(c) for row in cells for c in row), default=1)
        lines = [" ".join(c.rjust(width) for c in row) for row in cells]
        pos, neg, _ = self.signature
        lines.append(f"signature ({pos},{neg})")
        report = self.blow_up_report()
        if report:
            lines.append(report)
        return "\n".join(lines) + "\n"


def reference_index(a: Alpha, s: Subset) -> int | None:
    """Smallest ``j`` outside ``S`` with ``S | {j}`` short."""
    return next((j for j in s.complement() if is_short(a, s.add(j))), None)


def intersection_form(a: Alpha, s: Subset, basis: Sequence[Polynomial], normalized: bool = True) -> IntersectionForm:
    """Gram matrix of degree-1 classes under the top-degree evaluation of ``U_S``.

    Normalized mode fixes the evaluation by ``integral(-b_1 b_j) = 1`` and needs
    ``n = 5``, ``|S| = 2``.  Otherwise the evaluation is the coordinate on the
    one surviving top monomial, correct only up to a nonzero scalar.
    """
    if a.n != 5:
        raise NotASurface(f"U_S has complex dimension {a.n - 3}, not 2")
    if normalized and len(s) != 2:
        raise NotASurface(f"normalized pairing needs |S| = 2, got |S| = {len(s)}")
    pres = core_ordinary_ideal(a, s)
    ideal = pres.ideal
    R = pres.ring
    top = normal_form(R.zero(), ideal, degree=2)
    if len(top.basis) != 1:
        raise DegenerateTopDegree(f"degree-2 slice of the quotient has dimension {len(top.basis)}")

    basis = tuple(basis)
    for b in basis:
        if b.ring != R or (not b.is_zero() and b.degree() != 1):
            raise BasisNotIndependent(f"{b} is not a degree-1 class in {R.names}")
    coords = [list(normal_form(b, ideal, degree=1).coords) for b in basis]
    r = len(row_reduce(coords)[1]) if coords and coords[0] else 0
    if r != len(basis):
        raise BasisNotIndependent("basis classes are linearly dependent in degree 1")

    if normalized:
        j = reference_index(a, s)
        if j is None:
            raise DegenerateTopDegree(f"no j outside S={s} keeps S short")
        ref_poly = -(R.var("b1") * R.var(f"b{j}"))
        scale = normal_form(ref_poly, ideal).coords[0]
        if scale == 0:
            raise DegenerateTopDegree(f"-b1*b{j} vanishes in top degree")
        reference = f"-b1*b{j}"
    else:
        warnings.warn("pairing is determined only up to a nonzero scalar", UnnormalizedPairing, stacklevel=2)
        scale = Fraction(1)
        reference = R.format_monomial(top.basis[0])

    def integrate(f: Polynomial) -> Fraction:
        return normal_form(f, ideal, degree=2).coords[0] / scale

    k = len(basis)
    gram = tuple(tuple(integrate(basis[i] * basis[l]) for l in range(k)) for i in range(k))
    return IntersectionForm(s, basis, gram, normalized, reference, tuple(congruence_diagonalize(gram)))
