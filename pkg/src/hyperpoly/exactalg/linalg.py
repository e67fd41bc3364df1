"""Exact row reduction over Q.

Two entry points share the same arithmetic:

* ``SparseEchelon`` keeps rows as ``{column: int}`` dicts and absorbs rows one
  at a time, which is what the degree-slice computations need (thousands of
  very sparse rows).
* ``row_reduce`` works on small dense matrices and follows a fixed pivot rule
  (first nonzero column, largest absolute value, earliest row on ties) so the
  elimination is reproducible step for step.

Both use integer (fraction-free) forward elimination with content removal and
rational back-substitution, so the reduced row-echelon form is canonical.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence


def _integral(row: Mapping[int, "int | Fraction"]) -> dict[int, int]:
    den = 1
    for v in row.values():
        if isinstance(v, Fraction) and v.denominator != 1:
            den = lcm(den, v.denominator)
    if den == 1:
        return {c: int(v) for c, v in row.items() if v}
    return {c: int(v * den) for c, v in row.items() if v}


def _primitive(row: dict[int, int]) -> dict[int, int]:
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if row[min(row)] < 0:
        g = -g
    if g != 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _combine(a: int, row: dict[int, int], b: int, prow: dict[int, int]) -> dict[int, int]:
    """Return ``a*row - b*prow`` with zeros dropped."""
    out = {c: a * v for c, v in row.items()} if a != 1 else dict(row)
    for c, v in prow.items():
        w = out.get(c, 0) - b * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return out


class SparseEchelon:
    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _eliminate(self, row: Mapping[int, "int | Fraction"]) -> dict[int, int]:
        row = _primitive(_integral(row))
        while row:
            c = min(row)
            prow = self.pivots.get(c)
            if prow is None:
                return row
            g = gcd(prow[c], row[c])
            row = _primitive(_combine(prow[c] // g, row, row[c] // g, prow))
        return row

    def add(self, row: Mapping[int, "int | Fraction"]) -> bool:
        """Absorb a row; return True when it raised the rank."""
        row = self._eliminate(row)
        if not row:
            return False
        self.pivots[min(row)] = row
        return True

    def contains(self, row: Mapping[int, "int | Fraction"]) -> bool:
        return not self._eliminate(row)

    def reduce(self, row: Mapping[int, "int | Fraction"]) -> dict[int, Fraction]:
        """Normal form of ``row`` modulo the row space, supported off the pivots.

        The result differs from ``row`` by an element of the row space.
        """
        row = {c: Fraction(v) for c, v in row.items() if v}
        if not row:
            return {}
        rref = self.rref()
        out = dict(row)
        for c in sorted(c for c in row if c in rref):
            f = out.get(c)
            if not f:
                continue
            for k, v in rref[c].items():
                w = out.get(k, 0) - f * v
                if w:
                    out[k] = w
                else:
                    out.pop(k, None)
        return out

    def rref(self) -> dict[int, dict[int, Fraction]]:
        """Reduced row-echelon form keyed by pivot column, pivots equal to 1."""
        cached = getattr(self, "_rref", None)
        if cached is not None and cached[0] == len(self.pivots):
            return cached[1]
        out: dict[int, dict[int, Fraction]] = {}
        for c in sorted(self.pivots, reverse=True):
            prow = self.pivots[c]
            lead = prow[c]
            row = {k: Fraction(v, lead) for k, v in prow.items()}
            for k in sorted(k for k in row if k != c and k in out):
                f = row.get(k)
                if not f:
                    continue
                for kk, vv in out[k].items():
                    w = row.get(kk, 0) - f * vv
                    if w:
                        row[kk] = w
                    else:
                        row.pop(kk, None)
            out[c] = row
        self._rref = (len(self.pivots), out)
        return out


def row_reduce(matrix: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row-echelon form of a dense matrix and its pivot columns."""
    rows = [list(r) for r in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    work = []
    for r in rows:
        d = _integral(dict(enumerate(r)))
        work.append([d.get(c, 0) for c in range(ncols)])
    m = len(work)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        cand = [i for i in range(r, m) if work[i][c]]
        if not cand:
            continue
        p = max(cand, key=lambda i: (abs(work[i][c]), -i))
        work[r], work[p] = work[p], work[r]
        pr = work[r]
        for i in range(r + 1, m):
            f = work[i][c]
            if f:
                a, b = pr[c], f
                g = gcd(a, b)
                new = [(a // g) * x - (b // g) * y for x, y in zip(work[i], pr)]
                cg = 0
                for x in new:
                    cg = gcd(cg, x)
                work[i] = [x // cg for x in new] if cg > 1 else new
        pivots.append(c)
        r += 1
    out = [[Fraction(x) for x in work[i]] for i in range(r)]
    for i in range(r - 1, -1, -1):
        c = pivots[i]
        lead = out[i][c]
        out[i] = [x / lead for x in out[i]]
        for j in range(i):
            f = out[j][c]
            if f:
                out[j] = [x - f * y for x, y in zip(out[j], out[i])]
    return out, pivots


def rank(matrix: Sequence[Sequence]) -> int:
    return len(row_reduce(matrix)[1])
