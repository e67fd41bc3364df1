"""The ``b_A`` basis, the elements ``v_S``, ``w_T``, ``x_S`` and the transition matrix.

All computations happen in the degree ``n - 2`` piece of
``Q[b_1..b_n] / (b_k^2 - b_1 b_k : k >= 2)``, whose monomial basis is indexed
by proper subsets ``A`` of ``{2..n}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .combinat import Alpha, Subset, all_subsets, enumerate_shorts, format_rational, is_short, subset_markers
from .errors import ClaimViolation, IndexOutOfRange, NotProper, NotShort, RequiresOneInS
from .exactalg import PolyRing, Polynomial, prod, row_reduce
from .presentations import b_ring


def c_ring_plain(n: int) -> PolyRing:
    return PolyRing.build([f"c{i}" for i in range(1, n + 1)])


def proper_subsets(n: int) -> list[Subset]:
    """Proper subsets of ``{2..n}``, by cardinality then lexicographically."""
    full = Subset.full(n).remove(1)
    return [A for A in all_subsets(n) if 1 not in A and A != full]


def reduce_quotient(f: Polynomial) -> Polynomial:
    """Rewrite ``b_k^e -> b_1^(e-1) b_k`` for ``k >= 2`` (terminating and confluent)."""
    out: dict = {}
    for m, c in f.terms.items():
        extra = sum(e - 1 for e in m[1:] if e > 1)
        new = (m[0] + extra,) + tuple(min(e, 1) for e in m[1:])
        out[new] = out.get(new, 0) + c
    return Polynomial(f.ring, out)


def basis_element_bA(A: Subset, n: int) -> Polynomial:
    """``(-1)^|A| b_1^(n-2-|A|) prod_{k in A} b_k``."""
    if A.n != n or 1 in A:
        raise IndexOutOfRange(f"A={A} must be a subset of {{2..{n}}}")
    if len(A) == n - 1:
        raise NotProper(f"A={A} is all of {{2..{n}}}")
    R = b_ring(n)
    m = (n - 2 - len(A),) + tuple(1 if k in A else 0 for k in range(2, n + 1))
    return R.monomial(m, (-1) ** len(A))


def coefficients_on_basis(f: Polynomial, n: int) -> dict[Subset, Fraction]:
    """Coordinates of a degree ``n - 2`` element on ``{b_A}`` after reduction."""
    red = reduce_quotient(f)
    out: dict[Subset, Fraction] = {}
    for m, c in red.terms.items():
        if sum(m) != n - 2:
            raise ValueError(f"{f} is not of degree {n - 2}")
        A = Subset.of(n, [k for k in range(2, n + 1) if m[k - 1]])
        out[A] = c * (-1) ** len(A)
    return out


def v_S(S: Subset, n: int) -> Polynomial:
    """``(-1)^n prod_{j in Sc_bar}(b_j + b_nS - b_1) * prod_{i in S_bar}(2 b_i - b_1)``."""
    mk = subset_markers(S)
    R = b_ring(n)
    b = lambda i: R.var(f"b{i}")  # noqa: E731
    body = prod((b(j) + b(mk.n) - b(1) for j in mk.sc_bar), R) * prod((2 * b(i) - b(1) for i in mk.s_bar), R)
    return body * (-1) ** n


def v_S_c_form(S: Subset, n: int) -> Polynomial:
    """The same element written in the ``c`` variables."""
    mk = subset_markers(S)
    R = c_ring_plain(n)
    c = lambda i: R.var(f"c{i}")  # noqa: E731
    body = prod((c(j) + c(mk.n) for j in mk.sc_bar), R) * prod((c(i) for i in mk.s_bar), R)
    return body * Fraction((-1) ** n, 2 ** len(mk.sc_bar))


def c_to_b(f: Polynomial) -> Polynomial:
    """Apply ``c_k -> 2 b_k - b_1``."""
    n = f.ring.nvars
    R = b_ring(n)
    mapping = {f"c{k}": 2 * R.var(f"b{k}") - R.var("b1") for k in range(1, n + 1)}
    return f.substitute(mapping, R)


def claim_vs_closed_form(S: Subset, n: int) -> dict[Subset, Fraction]:
    mk = subset_markers(S)
    out = {}
    for A in proper_subsets(n):
        if 1 not in S:
            hit = mk.sc_bar.issubset(A) and mk.m not in A
        else:
            hit = not S.complement().issubset(A)
        if hit:
            out[A] = Fraction(2 ** len(A & mk.s_bar))
    return out


def _differences(got: dict, want: dict) -> list:
    keys = sorted(set(got) | set(want), key=Subset.sort_key)
    return [(A, got.get(A, 0), want.get(A, 0)) for A in keys if got.get(A, 0) != want.get(A, 0)]


@dataclass(frozen=True)
class VsExpansion:
    S: Subset
    coefficients: dict

    def to_json(self) -> dict:
        return {
            "s": self.S.to_json(),
            "coefficients": [
                {"a": A.to_json(), "coeff": format_rational(c)}
                for A, c in sorted(self.coefficients.items(), key=lambda t: t[0].sort_key())
            ],
        }


def expand_vS(S: Subset, n: int, closed_form: Callable[[Subset, int], dict] = claim_vs_closed_form) -> VsExpansion:
    got = coefficients_on_basis(v_S(S, n), n)
    want = closed_form(S, n)
    diff = _differences(got, want)
    if diff:
        A, g, w = diff[0]
        raise ClaimViolation(f"v_S expansion for S={S}: coefficient of b_A at A={A} is {g}, closed form gives {w}", witness=(S, A))
    return VsExpansion(S, got)


def _check_one_in(T: Subset):
    if 1 not in T:
        raise RequiresOneInS(f"T={T} must contain 1")


def w_T(T: Subset, a: Alpha) -> Polynomial:
    """``v_T + sum_{k=1}^{|T|-1} 2^(k-1) v_{T_k}``, ``T_k`` dropping the k smallest elements."""
    _check_one_in(T)
    if not is_short(a, T):
        raise NotShort(f"T={T} is long")
    n = a.n
    out = v_S(T, n)
    elems = T.elements()
    for k in range(1, len(T)):
        out = out + v_S(Subset.of(n, elems[k:]), n) * 2 ** (k - 1)
    return out


def w_T_target(T: Subset, n: int) -> dict[Subset, Fraction]:
    t_bar = T.remove(1)
    return {A: Fraction(2 ** len(A & t_bar)) for A in proper_subsets(n)}


def check_claim_ws(T: Subset, a: Alpha) -> dict[Subset, Fraction]:
    got = coefficients_on_basis(w_T(T, a), a.n)
    diff = _differences(got, w_T_target(T, a.n))
    if diff:
        A, g, w = diff[0]
        raise ClaimViolation(f"telescoping identity for T={T} fails at A={A}: {g} != {w}", witness=(T, A))
    return got


def x_S(S: Subset, a: Alpha) -> Polynomial:
    if not is_short(a, S):
        raise NotShort(f"S={S} is long")
    n = a.n
    if 1 not in S:
        return v_S(S, n)
    out = b_ring(n).zero()
    for T in all_subsets(n):
        if 1 in T and T.issubset(S):
            out = out + w_T(T, a) * (-1) ** (len(S) + len(T))
    return out


def column_subset(A: Subset, a: Alpha) -> Subset:
    """``{2..n} - A`` if short, else ``A | {1}``."""
    comp = A.complement().remove(1)
    return comp if is_short(a, comp) else A.add(1)


@dataclass(frozen=True)
class TransitionMatrix:
    rows: tuple[Subset, ...]
    cols: tuple[Subset, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    def to_json(self) -> dict:
        return {
            "rows": [A.to_json() for A in self.rows],
            "cols": [S.to_json() for S in self.cols],
            "entries": [[format_rational(v) for v in r] for r in self.entries],
        }


def transition_matrix(a: Alpha) -> TransitionMatrix:
    """Coefficients of ``x_{S(A)}`` on ``{b_A}``; checks unit lower-triangularity."""
    n = a.n
    rows = proper_subsets(n)
    cols = [column_subset(A, a) for A in rows]
    if len(set(cols)) != len(cols):
        raise ClaimViolation("S(A) is not injective", witness=cols)
    entries = [[Fraction(0)] * len(cols) for _ in rows]
    where = {A: i for i, A in enumerate(rows)}
    for j, S in enumerate(cols):
        for A, c in coefficients_on_basis(x_S(S, a), n).items():
            entries[where[A]][j] = c
    for i in range(len(rows)):
        if entries[i][i] != 1:
            raise ClaimViolation(f"diagonal entry at A={rows[i]} is {entries[i][i]}", witness=(rows[i], cols[i]))
        for j in range(i + 1, len(cols)):
            if entries[i][j]:
                raise ClaimViolation(
                    f"entry above the diagonal: row A={rows[i]}, column S={cols[j]} is {entries[i][j]}",
                    witness=(rows[i], cols[j]),
                )
    return TransitionMatrix(tuple(rows), tuple(cols), tuple(tuple(r) for r in entries))


@dataclass(frozen=True)
class SpanningReport:
    rank: int
    expected: int
    triangular: bool

    @property
    def ok(self) -> bool:
        return self.rank == self.expected and self.triangular

    @property
    def deficit(self) -> int:
        return self.expected - self.rank


def spanning_check(a: Alpha, drop: Optional[Subset] = None) -> SpanningReport:
    """Rank of ``{v_S : S nonempty short}`` inside the degree ``n - 2`` slice.

    Agreement with the triangular route is part of the report; ``drop`` removes
    one ``v_S`` as a negative control.
    """
    n = a.n
    basis = proper_subsets(n)
    shorts = [S for S in enumerate_shorts(a, 1) if S != drop]
    matrix = []
    for S in shorts:
        coeffs = coefficients_on_basis(v_S(S, n), n)
        matrix.append([coeffs.get(A, Fraction(0)) for A in basis])
    r = len(row_reduce(matrix)[1]) if matrix else 0
    try:
        transition_matrix(a)
        triangular = True
    except ClaimViolation:
        triangular = False
    report = SpanningReport(r, len(basis), triangular)
    if drop is None and (report.rank == report.expected) != triangular:
        raise ClaimViolation(f"spanning rank {r} and triangularity {triangular} disagree")
    return report


@dataclass(frozen=True)
class ClaimsReport:
    alpha: Alpha
    vs_checked: int
    ws_checked: int
    transition_size: int
    spanning_rank: int

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha.to_json(),
            "vs_checked": self.vs_checked,
            "ws_checked": self.ws_checked,
            "transition_size": self.transition_size,
            "spanning_rank": self.spanning_rank,
            "nonempty_shorts": 2 ** (self.alpha.n - 1) - 1,
        }


def verify_claims(a: Alpha) -> ClaimsReport:
    """Run every identity for one edge-length vector; raise ``ClaimViolation`` on failure."""
    n = a.n
    subsets = [S for S in all_subsets(n) if 0 < len(S) < n]
    for S in subsets:
        expand_vS(S, n)
        if c_to_b(v_S_c_form(S, n)) != v_S(S, n):
            raise ClaimViolation(f"b-form and c-form of v_S disagree for S={S}", witness=S)
    ws = [T for T in enumerate_shorts(a, 1) if 1 in T]
    for T in ws:
        check_claim_ws(T, a)
    nonempty = len(enumerate_shorts(a, 1))
    if nonempty != 2 ** (n - 1) - 1:
        raise ClaimViolation(f"{nonempty} nonempty short subsets, expected {2 ** (n - 1) - 1}")
    tm = transition_matrix(a)
    span = spanning_check(a)
    if not span.ok:
        raise ClaimViolation(f"v_S span rank {span.rank} < {span.expected}")
    return ClaimsReport(a, len(subsets), len(ws), tm.size, span.rank)
