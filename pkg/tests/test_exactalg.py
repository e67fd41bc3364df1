from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hyperpoly.errors import DegreeBoundExceeded, NotDivisible, NotHomogeneous, RingMismatch
from hyperpoly.exactalg import (
    GradedIdeal,
    PolyRing,
    Polynomial,
    SparseEchelon,
    hilbert_function,
    ideal_slices_equal,
    normal_form,
    prod,
    row_reduce,
    weighted_monomials,
)

R = PolyRing.build(["x", "y", "z"])


def naive_rref(matrix):
    """Textbook Gauss-Jordan over Q, first nonzero row as pivot."""
    m = [[Fraction(v) for v in row] for row in matrix]
    rows, cols = len(m), len(m[0]) if m else 0
    r = 0
    pivots = []
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        m[r] = [v / m[r][c] for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


matrices = st.integers(1, 5).flatmap(
    lambda cols: st.lists(st.lists(st.integers(-4, 4), min_size=cols, max_size=cols), min_size=1, max_size=6)
)


class TestPolynomial:
    def test_arithmetic(self):
        x, y = R.var("x"), R.var("y")
        f = (x + y) ** 2
        assert f == x * x + 2 * x * y + y * y
        assert (f - f).is_zero()
        assert str(x * y - 3 * y ** 2) in ("x*y - 3*y^2", "-3*y^2 + x*y")
        assert f.degree() == 2 and f.is_homogeneous()

    def test_weighted_degrees(self):
        S = PolyRing.build(["c1", "c2", "p"], degrees={"p": 2})
        p, c1 = S.var("p"), S.var("c1")
        g = p - c1 ** 2
        assert g.is_homogeneous() and g.degree() == 2
        assert len(S.monomials(2)) == 4  # c1^2, c1c2, c2^2, p
        with pytest.raises(NotHomogeneous):
            (p + c1).degree()

    def test_monomial_counts(self):
        for d in range(5):
            assert len(weighted_monomials((1, 1, 1), d)) == (d + 1) * (d + 2) // 2

    def test_substitute_and_divide(self):
        x, y, z = R.gens()
        f = (x + y) * (y - z)
        g = f.substitute({"x": z})
        assert g == (z + y) * (y - z)
        h = (x * y + x * z).divide_by_variable("x")
        assert h == y + z
        with pytest.raises(NotDivisible):
            (x + y).divide_by_variable("x")
        T = R.without("z")
        assert f.set_zero("z", T) == (T.var("x") + T.var("y")) * T.var("y")

    def test_json_round_trip(self):
        f = Fraction(1, 3) * R.var("x") * R.var("z") - R.var("y") ** 2
        assert Polynomial.from_json(R, f.to_json()) == f

    def test_ring_mismatch(self):
        T = PolyRing.build(["x", "y"])
        with pytest.raises(RingMismatch):
            R.var("x") + T.var("x")
        with pytest.raises(RingMismatch):
            R.var("w")

    @given(
        st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), max_size=5),
        st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), max_size=5),
        st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), max_size=5),
    )
    def test_ring_axioms(self, a, b, c):
        def mk(terms):
            out = R.zero()
            for i, j, k, co in terms:
                out = out + R.monomial((i, j, k), co)
            return out

        f, g, h = mk(a), mk(b), mk(c)
        assert f * (g + h) == f * g + f * h
        assert (f * g) * h == f * (g * h)
        assert f * g == g * f
        assert f + g - g == f
        vals = {"x": 2, "y": -1, "z": 3}
        ev = lambda p: p.substitute(vals, PolyRing.build([])).coeff(())  # noqa: E731
        assert ev(f * g) == ev(f) * ev(g)


class TestLinalg:
    @given(matrices)
    def test_row_reduce_matches_naive(self, m):
        got, piv = row_reduce(m)
        want, wpiv = naive_rref(m)
        assert piv == wpiv
        assert got == want

    @given(matrices)
    def test_sparse_rref_matches_naive(self, m):
        ech = SparseEchelon(len(m[0]))
        for row in m:
            ech.add({c: v for c, v in enumerate(row) if v})
        want, wpiv = naive_rref(m)
        rref = ech.rref()
        assert sorted(rref) == wpiv
        for row, c in zip(want, wpiv):
            assert {k: v for k, v in enumerate(row) if v} == rref[c]

    @given(matrices, st.lists(st.integers(-4, 4), min_size=5, max_size=5))
    def test_reduce_is_normal_form(self, m, v):
        ncols = len(m[0])
        v = v[:ncols]
        ech = SparseEchelon(ncols)
        for row in m:
            ech.add({c: x for c, x in enumerate(row) if x})
        red = ech.reduce({c: x for c, x in enumerate(v) if x})
        assert not set(red) & set(ech.rref())
        diff = [Fraction(v[c]) - red.get(c, 0) for c in range(ncols)]
        assert ech.contains({c: x for c, x in enumerate(diff) if x})

    def test_rank_deficient(self):
        ech = SparseEchelon(3)
        assert ech.add({0: 1, 1: 2})
        assert not ech.add({0: 2, 1: 4})
        assert ech.rank == 1
        assert ech.contains({0: Fraction(1, 2), 1: 1})


def standard_monomial_count(ring, monomial_gens, d):
    """Monomials of degree d divisible by no generator."""
    return sum(
        1
        for m in ring.monomials(d)
        if not any(all(a >= b for a, b in zip(m, g)) for g in monomial_gens)
    )


class TestGraded:
    def test_complete_intersection(self):
        x, y = PolyRing.build(["x", "y"]).gens()
        I = GradedIdeal(x.ring, [x ** 2, y ** 2])
        assert hilbert_function(I, 4).dims == (1, 2, 1, 0, 0)

    def test_truncation(self):
        x, y = PolyRing.build(["x", "y"]).gens()
        I = GradedIdeal(x.ring, [], truncation=2)
        assert hilbert_function(I, 3).dims == (1, 2, 0, 0)

    @given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=4))
    def test_monomial_ideals_against_standard_monomials(self, gens):
        gens = [g for g in gens if sum(g) > 0]
        if not gens:
            return
        I = GradedIdeal(R, [R.monomial(g) for g in gens])
        dims = hilbert_function(I, 5).dims
        assert dims == tuple(standard_monomial_count(R, gens, d) for d in range(6))

    def test_linear_change_of_coordinates(self):
        # the ideal (x+y, y-z) has the Hilbert function of one variable
        x, y, z = R.gens()
        I = GradedIdeal(R, [x + y, y - z])
        assert hilbert_function(I, 4).dims == (1, 1, 1, 1, 1)
        assert I.contains(x + z)
        assert not I.contains(x)

    def test_slices_equal_and_divergence(self):
        x, y, z = R.gens()
        I1 = GradedIdeal(R, [x * y, x * z])
        I2 = GradedIdeal(R, [x * (y + z), x * (y - z)])
        assert ideal_slices_equal(I1, I2, 4)
        I3 = GradedIdeal(R, [x * y])
        cmp = ideal_slices_equal(I1, I3, 4)
        assert not cmp and cmp.first_divergence == 2

    def test_normal_form(self):
        x, y = PolyRing.build(["x", "y"]).gens()
        I = GradedIdeal(x.ring, [x * x - x * y, y * y])
        nf = normal_form(x * x, I)
        assert nf.as_polynomial() == normal_form(x * y, I).as_polynomial()
        assert normal_form(y * y, I).is_zero()
        assert normal_form(x * x - x * y, I).is_zero()

    def test_errors(self):
        x, y = PolyRing.build(["x", "y"]).gens()
        with pytest.raises(NotHomogeneous):
            GradedIdeal(x.ring, [x + x * y])
        with pytest.raises(RingMismatch):
            GradedIdeal(R, [x])

    def test_budget(self, monkeypatch):
        monkeypatch.setenv("HYPERPOLY_MONOMIAL_BUDGET", "10")
        I = GradedIdeal(R, [R.var("x")])
        with pytest.raises(DegreeBoundExceeded):
            hilbert_function(I, 4)

    def test_prod(self):
        x, y, z = R.gens()
        assert prod([x, y, z], R) == x * y * z
        assert prod([], R) == R.one()
