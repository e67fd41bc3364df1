import itertools
import json

import pytest

from hyperpoly.battery import BATTERY_LENGTHS
from hyperpoly.combinat import Subset, core_index_set, is_short, validate_alpha
from hyperpoly.coregeom import (
    IntersectionKind,
    classify_family,
    classify_intersection,
    component_graph,
    core_components,
    emit_core_graph,
    euler_cross_check,
    fixed_loci,
    global_graph,
    polygon_space_nonempty,
)
from hyperpoly.errors import NotShort, SubsetTooSmall
from hyperpoly.presentations import top_degree_dimension

A5 = validate_alpha([1, 1, 3, 3, 3])
A4 = validate_alpha([1, 1, 1, 2])


def S(n, *e):
    return Subset.of(n, e)


class TestComponents:
    @pytest.mark.parametrize("lengths, count", [([1, 1, 3, 3, 3], 11), ([1, 1, 1, 2], 4), ([1, 2, 2], 1)])
    def test_examples(self, lengths, count):
        comps = core_components(validate_alpha(lengths))
        assert len(comps) == count
        assert comps[0].ident == "M"
        assert all(c.complex_dimension == len(lengths) - 3 for c in comps)

    def test_count_matches_top_degree(self):
        for lengths in BATTERY_LENGTHS:
            a = validate_alpha(lengths)
            if polygon_space_nonempty(a):
                assert len(core_components(a)) == top_degree_dimension(a)

    def test_polygon_space_nonempty(self):
        assert polygon_space_nonempty(A5)
        assert not polygon_space_nonempty(validate_alpha([1, 1, 5]))
        assert polygon_space_nonempty(A5, [S(5, 1, 3), S(5, 2, 4)])
        assert not polygon_space_nonempty(A5, [S(5, 3, 4)])


class TestFixedLoci:
    def test_example_surface(self):
        loci = fixed_loci(A5, S(5, 1, 2))
        assert [f.ident for f in loci] == ["M_S_1_2", "XT_1_2", "XT_1_2_3", "XT_1_2_4", "XT_1_2_5"]
        assert loci[0].complex_dimension == 1
        assert all(f.model == "CP^0" for f in loci[1:])

    def test_other_examples(self):
        loci = fixed_loci(A5, S(5, 1, 2, 3))
        assert [f.ident for f in loci] == ["M_S_1_2_3", "XT_1_2_3"]
        assert loci[1].model == "CP^1" and loci[0].complex_dimension == 0
        assert [f.ident for f in fixed_loci(A5, S(5, 1, 3))] == ["M_S_1_3", "XT_1_3", "XT_1_2_3"]

    def test_errors(self):
        with pytest.raises(NotShort):
            fixed_loci(A5, S(5, 3, 4))
        with pytest.raises(SubsetTooSmall):
            fixed_loci(A5, S(5, 1))

    def test_supersets_are_short(self):
        for s in core_index_set(A5):
            for f in fixed_loci(A5, s)[1:]:
                assert s.issubset(f.T) and is_short(A5, f.T)


class TestClassify:
    def test_examples(self):
        inter = classify_intersection(A5, S(5, 1, 2), S(5, 1, 3))
        assert inter.kind is IntersectionKind.SUBBUNDLE_IN_U_UNION
        assert inter.container == S(5, 1, 2, 3)
        assert classify_intersection(A5, S(5, 1, 3), S(5, 1, 4)).kind is IntersectionKind.EMPTY
        assert classify_intersection(A5, S(5, 1, 3), S(5, 2, 4)).kind is IntersectionKind.POLYGON_SUBSPACE

    def test_symmetric(self):
        subs = core_index_set(A5)
        for s, t in itertools.permutations(subs, 2):
            a, b = classify_intersection(A5, s, t), classify_intersection(A5, t, s)
            assert a.kind is b.kind and a.container == b.container and a.nonempty == b.nonempty

    def test_rule_against_set_arithmetic(self):
        for lengths in ([1, 1, 3, 3, 3], [1, 2, 3, 4, 5], [1, 1, 1, 1, 1, 2]):
            a = validate_alpha(lengths)
            for s, t in itertools.combinations(core_index_set(a), 2):
                kind = classify_intersection(a, s, t).kind
                if not (s & t):
                    assert kind is IntersectionKind.POLYGON_SUBSPACE
                elif is_short(a, s | t):
                    assert kind is IntersectionKind.SUBBUNDLE_IN_U_UNION
                else:
                    assert kind is IntersectionKind.EMPTY

    def test_family(self):
        a = validate_alpha([1, 1, 1, 1, 1, 2])
        inter = classify_family(a, [S(6, 1, 2), S(6, 1, 3), S(6, 1, 2, 3)])
        assert inter.kind is IntersectionKind.SUBBUNDLE_IN_U_UNION
        assert inter.container == S(6, 1, 2, 3)
        assert classify_family(a, [S(6, 1, 2), S(6, 1, 3), S(6, 1, 4)]).kind is IntersectionKind.EMPTY
        assert classify_family(a, [S(6, 1, 2), S(6, 3, 4), S(6, 5, 6)]).kind is IntersectionKind.POLYGON_SUBSPACE

    def test_same_subset_rejected(self):
        with pytest.raises(ValueError):
            classify_intersection(A5, S(5, 1, 2), S(5, 1, 2))


class TestEuler:
    @pytest.mark.parametrize("s, lhs, poly, count", [((1, 2), 6, 2, 4), ((1, 3), 4, 2, 2), ((1, 2, 3), 3, 1, 1)])
    def test_examples(self, s, lhs, poly, count):
        chk = euler_cross_check(A5, S(5, *s))
        assert (chk.euler_core, chk.euler_polygon, chk.fixed_points) == (lhs, poly, count)
        assert chk.ok and chk.to_json()["rhs"] == lhs

    @pytest.mark.parametrize("lengths", [v for v in BATTERY_LENGTHS if len(v) <= 6])
    def test_sweep(self, lengths):
        a = validate_alpha(lengths)
        for s in core_index_set(a):
            assert euler_cross_check(a, s).ok

    def test_relabels_when_one_missing(self):
        chk = euler_cross_check(A5, S(5, 2, 3))
        assert chk.S == S(5, 2, 3) and chk.ok


class TestGraphs:
    def test_component_example(self):
        g = component_graph(A5, S(5, 1, 2))
        assert len(g.nodes) == 5 and len(g.edges) == 4
        kinds = [e[2]["kind"] for e in g.edges]
        assert kinds == ["flow_to_X_S", "closure_U_T", "closure_U_T", "closure_U_T"]
        assert all(e[0] == "M_S_1_2" for e in g.edges)

    def test_global_small(self):
        g = global_graph(A4)
        ids = [n[0] for n in g.nodes]
        assert ids == ["M", "U_1_2", "U_1_3", "U_2_3"]
        m_edges = {e[1] for e in g.edges if e[0] == "M"}
        assert m_edges == {"U_1_2", "U_1_3", "U_2_3"}
        for u, v, attrs in g.edges:
            if u != "M":
                assert attrs["kind"] in {k.value for k in IntersectionKind}

    def test_single_node(self):
        g = global_graph(validate_alpha([1, 2, 2]))
        assert [n[0] for n in g.nodes] == ["M"] and not g.edges

    def test_dot_and_json(self):
        dot = emit_core_graph(A5, "component", "dot", S(5, 1, 2))
        assert dot.startswith("graph core {") and "M_S_1_2 -- XT_1_2_3" in dot
        assert "dim=1" in dot and 'kind="closure_U_T"' in dot
        data = json.loads(emit_core_graph(A5, "global", "json"))
        assert len(data["nodes"]) == 11
        assert emit_core_graph(A5, "global", "dot") == emit_core_graph(A5, "global", "dot")

    def test_bad_scope(self):
        with pytest.raises(ValueError):
            emit_core_graph(A5, "component", "dot")
        with pytest.raises(ValueError):
            emit_core_graph(A5, "local", "dot")
