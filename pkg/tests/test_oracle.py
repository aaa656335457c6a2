import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _brute
from _fixtures import (
    complete_3_3,
    critical_with_degree_three_y,
    single_edge,
    six_cycle,
    star_from_x,
)
from antifactor.degree_specs import SpecKind, deviation, make_spec
from antifactor.errors import (
    InternalConsistencyError,
    PreconditionError,
    ResourceCapError,
    SpecError,
)
from antifactor.generators import random_allowed_spec
from antifactor.graphs import BipartiteGraph
from antifactor.oracle import (
    DichotomyBranch,
    ab_confinement_check,
    critical_properties,
    decomposition,
    deficiency_identity,
    degree_profile,
    dichotomy_check,
    is_critical,
    min_deviation,
    structure_audit,
    tutte_witness,
)


@st.composite
def graphs_with_specs(draw, max_x=3, max_y=3, max_edges=8):
    x_count = draw(st.integers(1, max_x))
    y_count = draw(st.integers(1, max_y))
    pairs = [(x, y) for x in range(x_count) for y in range(y_count)]
    cap = min(max_edges, len(pairs))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=cap))
    graph = BipartiteGraph(x_count, y_count, edges)
    spec_seed = draw(st.integers(0, 2**20))
    spec = random_allowed_spec(graph, spec_seed)
    return graph, spec


class TestMinDeviationFrozen:
    """Values frozen from the naive reference; the engine must reproduce
    both the optimum and the lexicographic tie-break."""

    def check(self, graph, spec, expect_value, expect_bits):
        assert _brute.min_deviation(graph, spec) == (expect_value, expect_bits)
        value, factor = min_deviation(graph, spec)
        assert value == expect_value
        assert factor.bitmap() == expect_bits

    def test_six_cycle(self):
        g = six_cycle()
        self.check(g, make_spec(SpecKind.ONE_PM, g), 1, (0, 0, 0, 0, 1, 1))

    def test_complete_3_3(self):
        g = complete_3_3()
        self.check(
            g, make_spec(SpecKind.ONE_PM, g), 0, (0, 0, 1, 0, 0, 1, 0, 0, 1)
        )

    def test_single_edge(self):
        g = single_edge()
        self.check(g, make_spec(SpecKind.ONE_PM, g), 1, (0,))

    def test_star_with_three_leaves(self):
        g = star_from_x(3)
        self.check(g, make_spec(SpecKind.ONE_PM, g), 1, (0, 0, 0))

    def test_one_and_one_pm_agree(self):
        for g in (six_cycle(), complete_3_3(), star_from_x(3)):
            v1, f1 = min_deviation(g, make_spec(SpecKind.ONE, g))
            v2, f2 = min_deviation(g, make_spec(SpecKind.ONE_PM, g))
            assert v1 == v2 and f1.bitmap() == f2.bitmap()

    def test_empty_graph(self):
        g = BipartiteGraph(0, 0, [])
        value, factor = min_deviation(g, make_spec(SpecKind.ONE_PM, g))
        assert value == 0 and factor.bitmap() == ()

    def test_isolated_vertices(self):
        g = BipartiteGraph(2, 1, [(0, 0)])
        value, _ = min_deviation(g, make_spec(SpecKind.ONE_PM, g))
        # the isolated x contributes 1, and the single-edge pair another 1
        assert value == 2
        assert value == _brute.min_deviation(g, make_spec(SpecKind.ONE_PM, g))[0]

    def test_spec_must_fit(self):
        with pytest.raises(SpecError):
            min_deviation(six_cycle(), make_spec(SpecKind.ONE_PM, single_edge()))

    def test_enum_cap(self):
        with pytest.raises(ResourceCapError, match="enumeration cap"):
            min_deviation(
                complete_3_3(), make_spec(SpecKind.ONE_PM, complete_3_3()), enum_cap=8
            )


class TestMinDeviationAgainstBrute:
    @given(graphs_with_specs())
    @settings(deadline=None, max_examples=60)
    def test_value_and_tiebreak(self, case):
        graph, spec = case
        expect = _brute.min_deviation(graph, spec)
        value, factor = min_deviation(graph, spec)
        assert (value, factor.bitmap()) == expect

    @given(graphs_with_specs())
    @settings(deadline=None, max_examples=20)
    def test_jobs_do_not_change_results(self, case):
        graph, spec = case
        v1, f1 = min_deviation(graph, spec)
        v3, f3 = min_deviation(graph, spec, jobs=3)
        assert (v1, f1.bitmap()) == (v3, f3.bitmap())

    @given(graphs_with_specs())
    @settings(deadline=None, max_examples=40)
    def test_profile_matches_brute(self, case):
        graph, spec = case
        assert degree_profile(graph, spec) == _brute.degree_profile(graph, spec)

    @given(graphs_with_specs())
    @settings(deadline=None, max_examples=40)
    def test_returned_factor_attains_the_value(self, case):
        graph, spec = case
        value, factor = min_deviation(graph, spec)
        assert deviation(factor, spec) == value


class TestDecomposition:
    def test_six_cycle_is_critical(self):
        g = six_cycle()
        report = decomposition(g, make_spec(SpecKind.ONE_PM, g))
        assert report.nabla == 1
        assert all(lab == "D" for lab in report.partition.values())
        assert report.critical
        assert report.d_component_count == 1
        assert (report.deficiency_holds, report.deficiency_lhs,
                report.deficiency_rhs) == (True, 1, 1)
        for v in g.vertices():
            assert report.degree_sets[v] == (0, 1, 2)

    def test_complete_3_3_is_all_c(self):
        g = complete_3_3()
        report = decomposition(g, make_spec(SpecKind.ONE_PM, g))
        assert report.nabla == 0
        assert all(lab == "C" for lab in report.partition.values())
        assert not report.critical
        assert report.d_component_count == 0
        for i in range(3):
            assert report.degree_sets[("x", i)] == (1,)
            assert report.degree_sets[("y", i)] == (0, 3)

    def test_single_edge_labels(self):
        g = single_edge()
        report = decomposition(g, make_spec(SpecKind.ONE_PM, g))
        # optima are the empty set and the full edge: both endpoints
        # straddle their sets
        assert report.degree_sets[("x", 0)] == (0, 1)
        assert report.degree_sets[("y", 0)] == (0, 1)
        assert report.partition == {("x", 0): "D", ("y", 0): "D"}
        assert report.critical

    def test_isolated_y_is_c_labeled(self):
        g = BipartiteGraph(1, 2, [(0, 0)])
        report = decomposition(g, make_spec(SpecKind.ONE_PM, g))
        assert report.partition[("y", 1)] == "C"  # degree 0 is in the anti set
        assert report.nabla == 1  # from the single-edge component
        assert not report.critical  # disconnected graphs never are

    def test_isolated_x_is_critical_on_its_own(self):
        g = BipartiteGraph(1, 0, [])
        report = decomposition(g, make_spec(SpecKind.ONE_PM, g))
        assert report.nabla == 1
        assert report.partition[("x", 0)] == "D"
        assert report.critical

    def test_labels_match_brute_definitions(self):
        for graph, spec in [
            (six_cycle(), make_spec(SpecKind.ONE_PM, six_cycle())),
            (complete_3_3(), make_spec(SpecKind.ONE_PM, complete_3_3())),
            (star_from_x(3), make_spec(SpecKind.ONE_PM, star_from_x(3))),
        ]:
            report = decomposition(graph, spec)
            profile = _brute.degree_profile(graph, spec)
            for v in graph.vertices():
                degs = profile[v]
                dset = spec.for_vertex(v)
                if all(dset.contains(d) for d in degs):
                    expect = "C"
                elif all(dset.distance(d) > 0 and d > dset.maximum() for d in degs):
                    expect = "A"
                elif all(dset.distance(d) > 0 and d < dset.minimum() for d in degs):
                    expect = "B"
                else:
                    expect = "D"
                assert report.partition[v] == expect, v

    def test_doc_shape(self):
        g = six_cycle()
        doc = decomposition(g, make_spec(SpecKind.ONE_PM, g)).to_doc()
        assert doc["nabla"] == 1
        assert doc["optimal_edges"] == [4, 5]
        assert doc["partition"] == {"x": ["D"] * 3, "y": ["D"] * 3}
        assert doc["degree_sets"]["x"] == [[0, 1, 2]] * 3
        assert doc["critical"] is True
        assert doc["deficiency"] == {"holds": True, "lhs": 1, "rhs": 1}

    def test_vertices_labeled(self):
        g = BipartiteGraph(1, 2, [(0, 0)])
        report = decomposition(g, make_spec(SpecKind.ONE_PM, g))
        assert report.vertices_labeled("C") == [("y", 1)]
        assert report.vertices_labeled("D") == [("x", 0), ("y", 0)]


class TestCriticality:
    def test_known_criticals(self):
        for g in [six_cycle(), single_edge(), star_from_x(3),
                  BipartiteGraph(1, 0, [])]:
            assert is_critical(g, make_spec(SpecKind.ONE_PM, g))

    def test_known_non_criticals(self):
        for g in [complete_3_3(), BipartiteGraph(1, 2, [(0, 0)])]:
            assert not is_critical(g, make_spec(SpecKind.ONE_PM, g))

    def test_disconnected_graph_is_never_critical(self):
        g = BipartiteGraph(2, 2, [(0, 0), (1, 1)])
        assert not is_critical(g, make_spec(SpecKind.ONE_PM, g))

    @given(graphs_with_specs())
    @settings(deadline=None, max_examples=40)
    def test_critical_implies_deviation_one(self, case):
        graph, spec = case
        if is_critical(graph, spec):
            value, _ = min_deviation(graph, spec)
            assert value == 1

    @given(graphs_with_specs())
    @settings(deadline=None, max_examples=40)
    def test_deficiency_identity_always_holds(self, case):
        graph, spec = case
        holds, lhs, rhs = deficiency_identity(graph, spec)
        assert holds and lhs == rhs
        assert lhs == _brute.min_deviation(graph, spec)[0]


class TestStructureAudit:
    def test_all_checks_pass_on_fixed_graphs(self):
        for g in [six_cycle(), complete_3_3(), star_from_x(3), single_edge()]:
            report = structure_audit(g, make_spec(SpecKind.ONE_PM, g))
            assert report.passed, report.to_doc()

    def test_check_names_are_stable(self):
        g = six_cycle()
        report = structure_audit(g, make_spec(SpecKind.ONE_PM, g))
        assert [c.name for c in report.checks] == [
            "no_edges_between_c_and_d",
            "interval_degrees_on_d",
            "no_consecutive_allowed_degrees_on_d",
            "d_components_critical",
            "d_restrictions_optimal",
            "b_vertices_drop_below_minimum",
            "a_vertices_rise_above_maximum",
            "d_vertices_straddle_the_set",
        ]

    def test_doc_shape(self):
        g = single_edge()
        doc = structure_audit(g, make_spec(SpecKind.ONE_PM, g)).to_doc()
        assert doc["passed"] is True
        assert all(c["passed"] for c in doc["checks"])

    @given(graphs_with_specs())
    @settings(deadline=None, max_examples=30)
    def test_audit_passes_on_random_specs(self, case):
        graph, spec = case
        report = structure_audit(graph, spec)
        assert report.passed, report.to_doc()


class TestTutteWitness:
    def test_six_cycle_witness_is_the_empty_set(self):
        w = tutte_witness(six_cycle())
        assert w is not None
        assert w.s_indices == () and w.q == 1
        assert w.critical_components == [((0, 1, 2), (0, 1, 2))]

    def test_complete_3_3_has_no_witness(self):
        assert tutte_witness(complete_3_3()) is None

    def test_star_witness(self):
        w = tutte_witness(star_from_x(3))
        assert w is not None and w.q > len(w.s_indices)

    def test_doc_shape(self):
        w = tutte_witness(six_cycle())
        assert w.to_doc() == {
            "s": [],
            "q": 1,
            "critical_components": [{"x": [0, 1, 2], "y": [0, 1, 2]}],
        }

    def test_subset_cap(self):
        g = complete_3_3()
        with pytest.raises(ResourceCapError, match="subset cap"):
            tutte_witness(g, subset_cap=2)

    @given(graphs_with_specs(max_x=3, max_y=3, max_edges=7))
    @settings(deadline=None, max_examples=30)
    def test_witness_absence_matches_factor_existence(self, case):
        graph, _ = case
        value, _ = min_deviation(graph, make_spec(SpecKind.ONE_PM, graph))
        w = tutte_witness(graph)
        assert (w is None) == (value == 0)
        assert (w is None) == _brute.has_anti_factor(graph)


class TestAbConfinement:
    def test_fixed_graphs(self):
        for g in [six_cycle(), complete_3_3(), star_from_x(3),
                  BipartiteGraph(2, 1, [(0, 0)])]:
            assert ab_confinement_check(g)

    @given(graphs_with_specs())
    @settings(deadline=None, max_examples=30)
    def test_always_holds_under_the_default_spec(self, case):
        graph, _ = case
        assert ab_confinement_check(graph)


class TestCriticalProperties:
    def test_requires_a_critical_graph(self):
        with pytest.raises(PreconditionError, match="not critical"):
            critical_properties(complete_3_3())

    def test_six_cycle(self):
        report = critical_properties(six_cycle())
        assert report.passed
        assert report.details["triples_checked"] == 0  # all degrees are 2

    def test_star_with_three_leaves(self):
        report = critical_properties(star_from_x(3))
        assert report.passed
        assert report.x_count_odd  # |X| = 1

    def test_degree_three_y_fixtures_are_exercised(self):
        for g in critical_with_degree_three_y():
            assert any(len(adj) >= 3 for adj in g.y_adj)
            report = critical_properties(g)
            assert report.passed, report.to_doc()
            assert report.details["triples_checked"] >= 1
            assert report.details["triple_failures"] == []

    def test_doc_shape(self):
        doc = critical_properties(six_cycle()).to_doc()
        assert doc["passed"] is True
        assert set(doc) == {
            "passed",
            "deletions_have_factor",
            "degree_sets_within_0_2",
            "x_count_odd",
            "neighborhood_deletions_exact",
            "details",
        }


class TestDichotomy:
    def test_complete_3_3_has_factor(self):
        assert dichotomy_check(complete_3_3()) is DichotomyBranch.HAS_FACTOR

    def test_rejects_low_degree(self):
        with pytest.raises(PreconditionError, match="degree >= 3"):
            dichotomy_check(six_cycle())

    def test_rejects_irregular(self):
        with pytest.raises(PreconditionError):
            dichotomy_check(star_from_x(3))

    def test_rejects_disconnected(self):
        g = BipartiteGraph(6, 6, [
            (x, y) for x in range(3) for y in range(3)
        ] + [
            (x + 3, y + 3) for x in range(3) for y in range(3)
        ])
        with pytest.raises(PreconditionError, match="connected"):
            dichotomy_check(g)

    @given(st.integers(3, 4), st.integers(0, 20))
    @settings(deadline=None, max_examples=25)
    def test_random_regular_graphs_have_factors(self, k, seed):
        from antifactor.generators import random_regular_bipartite

        g = random_regular_bipartite(6, k, seed)
        if not g.is_connected():
            return
        assert dichotomy_check(g) is DichotomyBranch.HAS_FACTOR
