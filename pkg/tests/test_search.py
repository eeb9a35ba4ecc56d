import random

import pytest

from gflownf import (
    ExtendedOpenGraph,
    Graph,
    Plane,
    brute_force_enumerate,
    exists_normal_form,
    find_gflow,
    odd_neighbourhood,
    verify_gflow,
)
from gflownf.search import _find_gflow_rounds
from gflownf.instances import random_instance


class TestBruteForce:
    def test_path_census(self, path_eog):
        enum = brute_force_enumerate(path_eog)
        assert enum.exhausted
        assert {
            frozenset((u, s) for u, s in g.assignments.items()) for g in enum.gflows
        } == {
            frozenset({(1, frozenset({2})), (2, frozenset({3}))}),
            frozenset({(1, frozenset({2, 3})), (2, frozenset({3}))}),
        }

    def test_lonely_measured_vertex(self):
        graph = Graph(frozenset({1}), frozenset())
        eog = ExtendedOpenGraph(graph, frozenset(), frozenset(), {1: Plane.XY})
        enum = brute_force_enumerate(eog)
        assert enum.exhausted and enum.count == 0

    def test_all_outputs(self):
        graph = Graph(frozenset({1, 2}), frozenset({(1, 2)}))
        eog = ExtendedOpenGraph(graph, frozenset(), frozenset({1, 2}), {})
        enum = brute_force_enumerate(eog)
        assert enum.exhausted and enum.count == 1
        assert enum.gflows[0].assignments == {}

    def test_limit_gives_partial_result(self, path_eog):
        enum = brute_force_enumerate(path_eog, limit=1)
        assert not enum.exhausted

    def test_every_listed_gflow_verifies(self):
        rng = random.Random(3)
        for _ in range(200):
            eog = random_instance(rng, rng.randint(1, 4))
            for g in brute_force_enumerate(eog, 50_000).gflows:
                assert verify_gflow(eog, g).valid


class TestFindGflow:
    def test_path_found_and_ordered(self, path_eog):
        g, rounds = _find_gflow_rounds(path_eog)
        assert g is not None
        assert verify_gflow(path_eog, g).valid
        assert rounds[1] > rounds[2]  # vertex 1 is measured before vertex 2

    def test_off_plane_input_fails(self, path_eog):
        bad = ExtendedOpenGraph(
            path_eog.graph,
            path_eog.inputs,
            path_eog.outputs,
            {1: Plane.XZ, 2: Plane.XY},
        )
        assert find_gflow(bad) is None

    def test_all_outputs(self):
        graph = Graph(frozenset({1}), frozenset())
        eog = ExtendedOpenGraph(graph, frozenset(), frozenset({1}), {})
        g = find_gflow(eog)
        assert g is not None and g.assignments == {}

    def test_monotone_rounds(self):
        # Every dependency of u is solved in a strictly earlier round,
        # hence measured strictly later.
        rng = random.Random(17)
        seen = 0
        while seen < 100:
            eog = random_instance(rng, rng.randint(1, 5), force_input_xy=True)
            g, rounds = _find_gflow_rounds(eog)
            if g is None:
                continue
            seen += 1
            for u in eog.measured:
                deps = (g[u] | odd_neighbourhood(eog.graph, g[u])) - {u}
                for v in deps & eog.measured:
                    assert rounds[v] < rounds[u]

    def test_oracle_equivalence_randomized(self):
        rng = random.Random(29)
        for _ in range(400):
            eog = random_instance(rng, rng.randint(1, 5))
            found = find_gflow(eog)
            witness = brute_force_enumerate(eog, 200_000, stop_after=1)
            assert (found is not None) == bool(witness.gflows)
            if found is not None:
                assert verify_gflow(eog, found).valid


class TestExistsNormalForm:
    def test_path_z(self, path_eog):
        assert exists_normal_form(path_eog, "Z") is False

    def test_path_x_via_shortcut(self, path_eog):
        assert exists_normal_form(path_eog, "X") is True

    def test_all_outputs(self):
        graph = Graph(frozenset({1}), frozenset())
        eog = ExtendedOpenGraph(graph, frozenset(), frozenset({1}), {})
        for sigma in "XYZ":
            assert exists_normal_form(eog, sigma) is True

    def test_bad_sigma(self, path_eog):
        with pytest.raises(ValueError):
            exists_normal_form(path_eog, "Q")

    def test_agrees_with_filtered_enumeration(self):
        from gflownf import check_normal_form

        rng = random.Random(41)
        for _ in range(150):
            eog = random_instance(rng, rng.randint(1, 4), force_input_xy=True)
            enum = brute_force_enumerate(eog, 100_000)
            if not enum.exhausted:
                continue
            for sigma in "XYZ":
                truth = any(check_normal_form(eog, g, sigma) for g in enum.gflows)
                assert exists_normal_form(eog, sigma) is truth
