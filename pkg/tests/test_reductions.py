import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_min_cover_size, is_cover
from proxyfinder import (
    EstimatorConfig,
    Graph,
    SizeError,
    ValidationError,
    encode_vertex_cover,
    enumerate_support,
    point_conditioned_uncertainty,
    solve_decision,
    solve_vertex_cover_exact,
    solve_vertex_cover_greedy2,
)
from proxyfinder.reductions import (
    complete_graph,
    cycle_graph,
    path_graph,
    random_connected_graph,
    random_graph,
    read_edge_file,
    star_graph,
)

K2 = complete_graph(2)
K3 = complete_graph(3)


class TestGraph:
    def test_rejects_self_loop(self):
        with pytest.raises(ValidationError):
            Graph(2, ((1, 1),))

    def test_rejects_duplicate(self):
        with pytest.raises(ValidationError):
            Graph(2, ((0, 1), (1, 0)))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValidationError):
            Graph(2, ((0, 2),))

    def test_rejects_empty(self):
        with pytest.raises(ValidationError):
            Graph(0, ())

    def test_families(self):
        assert len(complete_graph(4).edges) == 6
        assert len(cycle_graph(5).edges) == 5
        assert len(path_graph(4).edges) == 3
        assert len(star_graph(4).edges) == 3

    def test_random_connected_is_connected(self):
        for seed in range(20):
            g = random_connected_graph(7, 0.2, seed)
            seen, frontier = {0}, [0]
            while frontier:
                u = frontier.pop()
                for a, b in g.edges:
                    for x, y in ((a, b), (b, a)):
                        if x == u and y not in seen:
                            seen.add(y)
                            frontier.append(y)
            assert seen == set(range(7))

    def test_edge_file(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("# triangle\n0 1\n1 2\n\n0 2\n")
        assert read_edge_file(path) == [(0, 1), (1, 2), (0, 2)]
        path.write_text("0 1 2\n")
        with pytest.raises(ValidationError):
            read_edge_file(path)


class TestEncoding:
    def test_k2_support(self):
        # three of the four vertex assignments cover the edge (one row each),
        # the empty assignment does not (two rows)
        support = enumerate_support(encode_vertex_cover(K2, 1).distribution)
        assert len(support) == 5
        assert sum(p for _, p in support) == pytest.approx(1.0, abs=1e-9)
        assert dict(support)[("0", "0", "0")] == 0.125
        assert dict(support)[("1", "0", "1")] == 0.25

    def test_support_size_formula(self):
        for g in (K3, path_graph(4), Graph(3, ()), cycle_graph(5)):
            n = g.num_vertices
            covers = sum(is_cover(n, g.edges, [i for i in range(n) if bits[i]]) for bits in itertools.product((0, 1), repeat=n))
            support = enumerate_support(encode_vertex_cover(g, 1).distribution)
            assert len(support) == covers + 2 * (2**n - covers)
            assert abs(sum(p for _, p in support) - 1) < 1e-9

    def test_structure(self):
        inst = encode_vertex_cover(K3, 2)
        assert inst.alpha == 0.5
        assert inst.k == 2
        assert inst.estimator.kind == "point_conditioned"
        assert [f.inputs for f in inst.functions] == [("v0",), ("v1",), ("v2",)]
        assert inst.target == "covered"

    def test_k_range(self):
        with pytest.raises(ValidationError):
            encode_vertex_cover(K3, 4)

    def test_k2_feasible_with_one(self):
        inst = encode_vertex_cover(K2, 1)
        assert point_conditioned_uncertainty(inst, [0]) == 0.0
        assert point_conditioned_uncertainty(inst, [1]) == 0.0
        assert solve_decision(inst).feasible

    def test_k3(self):
        assert not solve_decision(encode_vertex_cover(K3, 1)).feasible
        assert solve_decision(encode_vertex_cover(K3, 2)).feasible

    def test_edgeless(self):
        inst = encode_vertex_cover(Graph(3, ()), 1)
        assert point_conditioned_uncertainty(inst, []) == 0.0
        res = solve_decision(inst)
        assert res.feasible and res.subset == ()
        assert all(point_conditioned_uncertainty(inst, [i]) == 0.0 for i in range(3))


class TestPointConditioned:
    def test_k2(self):
        inst = encode_vertex_cover(K2, 1)
        assert point_conditioned_uncertainty(inst, [0]) == 0.0
        assert point_conditioned_uncertainty(inst, []) == 1.0

    def test_k3(self):
        inst = encode_vertex_cover(K3, 1)
        assert point_conditioned_uncertainty(inst, [0]) == 1.0
        assert point_conditioned_uncertainty(inst, [0, 1]) == 0.0

    def test_empirical_mode(self):
        inst = encode_vertex_cover(K3, 1)
        inst = inst.replace(estimator=EstimatorConfig(mode="empirical", kind="point_conditioned", seed=4))
        assert point_conditioned_uncertainty(inst, [0, 1]) < 1e-9
        assert abs(point_conditioned_uncertainty(inst, [0]) - 1.0) < 0.02

    def test_iff_on_small_graphs(self):
        for seed in range(30):
            n = 2 + seed % 5
            g = random_graph(n, 0.5, seed)
            inst = encode_vertex_cover(g, 1)
            for size in range(n + 1):
                for s in itertools.combinations(range(n), size):
                    assert (point_conditioned_uncertainty(inst, s) <= 0.5) == is_cover(n, g.edges, s)


class TestExactVertexCover:
    def test_examples(self):
        assert solve_vertex_cover_exact(K2) == [0]
        assert solve_vertex_cover_exact(K3) == [0, 1]
        assert solve_vertex_cover_exact(Graph(4, ())) == []

    def test_cap(self):
        with pytest.raises(SizeError):
            solve_vertex_cover_exact(Graph(25, ()))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 8), st.floats(0.0, 1.0), st.integers(0, 2**31))
    def test_minimal_and_lexicographic(self, n, p, seed):
        g = random_graph(n, p, seed)
        cover = solve_vertex_cover_exact(g)
        assert is_cover(n, g.edges, cover)
        assert len(cover) == brute_min_cover_size(n, g.edges)
        smaller = [c for c in itertools.combinations(range(n), len(cover)) if is_cover(n, g.edges, c)]
        assert list(smaller[0]) == cover


class TestGreedy2:
    def test_examples(self):
        assert solve_vertex_cover_greedy2(K2) == [0, 1]
        assert solve_vertex_cover_greedy2(Graph(3, ())) == []
        assert solve_vertex_cover_greedy2(Graph(3, ((0, 1), (1, 2)))) == [0, 1]

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 8), st.floats(0.0, 1.0), st.integers(0, 2**31))
    def test_valid_and_within_two(self, n, p, seed):
        g = random_graph(n, p, seed)
        cover = solve_vertex_cover_greedy2(g)
        assert is_cover(n, g.edges, cover)
        assert len(cover) <= 2 * len(solve_vertex_cover_exact(g))
