import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import copy_instance, xor_instance
from oracles import brute_conditional_entropy, brute_min_cover_size, brute_min_subset
from proxyfinder import (
    EstimatorConfig,
    Graph,
    RandomInstanceConfig,
    SizeError,
    ValidationError,
    compare,
    encode_vertex_cover,
    random_instance,
    solve_decision,
    solve_exact_min,
    solve_greedy,
)
from proxyfinder.reductions import complete_graph, random_graph
from proxyfinder.solvers import random_batch, verify

K3 = complete_graph(3)


class TestDecision:
    def test_k_zero_with_loose_alpha(self):
        inst = copy_instance(alpha=1.0).replace(k=0)
        res = solve_decision(inst)
        assert res.feasible and res.subset == ()
        assert res.estimator_calls == 1

    def test_k3(self):
        assert not solve_decision(encode_vertex_cover(K3, 1)).feasible
        res = solve_decision(encode_vertex_cover(K3, 2))
        assert res.feasible and res.subset == (0, 1)

    def test_projection_zero_alpha(self):
        res = solve_decision(copy_instance().replace(k=1))
        assert res.feasible and res.subset == (0,)
        assert res.achieved_uncertainty_bits == 0.0

    def test_needs_k(self):
        with pytest.raises(ValidationError):
            solve_decision(copy_instance())

    def test_infeasible_reports_best_within_bound(self):
        inst = xor_instance(decoy=True).replace(k=1)
        res = solve_decision(inst)
        assert not res.feasible and res.subset == ()
        assert res.achieved_uncertainty_bits == pytest.approx(1.0)
        assert res.estimator_calls == 4


class TestExactMin:
    def test_xor_with_decoy(self):
        res = solve_exact_min(xor_instance(decoy=True))
        assert res.feasible and res.subset == (0, 1)
        assert res.achieved_uncertainty_bits == pytest.approx(0.0, abs=1e-12)
        # candidates of one size are scored as a batch
        assert res.estimator_calls == 1 + 3 + 3

    def test_infeasible_reports_full_set(self):
        inst = xor_instance(alpha=-0.0).replace(functions=xor_instance().functions[:1])
        res = solve_exact_min(inst)
        assert not res.feasible
        assert res.achieved_uncertainty_bits == pytest.approx(1.0)

    def test_cap(self):
        inst = copy_instance()
        with pytest.raises(SizeError):
            solve_exact_min(inst.replace(functions=inst.functions * 1), cap=0)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10_000), st.sampled_from(["zero", "half", "ninety"]))
    def test_matches_bruteforce(self, seed, rule):
        inst = random_instance(RandomInstanceConfig(n_functions=(1, 6), alpha_rule=rule), seed)
        res = solve_exact_min(inst)
        expected = brute_min_subset(inst, lambda s: brute_conditional_entropy(inst, s))
        assert res.feasible == (expected is not None)
        if expected is not None:
            assert res.subset == expected
            assert verify(inst, res)


class TestGreedy:
    def test_xor_with_decoy(self):
        res = solve_greedy(xor_instance(decoy=True))
        assert res.feasible and res.subset == (0, 1)
        assert res.selection_order == (0, 1)
        assert res.trace[0]["mutual_information_bits"] == pytest.approx(0.0, abs=1e-12)
        assert [t["name"] for t in res.trace] == ["p0", "p1"]

    def test_empty_first(self):
        res = solve_greedy(copy_instance(alpha=1.0))
        assert res.feasible and res.subset == () and res.estimator_calls == 1

    def test_ignores_k(self):
        res = solve_greedy(xor_instance().replace(k=1))
        assert res.size == 2

    def test_infeasible_uses_everything(self):
        inst = xor_instance().replace(functions=xor_instance().functions[:1])
        res = solve_greedy(inst)
        assert not res.feasible and res.selection_order == (0,)

    def test_trace_gains_add_up(self):
        inst = random_instance(RandomInstanceConfig(n_functions=(6, 6), alpha_rule="zero"), 11)
        res = solve_greedy(inst)
        total = sum(t["gain_bits"] for t in res.trace)
        assert total == pytest.approx(res.trace[-1]["mutual_information_bits"], abs=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.sampled_from(["zero", "half", "ninety"]))
    def test_against_exact(self, seed, rule):
        inst = random_instance(RandomInstanceConfig(n_functions=(1, 7), alpha_rule=rule), seed)
        g, e = solve_greedy(inst), solve_exact_min(inst)
        n = len(inst.functions)
        assert g.feasible == e.feasible
        if g.feasible:
            assert g.size >= e.size
        assert g.estimator_calls <= 1 + n * (n + 1) // 2


class TestParallel:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_same_results(self, seed):
        inst = random_instance(RandomInstanceConfig(n_functions=(8, 8), alpha_rule="ninety"), seed)
        for solver in (solve_exact_min, solve_greedy):
            assert solver(inst, n_jobs=1) == solver(inst, n_jobs=4)

    def test_empirical_same_results(self):
        inst = random_instance(RandomInstanceConfig(n_functions=(5, 5)), 4)
        inst = inst.replace(estimator=EstimatorConfig(mode="empirical", samples=2000, seed=3))
        assert solve_exact_min(inst, n_jobs=1) == solve_exact_min(inst, n_jobs=3)


class TestRandomInstances:
    def test_deterministic(self):
        cfg = RandomInstanceConfig()
        a, b = random_instance(cfg, 5), random_instance(cfg, 5)
        assert a.functions == b.functions
        assert a.distribution.entries == b.distribution.entries
        assert a.alpha == b.alpha

    def test_fixed_shape(self):
        cfg = RandomInstanceConfig(n_attributes=(4, 4), n_functions=(6, 6))
        inst = random_instance(cfg, 7)
        assert len(inst.schema.names) == 4 and len(inst.functions) == 6
        assert abs(sum(p for _, p in inst.distribution.entries) - 1) < 1e-9

    def test_planted_projection_is_feasible(self):
        cfg = RandomInstanceConfig(plant_target_projection=True, alpha_rule="zero")
        for seed in range(20):
            res = solve_exact_min(random_instance(cfg, seed))
            assert res.feasible and res.size <= 1

    def test_bad_config(self):
        with pytest.raises(ValidationError):
            RandomInstanceConfig(n_attributes=(1, 3))
        with pytest.raises(ValidationError):
            RandomInstanceConfig(alpha_rule="most")

    def test_batch(self):
        batch = random_batch(6, seed=1)
        assert len({i.name for i in batch}) == 6
        assert [i.name for i in batch] == [i.name for i in random_batch(6, seed=1)]


class TestCompare:
    def test_k3(self):
        out = compare([encode_vertex_cover(K3, 2)])
        row = out["rows"][0]
        assert row["ratio"] == 1.0 and not row["feasibility_mismatch"]
        assert row["exact"]["subset"] == [0, 1]
        assert out["aggregate"]["max_ratio"] == 1.0

    def test_random_rows(self):
        out = compare(random_batch(20, seed=1))
        assert out["aggregate"]["n_instances"] == 20
        assert out["aggregate"]["n_mismatch"] == 0
        assert all(r["ratio"] is None or r["ratio"] >= 1 for r in out["rows"])


def test_reduction_end_to_end():
    """Decision on the encoded instance agrees with brute-force vertex cover."""
    for seed in range(25):
        n = 2 + seed % 6
        g = random_graph(n, 0.4, seed)
        opt = brute_min_cover_size(n, g.edges)
        for k in range(n + 1):
            assert solve_decision(encode_vertex_cover(g, k)).feasible == (opt <= k)


def test_solve_result_json():
    res = solve_greedy(xor_instance(decoy=True))
    data = res.to_json()
    assert data["subset"] == [0, 1]
    assert data["subset_names"] == ["p0", "p1"]


def test_edgeless_graph_min_is_empty():
    res = solve_exact_min(encode_vertex_cover(Graph(4, ()), 0))
    assert res.feasible and res.subset == ()
