"""Exact and greedy search for proxy subsets.

Exhaustive searches walk subsets by size, then lexicographically, and stop
at the first subset whose uncertainty is within ``alpha``. The greedy
heuristic grows a subset one function at a time, always adding the function
that maximises the mutual information of the grown subset with the target,
and stops as soon as the threshold is met or every function is used.

Candidates may be evaluated on a thread pool (``n_jobs``). Work is split into
fixed-size batches and scanned in candidate order, so results and call
counts never depend on the number of workers.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .estimation import EXACT, UncertaintyEstimator, UncertaintyReport, entropy
from .exceptions import SizeError, ValidationError
from .instance import ProxyInstance
from .model import AttributeSchema, FunctionDef, TabularDistribution

DEFAULT_EXHAUSTIVE_CAP = 20
FEASIBILITY_TOL = 1e-12
TIE_TOL = 1e-12
BATCH_SIZE = 256

EXACT_METHOD = "exact"
GREEDY_METHOD = "greedy"
DECISION_METHOD = "decision"


@dataclass
class SolveResult:
    feasible: bool
    subset: tuple[int, ...]
    achieved_uncertainty_bits: float
    estimator_calls: int
    method: str
    function_names: tuple[str, ...] = ()
    selection_order: tuple[int, ...] = ()
    trace: list[dict] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.subset)

    def to_json(self) -> dict:
        return {
            "feasible": self.feasible,
            "subset": list(self.subset),
            "subset_names": [self.function_names[i] for i in self.subset] if self.function_names else [],
            "achieved_uncertainty_bits": self.achieved_uncertainty_bits,
            "estimator_calls": self.estimator_calls,
            "method": self.method,
            "selection_order": list(self.selection_order),
            "trace": self.trace,
        }


def _feasible(value: float, alpha: float) -> bool:
    return value <= alpha + FEASIBILITY_TOL


def _evaluate(estimator: UncertaintyEstimator, subsets: Sequence[tuple[int, ...]], n_jobs: Optional[int]) -> list[UncertaintyReport]:
    if not n_jobs or n_jobs == 1 or len(subsets) < 2:
        return [estimator.report(s) for s in subsets]
    workers = n_jobs if n_jobs > 0 else None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(estimator.report, subsets))


def _batches(it: Iterable, size: int):
    it = iter(it)
    while True:
        chunk = list(itertools.islice(it, size))
        if not chunk:
            return
        yield chunk


def _check_cap(inst: ProxyInstance, cap: int) -> None:
    if len(inst.functions) > cap:
        raise SizeError(
            f"{len(inst.functions)} functions exceed the exhaustive-search cap of {cap}; use the greedy solver"
        )


def _search(inst: ProxyInstance, max_size: int, method: str, cap: int, n_jobs: Optional[int]) -> SolveResult:
    _check_cap(inst, cap)
    estimator = UncertaintyEstimator(inst)
    n = len(inst.functions)
    calls = 0
    best: Optional[UncertaintyReport] = None
    last: Optional[UncertaintyReport] = None
    for size in range(max_size + 1):
        for chunk in _batches(itertools.combinations(range(n), size), BATCH_SIZE):
            reports = _evaluate(estimator, chunk, n_jobs)
            calls += len(reports)
            for r in reports:
                if _feasible(r.value_bits, inst.alpha):
                    return SolveResult(True, r.subset, r.value_bits, calls, method, inst.function_names, r.subset)
                if best is None or r.value_bits < best.value_bits:
                    best = r
                last = r
    if method == EXACT_METHOD:
        # last evaluated subset is the full function set
        value = last.value_bits
    else:
        value = best.value_bits
    return SolveResult(False, (), value, calls, method, inst.function_names)


def solve_decision(inst: ProxyInstance, cap: int = DEFAULT_EXHAUSTIVE_CAP, n_jobs: Optional[int] = None) -> SolveResult:
    """Is there a subset of at most ``inst.k`` functions with U <= alpha?

    Returns the first witness in (size, lexicographic) order. An infeasible
    verdict reports the smallest uncertainty found within the bound.
    """
    if inst.k is None:
        raise ValidationError("the decision problem needs a bound k")
    return _search(inst, inst.k, DECISION_METHOD, cap, n_jobs)


def solve_exact_min(inst: ProxyInstance, cap: int = DEFAULT_EXHAUSTIVE_CAP, n_jobs: Optional[int] = None) -> SolveResult:
    """Smallest feasible subset, lexicographically first among minima.

    When even the full set misses the threshold the result is infeasible and
    reports U of the full set.
    """
    return _search(inst, len(inst.functions), EXACT_METHOD, cap, n_jobs)


def solve_greedy(inst: ProxyInstance, n_jobs: Optional[int] = None) -> SolveResult:
    """Greedy mutual-information selection; ignores ``inst.k``.

    Makes at most ``1 + n(n+1)/2`` estimator calls for ``n`` functions.
    """
    estimator = UncertaintyEstimator(inst)
    tol = TIE_TOL if estimator.config.mode == EXACT else 0.0
    current = estimator.report(())
    calls = 1
    names = inst.function_names
    if _feasible(current.value_bits, inst.alpha):
        return SolveResult(True, (), current.value_bits, calls, GREEDY_METHOD, names)

    chosen: list[int] = []
    remaining = list(range(len(inst.functions)))
    trace = []
    while remaining:
        candidates = [tuple(sorted(chosen + [f])) for f in remaining]
        reports = _evaluate(estimator, candidates, n_jobs)
        calls += len(reports)
        best = 0
        for j in range(1, len(reports)):
            if reports[j].mutual_information_bits > reports[best].mutual_information_bits + tol:
                best = j
        pick = remaining.pop(best)
        chosen.append(pick)
        gain = reports[best].mutual_information_bits - current.mutual_information_bits
        current = reports[best]
        trace.append(
            {
                "step": len(chosen),
                "function": pick,
                "name": names[pick],
                "mutual_information_bits": current.mutual_information_bits,
                "gain_bits": gain,
                "uncertainty_bits": current.value_bits,
            }
        )
        if _feasible(current.value_bits, inst.alpha):
            return SolveResult(True, current.subset, current.value_bits, calls, GREEDY_METHOD, names, tuple(chosen), trace)
    return SolveResult(False, (), current.value_bits, calls, GREEDY_METHOD, names, tuple(chosen), trace)


def verify(inst: ProxyInstance, result: SolveResult) -> bool:
    """Re-evaluate a feasible result's subset with a fresh estimator."""
    if not result.feasible:
        return True
    report = UncertaintyEstimator(inst).report(result.subset)
    return _feasible(report.value_bits, inst.alpha)


def compare(
    instances: Sequence[ProxyInstance],
    cap: int = DEFAULT_EXHAUSTIVE_CAP,
    n_jobs: Optional[int] = None,
) -> dict:
    """Run greedy and exact-min on each instance and tabulate the size ratio.

    A feasibility disagreement is reported with ``ratio = None`` and
    ``feasibility_mismatch = True``; rows where both are infeasible also
    carry ``ratio = None``.
    """
    rows = []
    for inst in instances:
        g = solve_greedy(inst, n_jobs=n_jobs)
        e = solve_exact_min(inst, cap=cap, n_jobs=n_jobs)
        mismatch = g.feasible != e.feasible
        ratio = None
        if g.feasible and e.feasible:
            ratio = 1.0 if e.size == 0 else g.size / e.size
        rows.append(
            {
                "name": inst.name,
                "n_functions": len(inst.functions),
                "alpha": inst.alpha,
                "greedy": _summary(g),
                "exact": _summary(e),
                "ratio": ratio,
                "feasibility_mismatch": mismatch,
            }
        )
    ratios = [r["ratio"] for r in rows if r["ratio"] is not None]
    return {
        "rows": rows,
        "aggregate": {
            "n_instances": len(rows),
            "n_feasible": len(ratios),
            "n_mismatch": sum(r["feasibility_mismatch"] for r in rows),
            "max_ratio": max(ratios) if ratios else None,
            "mean_ratio": math.fsum(ratios) / len(ratios) if ratios else None,
        },
    }


def _summary(r: SolveResult) -> dict:
    return {
        "feasible": r.feasible,
        "size": r.size,
        "subset": list(r.subset),
        "uncertainty_bits": r.achieved_uncertainty_bits,
        "estimator_calls": r.estimator_calls,
    }


@dataclass(frozen=True)
class RandomInstanceConfig:
    """Ranges are inclusive ``(low, high)`` pairs.

    ``alpha_rule`` is ``"zero"``, ``"half"`` (H(a)/2), ``"ninety"``
    (0.9 H(a)) or a number of bits.
    """

    n_attributes: tuple[int, int] = (2, 5)
    domain_size: tuple[int, int] = (2, 2)
    n_functions: tuple[int, int] = (1, 8)
    max_inputs: int = 2
    projection_prob: float = 0.5
    target_input_prob: float = 0.3
    output_size: tuple[int, int] = (2, 3)
    alpha_rule: Union[str, float] = "half"
    plant_target_projection: bool = False
    max_states: int = 2**24

    def __post_init__(self):
        for name in ("n_attributes", "domain_size", "n_functions", "output_size"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValidationError(f"{name}: low {lo} exceeds high {hi}")
        if self.n_attributes[0] < 2:
            raise ValidationError("random instances need at least 2 attributes")
        if self.domain_size[0] < 2 or self.output_size[0] < 1:
            raise ValidationError("domain sizes must be >= 2 and output sizes >= 1")
        if self.n_functions[0] < 1 and self.plant_target_projection:
            raise ValidationError("planting a target projection needs at least one function")
        if self.max_inputs < 1:
            raise ValidationError("max_inputs must be >= 1")
        for name in ("projection_prob", "target_input_prob"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1]")
        if isinstance(self.alpha_rule, str) and self.alpha_rule not in ALPHA_RULES:
            raise ValidationError(f"alpha_rule must be one of {sorted(ALPHA_RULES)} or a number")


ALPHA_RULES = {"zero": 0.0, "half": 0.5, "ninety": 0.9}


def random_instance(config: RandomInstanceConfig, seed: int) -> ProxyInstance:
    """Random tabular instance; identical for identical ``(config, seed)``.

    The joint PMF normalises i.i.d. uniform weights over the whole product
    domain. Projections never read the target unless one is planted; a table
    function mixes the target into its inputs with ``target_input_prob``.
    """
    rng = np.random.default_rng(seed)
    m = int(rng.integers(config.n_attributes[0], config.n_attributes[1] + 1))
    sizes = [int(rng.integers(config.domain_size[0], config.domain_size[1] + 1)) for _ in range(m)]
    n_states = math.prod(sizes)
    if n_states > config.max_states:
        raise SizeError(f"random product domain of {n_states} states exceeds the cap {config.max_states}")
    schema = AttributeSchema.from_pairs((f"a{i}", [str(v) for v in range(s)]) for i, s in enumerate(sizes))
    weights = rng.random(n_states)
    probs = weights / weights.sum()
    entries = zip(itertools.product(*(a.domain for a in schema.attributes)), probs.tolist())
    dist = TabularDistribution(schema, entries, max_states=config.max_states)

    target = int(rng.integers(0, m))
    others = [i for i in range(m) if i != target]
    nf = int(rng.integers(config.n_functions[0], config.n_functions[1] + 1))
    planted = int(rng.integers(0, nf)) if config.plant_target_projection else -1
    functions = []
    for j in range(nf):
        name = f"g{j}"
        if j == planted:
            functions.append(FunctionDef.projection(name, schema.names[target], schema))
        elif rng.random() < config.projection_prob:
            attr = schema.names[others[int(rng.integers(0, len(others)))]]
            functions.append(FunctionDef.projection(name, attr, schema))
        else:
            n_in = int(rng.integers(1, min(config.max_inputs, len(others)) + 1))
            picked = rng.choice(others, size=n_in, replace=False).tolist()
            if rng.random() < config.target_input_prob:
                picked[-1] = target
            picked.sort()
            inputs = [schema.names[i] for i in picked]
            z = int(rng.integers(config.output_size[0], config.output_size[1] + 1))
            out_domain = [str(v) for v in range(z)]
            keys = list(itertools.product(*(schema.domain(a) for a in inputs)))
            outs = rng.integers(0, z, size=len(keys)).tolist()
            functions.append(FunctionDef.table(name, inputs, out_domain, {k: out_domain[o] for k, o in zip(keys, outs)}))

    h = entropy(dist, schema.names[target])
    rule = config.alpha_rule
    alpha = ALPHA_RULES[rule] * h if isinstance(rule, str) else float(rule)
    return ProxyInstance(
        schema=schema,
        distribution=dist,
        functions=tuple(functions),
        target=schema.names[target],
        alpha=alpha,
        name=f"random_{seed}",
    )


def random_batch(n: int, seed: int, config: Optional[RandomInstanceConfig] = None) -> list[ProxyInstance]:
    """``n`` random instances with per-instance seeds derived from ``seed``.

    Without an explicit config, alpha cycles through zero, half and ninety
    percent of H(target).
    """
    seeds = np.random.SeedSequence(seed).generate_state(n).tolist() if n > 0 else []
    out = []
    for i, s in enumerate(seeds):
        cfg = config or RandomInstanceConfig(alpha_rule=("zero", "half", "ninety")[i % 3])
        out.append(random_instance(cfg, int(s)))
    return out
