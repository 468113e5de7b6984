"""Vertex cover as a proxy problem, plus an independent vertex-cover oracle.

A graph on ``n`` vertices becomes ``n + 1`` binary attributes: one indicator
per vertex, drawn uniformly, and a flag that is 1 with certainty when the
indicated vertices cover every edge and a fair coin otherwise. Function
``f_i`` projects vertex indicator ``i``; the target is the flag. Under the
point-conditioned estimator a subset has uncertainty 0 when its vertices
form a cover and 1 bit otherwise, so the 0.5-bit threshold separates them.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .estimation import POINT_CONDITIONED, EstimatorConfig, UncertaintyEstimator
from .exceptions import SizeError, ValidationError
from .instance import ProxyInstance
from .model import AttributeSchema, FunctionDef, JointDistribution

VC_ALPHA = 0.5
DEFAULT_VC_CAP = 24
BINARY = ("0", "1")


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if isinstance(self.num_vertices, bool) or not isinstance(self.num_vertices, (int, np.integer)):
            raise ValidationError("num_vertices must be an integer")
        if self.num_vertices < 1:
            raise ValidationError("a graph needs at least one vertex")
        edges = []
        seen = set()
        for e in self.edges:
            if len(e) != 2:
                raise ValidationError(f"edge {e!r} must have two endpoints")
            u, v = (int(x) for x in e)
            if u == v:
                raise ValidationError(f"self-loop on vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValidationError(f"edge ({u}, {v}) has an endpoint outside [0, {self.num_vertices})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValidationError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            edges.append((u, v))
        object.__setattr__(self, "num_vertices", int(self.num_vertices))
        object.__setattr__(self, "edges", tuple(edges))

    def is_cover(self, vertices: Iterable[int]) -> bool:
        chosen = set(vertices)
        return all(u in chosen or v in chosen for u, v in self.edges)

    def edge_masks(self) -> list[int]:
        return [(1 << u) | (1 << v) for u, v in self.edges]


def vertex_names(n: int) -> list[str]:
    return [f"v{i}" for i in range(n)]


TARGET_NAME = "covered"


class VertexCoverDistribution(JointDistribution):
    """Vertex indicators i.i.d. uniform; the flag is 1 on covers, a fair coin elsewhere."""

    kind = "vc_reduction"
    enumerable = True

    def __init__(self, graph: Graph, schema: AttributeSchema | None = None):
        expected = vc_schema(graph.num_vertices)
        if schema is not None and schema != expected:
            raise ValidationError("vc_reduction needs binary attributes v0..v{n-1} followed by 'covered'")
        super().__init__(expected)
        self.graph = graph
        if graph.num_vertices > DEFAULT_VC_CAP:
            raise SizeError(f"vc_reduction is capped at {DEFAULT_VC_CAP} vertices")
        codes = np.arange(2**graph.num_vertices, dtype=np.int64)
        cover = np.ones(codes.shape, dtype=bool)
        for m in graph.edge_masks():
            cover &= (codes & m) != 0
        self._cover = cover

    def _covers(self, bits: np.ndarray) -> np.ndarray:
        weights = 1 << np.arange(bits.shape[1], dtype=np.int64)
        return self._cover[bits @ weights]

    def sample_indices(self, n, rng):
        nv = self.graph.num_vertices
        bits = rng.integers(0, 2, size=(n, nv), dtype=np.int64)
        coin = rng.integers(0, 2, size=n, dtype=np.int64)
        flag = np.where(self._covers(bits), 1, coin)
        return np.concatenate([bits, flag[:, None]], axis=1)

    def _build_support(self):
        nv = self.graph.num_vertices
        rows, probs = [], []
        base = 1.0 / 2**nv
        for bits in itertools.product((0, 1), repeat=nv):
            code = sum(b << i for i, b in enumerate(bits))
            if self._cover[code]:
                rows.append(bits + (1,))
                probs.append(base)
            else:
                rows.append(bits + (0,))
                probs.append(base / 2)
                rows.append(bits + (1,))
                probs.append(base / 2)
        return np.array(rows, dtype=np.int64), np.array(probs)

    def to_json(self):
        return {
            "kind": "vc_reduction",
            "num_vertices": self.graph.num_vertices,
            "edges": [list(e) for e in self.graph.edges],
        }


def vc_schema(n: int) -> AttributeSchema:
    return AttributeSchema.from_pairs([(name, BINARY) for name in vertex_names(n)] + [(TARGET_NAME, BINARY)])


def encode_vertex_cover(g: Graph, k: int | None = None) -> ProxyInstance:
    """Build the proxy instance whose decision answer equals "g has a cover of size <= k".

    ``k`` may be 0 (only the edgeless graph qualifies) or omitted for the
    minimisation variant.
    """
    if k is not None and not (0 <= k <= g.num_vertices):
        raise ValidationError(f"k must lie in [0, {g.num_vertices}], got {k}")
    dist = VertexCoverDistribution(g)
    schema = dist.schema
    functions = tuple(FunctionDef.projection(f"f{i}", name, schema) for i, name in enumerate(vertex_names(g.num_vertices)))
    return ProxyInstance(
        schema=schema,
        distribution=dist,
        functions=functions,
        target=TARGET_NAME,
        alpha=VC_ALPHA,
        k=k,
        estimator=EstimatorConfig(kind=POINT_CONDITIONED),
        name=f"vc_n{g.num_vertices}_m{len(g.edges)}",
    )


def point_conditioned_uncertainty(inst: ProxyInstance, subset: Sequence[int]) -> float:
    """Entropy of the flag given subset vertices set to 1 and all other vertices to 0."""
    cfg = inst.estimator
    if cfg.kind != POINT_CONDITIONED:
        cfg = EstimatorConfig(mode=cfg.mode, samples=cfg.samples, seed=cfg.seed, kind=POINT_CONDITIONED)
    return UncertaintyEstimator(inst, cfg).report(subset).value_bits


def solve_vertex_cover_exact(g: Graph, cap: int = DEFAULT_VC_CAP) -> list[int]:
    """Minimum vertex cover, lexicographically smallest among minima."""
    if g.num_vertices > cap:
        raise SizeError(f"exact vertex cover is capped at {cap} vertices, graph has {g.num_vertices}")
    masks = g.edge_masks()
    for size in range(g.num_vertices + 1):
        for combo in itertools.combinations(range(g.num_vertices), size):
            chosen = sum(1 << v for v in combo)
            if all(chosen & m for m in masks):
                return list(combo)
    raise AssertionError("the full vertex set is always a cover")


def solve_vertex_cover_greedy2(g: Graph) -> list[int]:
    """Maximal-matching 2-approximation: take both ends of each uncovered edge, in edge order."""
    chosen: set[int] = set()
    for u, v in g.edges:
        if u not in chosen and v not in chosen:
            chosen.update((u, v))
    return sorted(chosen)


def read_edge_file(path) -> list[tuple[int, int]]:
    """Parse ``u v`` pairs, one per line; blank lines and ``#`` comments are skipped."""
    edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValidationError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            try:
                edges.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: vertex ids must be integers") from None
    return edges


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValidationError("a cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def star_graph(n: int) -> Graph:
    return Graph(n, tuple((0, i) for i in range(1, n)))


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p)."""
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(n), 2))
    keep = rng.random(len(pairs)) < p
    return Graph(n, tuple(e for e, k in zip(pairs, keep) if k))


def random_connected_graph(n: int, p: float, seed: int) -> Graph:
    """Random spanning tree plus each remaining pair with probability ``p``."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(n).tolist()
    edges = set()
    for i in range(1, n):
        u, v = order[i], order[int(rng.integers(0, i))]
        edges.add((min(u, v), max(u, v)))
    for e in itertools.combinations(range(n), 2):
        if e not in edges and rng.random() < p:
            edges.add(e)
    return Graph(n, tuple(sorted(edges)))
