"""Scenario files: JSON documents describing a complete proxy instance.

Layout::

    {
      "schema": [{"name": ..., "domain": [...]}, ...],
      "distribution": {"kind": "table", "entries": [{"values": [...], "p": ...}]}
                    | {"kind": "product", "marginals": {attr: [p, ...]}}
                    | {"kind": "vc_reduction", "edges": [[u, v], ...], "num_vertices": n},
      "functions": [{"name", "inputs", "output_domain",
                     "body": {"kind": "projection"} | {"kind": "table", "map": [{"in": [...], "out": ...}]}}],
      "target": ..., "alpha": ..., "k": ..., "estimator": {...}
    }

``k``, ``estimator`` and ``name`` are optional. Labels are strings.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .estimation import POINT_CONDITIONED, EstimatorConfig
from .exceptions import ValidationError
from .instance import ProxyInstance
from .model import AttributeSchema, FunctionDef, Projection, ProductDistribution, TableBody, TabularDistribution
from .reductions import Graph, VertexCoverDistribution

FORMAT_VERSION = 1


def _require(data: dict, key: str, where: str):
    if key not in data:
        raise ValidationError(f"{where}: missing key {key!r}")
    return data[key]


def _distribution_from_json(schema: AttributeSchema, data: dict):
    kind = _require(data, "kind", "distribution")
    if kind == "table":
        entries = [
            (_require(e, "values", "table entry"), _require(e, "p", "table entry"))
            for e in _require(data, "entries", "distribution")
        ]
        return TabularDistribution(schema, entries)
    if kind == "product":
        return ProductDistribution(schema, _require(data, "marginals", "distribution"))
    if kind == "vc_reduction":
        graph = Graph(
            int(_require(data, "num_vertices", "distribution")),
            tuple(tuple(e) for e in _require(data, "edges", "distribution")),
        )
        return VertexCoverDistribution(graph, schema)
    raise ValidationError(f"unknown distribution kind {kind!r}")


def _function_from_json(data: dict) -> FunctionDef:
    name = _require(data, "name", "function")
    body = _require(data, "body", f"function {name!r}")
    kind = _require(body, "kind", f"body of {name!r}")
    if kind == "projection":
        parsed = Projection()
    elif kind == "table":
        mapping = {}
        for row in _require(body, "map", f"body of {name!r}"):
            key = tuple(str(v) for v in _require(row, "in", f"table row of {name!r}"))
            if key in mapping:
                raise ValidationError(f"table of {name!r} lists input {key} twice")
            mapping[key] = str(_require(row, "out", f"table row of {name!r}"))
        parsed = TableBody(mapping)
    else:
        raise ValidationError(f"function {name!r} has unknown body kind {kind!r}")
    return FunctionDef(
        str(name),
        tuple(_require(data, "inputs", f"function {name!r}")),
        tuple(_require(data, "output_domain", f"function {name!r}")),
        parsed,
    )


def instance_from_json(data: dict[str, Any]) -> ProxyInstance:
    if not isinstance(data, dict):
        raise ValidationError("a scenario must be a JSON object")
    schema = AttributeSchema.from_pairs(
        (_require(a, "name", "schema entry"), _require(a, "domain", "schema entry")) for a in _require(data, "schema", "scenario")
    )
    dist = _distribution_from_json(schema, _require(data, "distribution", "scenario"))
    functions = tuple(_function_from_json(f) for f in _require(data, "functions", "scenario"))
    if "estimator" in data and data["estimator"] is not None:
        estimator = EstimatorConfig.from_json(data["estimator"])
    elif dist.kind == "vc_reduction":
        estimator = EstimatorConfig(kind=POINT_CONDITIONED)
    else:
        estimator = EstimatorConfig()
    k = data.get("k")
    return ProxyInstance(
        schema=schema,
        distribution=dist,
        functions=functions,
        target=_require(data, "target", "scenario"),
        alpha=_require(data, "alpha", "scenario"),
        k=int(k) if k is not None else None,
        estimator=estimator,
        name=str(data.get("name", "")),
    )


def instance_to_json(inst: ProxyInstance) -> dict[str, Any]:
    out = {
        "name": inst.name,
        "schema": inst.schema.to_json(),
        "distribution": inst.distribution.to_json(),
        "functions": [f.to_json() for f in inst.functions],
        "target": inst.target,
        "alpha": inst.alpha,
    }
    if inst.k is not None:
        out["k"] = inst.k
    out["estimator"] = inst.estimator.to_json()
    return out


def dumps(data: Any) -> str:
    """Canonical JSON text used for every file this package writes."""
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def load_scenario(path: Union[str, Path]) -> ProxyInstance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read scenario {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    inst = instance_from_json(data)
    if not inst.name:
        inst = inst.replace(name=Path(path).stem)
    return inst


def save_scenario(inst: ProxyInstance, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(instance_to_json(inst)))
