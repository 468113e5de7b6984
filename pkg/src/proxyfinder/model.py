"""Attributes, joint distributions over them, and functions of attribute subsets.

Assignments are stored canonically as integer index vectors in schema
attribute order. Public helpers accept and return string labels.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .exceptions import SchemaError, SizeError, UnsupportedExactError, ValidationError

DEFAULT_MAX_STATES = 2**24
NORMALIZATION_TOL = 1e-6
# sums this close to 1 are kept as given so that files round-trip bit-identically
EXACT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Attribute:
    name: str
    domain: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(str(v) for v in self.domain))


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered collection of named attributes with finite label domains."""

    attributes: tuple[Attribute, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        attrs = []
        for a in self.attributes:
            if not isinstance(a, Attribute):
                name, domain = a
                a = Attribute(str(name), tuple(domain))
            attrs.append(a)
        attrs = tuple(attrs)
        if not attrs:
            raise ValidationError("schema needs at least one attribute")
        names = [a.name for a in attrs]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate attribute names in {names}")
        for a in attrs:
            if len(a.domain) < 2:
                raise ValidationError(f"attribute {a.name!r} needs a domain of size >= 2")
            if len(set(a.domain)) != len(a.domain):
                raise ValidationError(f"duplicate labels in domain of {a.name!r}")
        object.__setattr__(self, "attributes", attrs)
        index = {a.name: (i, {v: j for j, v in enumerate(a.domain)}) for i, a in enumerate(attrs)}
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, Sequence[str]]]) -> "AttributeSchema":
        return cls(tuple(Attribute(str(n), tuple(d)) for n, d in pairs))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(a.domain) for a in self.attributes)

    def __len__(self):
        return len(self.attributes)

    def __contains__(self, name):
        return name in self._index

    def position(self, name: str) -> int:
        try:
            return self._index[name][0]
        except KeyError:
            raise SchemaError(f"unknown attribute {name!r}") from None

    def domain(self, name: str) -> tuple[str, ...]:
        return self.attributes[self.position(name)].domain

    def label_index(self, name: str, label) -> int:
        pos = self.position(name)
        try:
            return self._index[name][1][str(label)]
        except KeyError:
            raise SchemaError(
                f"label {label!r} is not in the domain of {name!r}: {self.attributes[pos].domain}"
            ) from None

    def product_size(self) -> int:
        return math.prod(self.sizes)

    def encode(self, assignment: Union[Mapping[str, str], Sequence[str]]) -> tuple[int, ...]:
        """Convert a full assignment (mapping or label sequence) to an index vector."""
        if isinstance(assignment, Mapping):
            extra = set(assignment) - set(self.names)
            if extra:
                raise SchemaError(f"unknown attributes {sorted(extra)}")
            missing = [n for n in self.names if n not in assignment]
            if missing:
                raise SchemaError(f"assignment is missing attributes {missing}")
            values = [assignment[n] for n in self.names]
        else:
            values = list(assignment)
            if len(values) != len(self):
                raise SchemaError(f"assignment has {len(values)} values, schema has {len(self)} attributes")
        return tuple(self.label_index(n, v) for n, v in zip(self.names, values))

    def decode(self, indices: Sequence[int]) -> tuple[str, ...]:
        return tuple(a.domain[int(i)] for a, i in zip(self.attributes, indices))

    def to_json(self) -> list[dict]:
        return [{"name": a.name, "domain": list(a.domain)} for a in self.attributes]


def _inverse_cdf(probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probs)
    out = np.searchsorted(cdf, u, side="right")
    # guards against u landing above a cdf tail that rounds below 1
    return np.minimum(out, len(probs) - 1)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class JointDistribution:
    """A distribution over the product domain of a schema.

    Subclasses implement ``sample_indices`` and, when a closed form exists,
    ``_build_support``.
    """

    kind = "abstract"
    enumerable = False

    def __init__(self, schema: AttributeSchema):
        if not isinstance(schema, AttributeSchema):
            raise ValidationError("schema must be an AttributeSchema")
        self.schema = schema
        self._support = None

    def sample_indices(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def _build_support(self) -> tuple[np.ndarray, np.ndarray]:
        raise UnsupportedExactError(f"{self.kind} distribution has no closed form for exact enumeration")

    def support_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(indices, probs)`` for every positive-probability assignment.

        ``indices`` has shape ``(S, m)`` in canonical (lexicographic) order.
        """
        if self._support is None:
            idx, p = self._build_support()
            self._support = (_freeze(np.ascontiguousarray(idx, dtype=np.int64)), _freeze(np.asarray(p, dtype=float)))
        return self._support

    def to_json(self) -> dict:
        raise NotImplementedError


class TabularDistribution(JointDistribution):
    """Explicit probability table over full assignments.

    Entries are validated, renormalized when their sum is off by more than
    rounding error, and stored in canonical order; sampling walks that order
    by inverse CDF.
    """

    kind = "table"
    enumerable = True

    def __init__(self, schema, entries, max_states: int | None = DEFAULT_MAX_STATES):
        super().__init__(schema)
        if max_states is not None and schema.product_size() > max_states:
            raise SizeError(
                f"product domain has {schema.product_size()} states, above the tabular cap of {max_states}"
            )
        rows = {}
        for assignment, p in entries:
            key = schema.encode(assignment)
            p = float(p)
            if not (p >= 0.0) or not math.isfinite(p):
                raise ValidationError(f"probability {p!r} for {assignment!r} must be finite and >= 0")
            if key in rows:
                raise ValidationError(f"duplicate table entry {schema.decode(key)}")
            rows[key] = p
        if not rows:
            raise ValidationError("table distribution has no entries")
        total = math.fsum(rows.values())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValidationError(f"table probabilities sum to {total!r}, not 1")
        if abs(total - 1.0) <= EXACT_SUM_TOL:
            total = 1.0
        keys = sorted(rows)
        self._keys = _freeze(np.array(keys, dtype=np.int64).reshape(len(keys), len(schema)))
        self._probs = _freeze(np.array([rows[k] / total for k in keys], dtype=float))

    @property
    def entries(self) -> list[tuple[tuple[str, ...], float]]:
        return [(self.schema.decode(k), float(p)) for k, p in zip(self._keys, self._probs)]

    def sample_indices(self, n, rng):
        rows = _inverse_cdf(self._probs, rng.random(n))
        return self._keys[rows]

    def _build_support(self):
        keep = self._probs > 0
        return self._keys[keep], self._probs[keep]

    def to_json(self):
        return {
            "kind": "table",
            "entries": [{"values": list(v), "p": p} for v, p in self.entries],
        }


class ProductDistribution(JointDistribution):
    """Independent attributes, each with its own categorical marginal."""

    kind = "product"
    enumerable = True

    def __init__(self, schema, marginals: Mapping[str, Sequence[float]], max_states: int | None = DEFAULT_MAX_STATES):
        super().__init__(schema)
        unknown = set(marginals) - set(schema.names)
        if unknown:
            raise SchemaError(f"marginals given for unknown attributes {sorted(unknown)}")
        self.max_states = max_states
        probs = []
        for a in schema.attributes:
            if a.name not in marginals:
                raise ValidationError(f"no marginal for attribute {a.name!r}")
            p = np.asarray(marginals[a.name], dtype=float)
            if p.shape != (len(a.domain),):
                raise ValidationError(f"marginal of {a.name!r} needs {len(a.domain)} probabilities")
            if not np.all(np.isfinite(p)) or np.any(p < 0):
                raise ValidationError(f"marginal of {a.name!r} has negative or non-finite entries")
            total = math.fsum(p)
            if abs(total - 1.0) > NORMALIZATION_TOL:
                raise ValidationError(f"marginal of {a.name!r} sums to {total!r}, not 1")
            if abs(total - 1.0) > EXACT_SUM_TOL:
                p = p / total
            probs.append(_freeze(p))
        self.marginals = tuple(probs)

    def sample_indices(self, n, rng):
        u = rng.random((n, len(self.schema)))
        cols = [_inverse_cdf(p, u[:, j]) for j, p in enumerate(self.marginals)]
        return np.stack(cols, axis=1).astype(np.int64)

    def _build_support(self):
        positive = [np.flatnonzero(p > 0) for p in self.marginals]
        n_states = math.prod(len(s) for s in positive)
        if self.max_states is not None and n_states > self.max_states:
            raise UnsupportedExactError(
                f"product support has {n_states} states, above the enumeration cap of {self.max_states}"
            )
        keys = np.array(list(itertools.product(*positive)), dtype=np.int64).reshape(n_states, len(self.schema))
        p = np.ones(n_states)
        for j, marg in enumerate(self.marginals):
            p = p * marg[keys[:, j]]
        return keys, p

    def to_json(self):
        return {
            "kind": "product",
            "marginals": {a.name: [float(x) for x in p] for a, p in zip(self.schema.attributes, self.marginals)},
        }


@dataclass(frozen=True)
class Projection:
    """Identity on a single input attribute."""

    kind = "projection"


@dataclass(frozen=True)
class TableBody:
    """Total lookup table from input label tuples to an output label."""

    mapping: Mapping[tuple[str, ...], str]
    kind = "table"

    def __post_init__(self):
        object.__setattr__(
            self, "mapping", {tuple(str(v) for v in k): str(out) for k, out in dict(self.mapping).items()}
        )


@dataclass(frozen=True)
class FunctionDef:
    """A deterministic function reading ``inputs`` and producing a label in ``output_domain``."""

    name: str
    inputs: tuple[str, ...]
    output_domain: tuple[str, ...]
    body: Union[Projection, TableBody]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "output_domain", tuple(str(v) for v in self.output_domain))

    @classmethod
    def projection(cls, name: str, attribute: str, schema: AttributeSchema) -> "FunctionDef":
        return cls(name, (attribute,), schema.domain(attribute), Projection())

    @classmethod
    def table(cls, name: str, inputs: Sequence[str], output_domain: Sequence[str], mapping) -> "FunctionDef":
        return cls(name, tuple(inputs), tuple(output_domain), TableBody(mapping))

    def validate(self, schema: AttributeSchema) -> None:
        if not self.inputs:
            raise ValidationError(f"function {self.name!r} reads no attributes")
        if len(set(self.inputs)) != len(self.inputs):
            raise ValidationError(f"function {self.name!r} lists an input twice")
        for a in self.inputs:
            schema.position(a)
        if not self.output_domain or len(set(self.output_domain)) != len(self.output_domain):
            raise ValidationError(f"function {self.name!r} needs a non-empty output domain of unique labels")
        if isinstance(self.body, Projection):
            if len(self.inputs) != 1:
                raise ValidationError(f"projection {self.name!r} must read exactly one attribute")
            if self.output_domain != schema.domain(self.inputs[0]):
                raise ValidationError(f"projection {self.name!r} must output the domain of {self.inputs[0]!r}")
        elif isinstance(self.body, TableBody):
            domains = [schema.domain(a) for a in self.inputs]
            expected = set(itertools.product(*domains))
            keys = set(self.body.mapping)
            if keys - expected:
                bad = sorted(keys - expected)[0]
                raise SchemaError(f"table of {self.name!r} has an out-of-domain input {bad}")
            if expected - keys:
                missing = sorted(expected - keys)[0]
                raise ValidationError(f"table of {self.name!r} is not total; missing input {missing}")
            outs = set(self.body.mapping.values()) - set(self.output_domain)
            if outs:
                raise ValidationError(f"table of {self.name!r} maps outside its output domain: {sorted(outs)}")
        else:
            raise ValidationError(f"function {self.name!r} has an unknown body {self.body!r}")

    def compile(self, schema: AttributeSchema):
        """Return a vectorized evaluator mapping an ``(N, m)`` index matrix to output indices."""
        cols = [schema.position(a) for a in self.inputs]
        if isinstance(self.body, Projection):
            col = cols[0]
            return lambda idx: idx[:, col]
        domains = [schema.domain(a) for a in self.inputs]
        out_index = {v: j for j, v in enumerate(self.output_domain)}
        lookup = np.array(
            [out_index[self.body.mapping[key]] for key in itertools.product(*domains)], dtype=np.int64
        )
        strides = np.array(
            [math.prod(len(d) for d in domains[i + 1 :]) for i in range(len(domains))], dtype=np.int64
        )
        cols_arr = np.array(cols)

        def evaluate(idx):
            return lookup[idx[:, cols_arr] @ strides]

        return evaluate

    def to_json(self) -> dict:
        if isinstance(self.body, Projection):
            body = {"kind": "projection"}
        else:
            body = {
                "kind": "table",
                "map": [{"in": list(k), "out": v} for k, v in sorted(self.body.mapping.items())],
            }
        return {"name": self.name, "inputs": list(self.inputs), "output_domain": list(self.output_domain), "body": body}


def evaluate_function(f: FunctionDef, assignment: Mapping[str, str], schema: AttributeSchema) -> str:
    """Apply ``f`` to a full attribute assignment and return its output label."""
    idx = schema.encode(assignment)
    if isinstance(f.body, Projection):
        return schema.domain(f.inputs[0])[idx[schema.position(f.inputs[0])]]
    key = tuple(schema.domain(a)[idx[schema.position(a)]] for a in f.inputs)
    try:
        return f.body.mapping[key]
    except KeyError:
        raise ValidationError(f"table of {f.name!r} has no entry for {key}") from None


def sample(d: JointDistribution, n: int, seed: int) -> list[tuple[str, ...]]:
    """Draw ``n`` i.i.d. full assignments, reproducibly for a fixed seed."""
    if n < 1:
        raise ValidationError("sample count must be >= 1")
    rng = np.random.default_rng(seed)
    return [d.schema.decode(row) for row in d.sample_indices(n, rng)]


def enumerate_support(d: JointDistribution) -> list[tuple[tuple[str, ...], float]]:
    """List every positive-probability assignment once, with its probability."""
    idx, p = d.support_arrays()
    return [(d.schema.decode(row), float(q)) for row, q in zip(idx, p)]
