"""Entropy, conditional entropy and mutual information for function subsets.

All quantities are in bits. The uncertainty of the target given a subset of
functions is the conditional entropy ``H(a | X_S)``, where ``X_S`` is the
joint output of the functions in ``S``; it never increases as ``S`` grows and
equals ``H(a) - I(a; X_S)``. Two evaluation modes exist: exact enumeration of
the distribution's support, and the plug-in estimator over i.i.d. samples.

The point-conditioned kind instead conditions on a single assignment of the
indicator attributes (inputs of the chosen functions set to the "on" label,
all other indicators "off"), which is what the vertex-cover encoding needs.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

import numpy as np

from .exceptions import EstimationError, UnsupportedExactError, ValidationError
from .model import JointDistribution

if TYPE_CHECKING:
    from .instance import ProxyInstance

EXACT = "exact"
EMPIRICAL = "empirical"
CONDITIONAL_ENTROPY = "conditional_entropy"
POINT_CONDITIONED = "point_conditioned"
DEFAULT_SAMPLES = 100_000


@dataclass(frozen=True)
class EstimatorConfig:
    """How uncertainty is evaluated.

    ``mode`` is ``"exact"`` or ``"empirical"``; ``samples`` and ``seed`` only
    matter in empirical mode. ``kind`` selects plain conditional entropy or
    the point-conditioned variant, whose ``on_label``/``off_label``/
    ``indicators`` describe the conditioning point.
    """

    mode: str = EXACT
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    kind: str = CONDITIONAL_ENTROPY
    on_label: str = "1"
    off_label: str = "0"
    indicators: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.mode not in (EXACT, EMPIRICAL):
            raise ValidationError(f"estimator mode must be 'exact' or 'empirical', got {self.mode!r}")
        if self.kind not in (CONDITIONAL_ENTROPY, POINT_CONDITIONED):
            raise ValidationError(f"unknown estimator kind {self.kind!r}")
        if isinstance(self.samples, bool) or not isinstance(self.samples, (int, np.integer)) or self.samples < 1:
            raise ValidationError("empirical sample count must be an integer >= 1")
        if self.indicators is not None:
            object.__setattr__(self, "indicators", tuple(self.indicators))

    def to_json(self) -> dict:
        out = {"mode": self.mode, "kind": self.kind}
        if self.mode == EMPIRICAL:
            out.update(samples=int(self.samples), seed=int(self.seed))
        if self.kind == POINT_CONDITIONED:
            out.update(on=self.on_label, off=self.off_label)
            if self.indicators is not None:
                out["indicators"] = list(self.indicators)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "EstimatorConfig":
        known = {"mode", "kind", "samples", "seed", "on", "off", "indicators"}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown estimator keys {sorted(unknown)}")
        return cls(
            mode=data.get("mode", EXACT),
            samples=data.get("samples", DEFAULT_SAMPLES),
            seed=data.get("seed", 0),
            kind=data.get("kind", CONDITIONAL_ENTROPY),
            on_label=str(data.get("on", "1")),
            off_label=str(data.get("off", "0")),
            indicators=tuple(data["indicators"]) if data.get("indicators") is not None else None,
        )


@dataclass(frozen=True)
class UncertaintyReport:
    subset: tuple[int, ...]
    value_bits: float
    base_entropy_bits: float
    mutual_information_bits: float
    raw_mutual_information_bits: float
    mode: str
    kind: str
    sample_count: int

    def to_json(self) -> dict:
        return {
            "subset": list(self.subset),
            "value_bits": self.value_bits,
            "base_entropy_bits": self.base_entropy_bits,
            "mutual_information_bits": self.mutual_information_bits,
            "raw_mutual_information_bits": self.raw_mutual_information_bits,
            "mode": self.mode,
            "kind": self.kind,
            "sample_count": self.sample_count,
        }


def entropy_of(probs) -> float:
    """Shannon entropy in bits of a probability vector; zero entries contribute nothing."""
    p = np.asarray(probs, dtype=float)
    p = p[p > 0]
    if p.size == 0:
        return 0.0
    return max(0.0, float(-np.sum(p * np.log2(p))))


def _group(cols: list[np.ndarray], sizes: list[int]) -> np.ndarray:
    """Dense group ids for the rows of the given categorical columns."""
    n = cols[0].shape[0] if cols else 0
    if not cols:
        return np.zeros(n, dtype=np.int64)
    if math.prod(sizes) < 2**62:
        code = np.zeros(n, dtype=np.int64)
        for c, s in zip(cols, sizes):
            code = code * s + c
        _, inv = np.unique(code, return_inverse=True)
    else:
        _, inv = np.unique(np.stack(cols, axis=1), axis=0, return_inverse=True)
    return inv.reshape(-1)


def conditional_entropy_of(target: np.ndarray, given: list[np.ndarray], given_sizes: list[int], n_target: int, weights: np.ndarray) -> float:
    """``H(target | given)`` in bits for weighted rows; ``weights`` must sum to 1."""
    if not given:
        return entropy_of(np.bincount(target, weights=weights, minlength=n_target))
    gx = _group(given, given_sizes)
    gxa = gx * n_target + target
    ux, inv = np.unique(gxa, return_inverse=True)
    p_joint = np.bincount(inv.reshape(-1), weights=weights)
    p_x = np.bincount(gx, weights=weights)
    p_x_of_joint = p_x[ux // n_target]
    mask = p_joint > 0
    terms = p_joint[mask] * np.log2(p_joint[mask] / p_x_of_joint[mask])
    return max(0.0, float(-np.sum(terms)))


def _check_subset(subset: Sequence[int], n_functions: int) -> tuple[int, ...]:
    out = []
    for i in subset:
        if isinstance(i, bool) or not isinstance(i, (int, np.integer)):
            raise ValidationError(f"function index {i!r} is not an integer")
        if not 0 <= i < n_functions:
            raise ValidationError(f"function index {i} out of range for {n_functions} functions")
        out.append(int(i))
    if len(set(out)) != len(out):
        raise ValidationError(f"subset {list(subset)} repeats a function index")
    return tuple(sorted(out))


def _require_enumerable(d: JointDistribution) -> None:
    if not d.enumerable:
        raise UnsupportedExactError(f"{d.kind} distribution cannot be enumerated exactly")


class UncertaintyEstimator:
    """Evaluates U(target, S) for one problem instance.

    Support arrays and compiled functions are built once; each call to
    ``report`` is independent, so concurrent calls are safe. In empirical
    mode every subset gets its own sample stream seeded from
    ``(seed, subset)``, which makes results independent of evaluation order.
    """

    def __init__(self, instance: "ProxyInstance", config: Optional[EstimatorConfig] = None):
        self.instance = instance
        self.config = config if config is not None else instance.estimator
        schema = instance.schema
        self.schema = schema
        self.distribution = instance.distribution
        self.target_col = schema.position(instance.target)
        self.n_target = len(schema.domain(instance.target))
        self.evaluators = [f.compile(schema) for f in instance.functions]
        self.output_sizes = [len(f.output_domain) for f in instance.functions]

        cfg = self.config
        if cfg.kind == POINT_CONDITIONED:
            names = cfg.indicators if cfg.indicators is not None else tuple(
                n for n in schema.names if n != instance.target
            )
            if instance.target in names:
                raise ValidationError("the target cannot be a conditioning indicator")
            self.indicator_cols = np.array([schema.position(n) for n in names], dtype=np.int64)
            self.on_idx = np.array([schema.label_index(n, cfg.on_label) for n in names], dtype=np.int64)
            self.off_idx = np.array([schema.label_index(n, cfg.off_label) for n in names], dtype=np.int64)
            self._indicator_pos = {n: j for j, n in enumerate(names)}

        if cfg.mode == EXACT:
            _require_enumerable(self.distribution)
            idx, p = self.distribution.support_arrays()
            self._idx = idx
            self._p = p
            self._target = idx[:, self.target_col]
            self._outputs = [ev(idx) for ev in self.evaluators]
            self._base = entropy_of(np.bincount(self._target, weights=p, minlength=self.n_target))

    def _sample(self, subset: tuple[int, ...]) -> np.ndarray:
        ss = np.random.SeedSequence(int(self.config.seed), spawn_key=(len(subset) + 1, *subset))
        return self.distribution.sample_indices(int(self.config.samples), np.random.default_rng(ss))

    def _point(self, subset: tuple[int, ...]) -> np.ndarray:
        point = self.off_idx.copy()
        for i in subset:
            for a in self.instance.functions[i].inputs:
                j = self._indicator_pos.get(a)
                if j is not None:
                    point[j] = self.on_idx[j]
        return point

    def report(self, subset: Sequence[int]) -> UncertaintyReport:
        s = _check_subset(subset, len(self.instance.functions))
        cfg = self.config
        if cfg.mode == EXACT:
            idx, p, target = self._idx, self._p, self._target
            outputs = [self._outputs[i] for i in s]
            base = self._base
            n_used = 0
        else:
            idx = self._sample(s)
            n_used = idx.shape[0]
            p = np.full(n_used, 1.0 / n_used)
            target = idx[:, self.target_col]
            outputs = [self.evaluators[i](idx) for i in s]
            base = entropy_of(np.bincount(target, minlength=self.n_target) / n_used)

        if cfg.kind == CONDITIONAL_ENTROPY:
            value = conditional_entropy_of(target, outputs, [self.output_sizes[i] for i in s], self.n_target, p)
            value = min(value, base)
            raw_mi = base - value
            mi = max(raw_mi, 0.0)
        else:
            point = self._point(s)
            match = np.all(idx[:, self.indicator_cols] == point, axis=1)
            if not match.any():
                raise EstimationError(f"conditioning point for subset {list(s)} has zero probability")
            value = entropy_of(
                np.bincount(target[match], weights=p[match], minlength=self.n_target) / p[match].sum()
            )
            raw_mi = mi = base - value
        return UncertaintyReport(
            subset=s,
            value_bits=value,
            base_entropy_bits=base,
            mutual_information_bits=mi,
            raw_mutual_information_bits=raw_mi,
            mode=cfg.mode,
            kind=cfg.kind,
            sample_count=n_used,
        )


def entropy(d: JointDistribution, attr: str, cfg: Optional[EstimatorConfig] = None) -> float:
    """Entropy in bits of one attribute's marginal."""
    cfg = cfg or EstimatorConfig()
    col = d.schema.position(attr)
    size = len(d.schema.domain(attr))
    if cfg.mode == EXACT:
        _require_enumerable(d)
        idx, p = d.support_arrays()
        return entropy_of(np.bincount(idx[:, col], weights=p, minlength=size))
    idx = d.sample_indices(int(cfg.samples), np.random.default_rng(int(cfg.seed)))
    return entropy_of(np.bincount(idx[:, col], minlength=size) / idx.shape[0])


def uncertainty(inst: "ProxyInstance", subset: Sequence[int], cfg: Optional[EstimatorConfig] = None) -> UncertaintyReport:
    """U(target, subset) together with H(target) and the information gained."""
    return UncertaintyEstimator(inst, cfg).report(subset)


def mutual_information(inst: "ProxyInstance", subset: Sequence[int], cfg: Optional[EstimatorConfig] = None) -> float:
    """I(target; joint output of ``subset``), clamped at zero."""
    return uncertainty(inst, subset, cfg).mutual_information_bits
