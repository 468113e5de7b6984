from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional

from .estimation import EstimatorConfig
from .exceptions import ValidationError
from .model import AttributeSchema, FunctionDef, JointDistribution


@dataclass(frozen=True)
class ProxyInstance:
    """A complete proxy-discovery problem.

    Find a subset of ``functions`` (optionally of size at most ``k``) whose
    joint output leaves at most ``alpha`` bits of uncertainty about
    ``target`` under ``distribution``.
    """

    schema: AttributeSchema
    distribution: JointDistribution
    functions: tuple[FunctionDef, ...]
    target: str
    alpha: float
    k: Optional[int] = None
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        if self.distribution.schema != self.schema:
            raise ValidationError("distribution schema differs from the instance schema")
        self.schema.position(self.target)
        for f in self.functions:
            f.validate(self.schema)
        names = [f.name for f in self.functions]
        if len(set(names)) != len(names):
            raise ValidationError("function names must be unique")
        alpha = float(self.alpha)
        if not math.isfinite(alpha) or alpha < 0:
            raise ValidationError(f"alpha must be a finite number >= 0, got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        if self.k is not None:
            if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 0:
                raise ValidationError(f"k must be a non-negative integer, got {self.k!r}")
            if self.k > len(self.functions):
                raise ValidationError(f"k={self.k} exceeds the number of functions ({len(self.functions)})")
        if not isinstance(self.estimator, EstimatorConfig):
            raise ValidationError("estimator must be an EstimatorConfig")
        if self.estimator.mode == "exact" and not self.distribution.enumerable:
            raise ValidationError(f"exact estimation needs an enumerable distribution, got {self.distribution.kind}")

    @property
    def function_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.functions)

    def function_index(self, name: str) -> int:
        try:
            return self.function_names.index(name)
        except ValueError:
            raise ValidationError(f"no function named {name!r}") from None

    def replace(self, **changes) -> "ProxyInstance":
        """Copy with overrides; the copy is re-validated."""
        return dataclasses.replace(self, **changes)
