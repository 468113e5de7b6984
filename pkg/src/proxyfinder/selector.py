"""scikit-learn front end: pick the columns of ``X`` that act as a proxy for ``y``.

Each column is treated as the output of one API and the empirical joint
distribution of ``(X, y)`` as the attribute distribution, so the fitted
selection is the plug-in answer to "which observations pin down ``y`` to
within ``alpha`` bits".
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from .estimation import entropy
from .instance import ProxyInstance
from .model import AttributeSchema, FunctionDef, TabularDistribution
from .solvers import solve_exact_min, solve_greedy

_PAD = "__unseen__"


def _labels(column: np.ndarray) -> tuple[np.ndarray, list[str]]:
    as_str = np.asarray(column).astype(str)
    domain, codes = np.unique(as_str, return_inverse=True)
    domain = domain.tolist()
    if len(domain) < 2:
        domain.append(_PAD)
    return codes.reshape(-1), domain


def empirical_instance(X, y, alpha: float = 0.0, feature_names=None) -> ProxyInstance:
    """Proxy instance whose distribution is the empirical joint of ``(X, y)``."""
    X = np.asarray(X, dtype=object)
    y = np.asarray(y, dtype=object)
    n, d = X.shape
    names = list(feature_names) if feature_names is not None else [f"x{i}" for i in range(d)]
    cols, domains = zip(*(_labels(X[:, j]) for j in range(d))) if d else ((), ())
    y_codes, y_domain = _labels(y)
    attr_names = [f"attr:{nm}" for nm in names] + ["target"]
    schema = AttributeSchema.from_pairs(zip(attr_names, list(domains) + [y_domain]))
    stacked = np.stack(list(cols) + [y_codes], axis=1)
    rows, counts = np.unique(stacked, axis=0, return_counts=True)
    entries = [(schema.decode(r), c / n) for r, c in zip(rows, counts)]
    dist = TabularDistribution(schema, entries, max_states=None)
    functions = tuple(FunctionDef.projection(str(nm), a, schema) for nm, a in zip(names, attr_names[:-1]))
    return ProxyInstance(schema, dist, functions, "target", alpha, name="empirical")


class ProxySelector(SelectorMixin, BaseEstimator):
    """Select a small set of discrete features that leaves at most ``alpha`` bits about ``y``.

    Parameters
    ----------
    alpha : float, default=0.0
        Residual conditional entropy allowed, in bits, or as a fraction of
        H(y) when ``relative=True``.
    relative : bool, default=False
        Interpret ``alpha`` as a fraction of the target entropy.
    method : {"greedy", "exact"}, default="greedy"
        Greedy mutual-information selection or exhaustive minimum search.
    n_jobs : int, optional
        Threads used to score candidate subsets.

    Attributes
    ----------
    support_ : ndarray of bool
        Mask of selected features.
    selected_ : list of int
        Selected feature indices in the order the solver added them.
    feasible_ : bool
        Whether the threshold was met. When it was not, no feature is selected.
    uncertainty_ : float
        Residual entropy of ``y`` given the selection (given all features when infeasible).
    target_entropy_ : float
        Empirical H(y) in bits.
    """

    def __init__(self, alpha=0.0, relative=False, method="greedy", n_jobs=None):
        self.alpha = alpha
        self.relative = relative
        self.method = method
        self.n_jobs = n_jobs

    def fit(self, X, y):
        X, y = validate_data(self, X, y, dtype=None, ensure_all_finite=False)
        if self.method not in ("greedy", "exact"):
            raise ValueError(f"method must be 'greedy' or 'exact', got {self.method!r}")
        names = getattr(self, "feature_names_in_", None)
        inst = empirical_instance(X, y, 0.0, names)
        h = entropy(inst.distribution, inst.target)
        alpha = float(self.alpha) * h if self.relative else float(self.alpha)
        inst = inst.replace(alpha=alpha)
        if self.method == "greedy":
            result = solve_greedy(inst, n_jobs=self.n_jobs)
            order = list(result.selection_order) if result.feasible else []
        else:
            result = solve_exact_min(inst, n_jobs=self.n_jobs)
            order = list(result.subset)
        mask = np.zeros(X.shape[1], dtype=bool)
        mask[list(result.subset)] = True
        self.support_ = mask
        self.selected_ = order
        self.feasible_ = result.feasible
        self.uncertainty_ = result.achieved_uncertainty_bits
        self.target_entropy_ = h
        self.result_ = result
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "support_")
        return self.support_

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.input_tags.allow_nan = True
        tags.input_tags.string = True
        tags.target_tags.required = True
        return tags
