"""Find API-proxy subsets: functions whose joint output pins down a protected attribute."""

__version__ = "0.1.0"

from .estimation import (
    EstimatorConfig,
    UncertaintyEstimator,
    UncertaintyReport,
    entropy,
    mutual_information,
    uncertainty,
)
from .exceptions import (
    CatalogError,
    EstimationError,
    ProxyFinderError,
    SchemaError,
    SizeError,
    UnsupportedExactError,
    ValidationError,
)
from .instance import ProxyInstance
from .model import (
    Attribute,
    AttributeSchema,
    FunctionDef,
    JointDistribution,
    ProductDistribution,
    Projection,
    TableBody,
    TabularDistribution,
    enumerate_support,
    evaluate_function,
    sample,
)
from .reductions import (
    Graph,
    VertexCoverDistribution,
    encode_vertex_cover,
    point_conditioned_uncertainty,
    solve_vertex_cover_exact,
    solve_vertex_cover_greedy2,
)
from .scenarios import build_scenario, scenario_names
from .serialize import instance_from_json, instance_to_json, load_scenario, save_scenario
from .solvers import (
    RandomInstanceConfig,
    SolveResult,
    compare,
    random_instance,
    solve_decision,
    solve_exact_min,
    solve_greedy,
)


def __getattr__(name):
    # keeps scikit-learn off the import path of the CLI
    if name == "ProxySelector":
        from .selector import ProxySelector

        return ProxySelector
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
