"""Sparse low-stretch subgraphs of directed disk graphs.

A disk graph puts a directed edge ``p -> q`` whenever the distance from p to
q is at most p's radius.  This package constructs ``(1 + eps)``-spanners of
such graphs over doubling metrics, the relaxed variant that may borrow edges
available only after radii are inflated by ``1 + eps``, the engineered
instance family showing the unrelaxed problem admits no sparse spanner at
all, and the certification oracles used to check every claim.
"""

from .errors import CertificationError, ConstructionError, DomainError, UsageError
from .metric import (
    REL_TOL,
    DoublingEstimate,
    Metric,
    MetricValidation,
    PivotSet,
    approx_equal,
    estimate_doubling_constant,
    metric_closure,
    nearest_pivot,
    validate_metric,
)
from .diskgraph import (
    DiskGraph,
    LevelStructure,
    RadiusAssignment,
    build_disk_graph,
    edge_level,
    inflate_radii,
    level_structure,
    normalize,
    point_level,
)
from .spanner import (
    BlockedEdge,
    Params,
    Spanner,
    SpannerEdge,
    available_kernels,
    close_neighborhood,
    default_gamma,
    disk_spanner,
)
from .relaxed import (
    PrunePointTrace,
    PruneTrace,
    RelaxedSpanner,
    build_relaxed_spanner,
    prune,
)
from .adversarial import (
    LowerBoundInstance,
    NonSparsifiableReport,
    build_lower_bound_instance,
    doubling_profile,
    verify_non_sparsifiable,
)
from .oracle import (
    SizeReport,
    StretchReport,
    certify_stretch,
    enumerate_shortest_paths,
    shortest_paths_from,
    size_report,
)
from .files import (
    Instance,
    deserialize_instance,
    read_instance,
    read_spanner,
    serialize_instance,
    write_instance,
)
from .families import (
    FAMILIES,
    gen_euclid_random,
    gen_lowerbound,
    gen_multiscale_chain,
    gen_unitdisk,
    generate,
)

__version__ = "0.1.0"

__all__ = [
    "REL_TOL",
    "approx_equal",
    "Metric",
    "MetricValidation",
    "validate_metric",
    "metric_closure",
    "PivotSet",
    "nearest_pivot",
    "DoublingEstimate",
    "estimate_doubling_constant",
    "RadiusAssignment",
    "inflate_radii",
    "DiskGraph",
    "build_disk_graph",
    "normalize",
    "LevelStructure",
    "level_structure",
    "edge_level",
    "point_level",
    "Params",
    "default_gamma",
    "SpannerEdge",
    "BlockedEdge",
    "Spanner",
    "disk_spanner",
    "close_neighborhood",
    "available_kernels",
    "PrunePointTrace",
    "PruneTrace",
    "RelaxedSpanner",
    "build_relaxed_spanner",
    "prune",
    "LowerBoundInstance",
    "NonSparsifiableReport",
    "build_lower_bound_instance",
    "doubling_profile",
    "verify_non_sparsifiable",
    "SizeReport",
    "StretchReport",
    "certify_stretch",
    "enumerate_shortest_paths",
    "shortest_paths_from",
    "size_report",
    "Instance",
    "deserialize_instance",
    "read_instance",
    "read_spanner",
    "serialize_instance",
    "write_instance",
    "FAMILIES",
    "gen_euclid_random",
    "gen_lowerbound",
    "gen_multiscale_chain",
    "gen_unitdisk",
    "generate",
    "UsageError",
    "DomainError",
    "ConstructionError",
    "CertificationError",
    "__version__",
]
