"""Spectral clustering by normalized modularity, with regularity certificates."""

from .errors import (
    BadK,
    BadSize,
    Disconnected,
    DuplicateEdge,
    EigenFailure,
    InternalNumericalError,
    ModspecError,
    NegativeWeight,
    NoGap,
    NoSeparation,
    ParseError,
    SelfLoop,
    TooLarge,
    WeightsNotProbabilities,
    ZeroDegree,
    ZeroVolume,
)
from .graph import WeightedGraph, dump_edge_list, load_edge_list, vertex_subset
from .spectral import (
    SpectralDecomposition,
    eigendecompose,
    normalized_modularity,
    order_by_abs,
    spectral_decomposition,
    spectral_gap,
    structural_count,
)
from .clustering import (
    Partition,
    Representatives,
    exhaustive_min_k_variance,
    k_variance,
    normalized_partition_vectors,
    representatives,
    subspace_distance_sq,
    weighted_kmeans,
)
from .quality import (
    QualityReport,
    modularity,
    normalized_cut_value,
    quality_report,
    relaxation_bounds,
)
from .regularity import (
    PairRegularity,
    RegularityReport,
    cut_norm_bound,
    cut_norm_exact,
    cut_norm_exact_bilinear,
    mixing_discrepancy,
    regularity_certificate,
    sin_theta_check,
    verify_mixing,
    volume_regularity_alpha,
)
from .generators import (
    BlockModel,
    blow_up,
    classical,
    complete_bipartite,
    complete_graph,
    expected_block_graph,
    generalized_random_graph,
    path_graph,
    two_cliques_bridge,
)
from .sampling import (
    ConvergenceTable,
    SampleDraw,
    derive_trial_seed,
    dominant_vertex_ratio,
    k_variance_convergence,
    sample_subgraph,
    spectral_convergence,
    subspace_convergence,
)

__all__ = [
    "BadK",
    "BadSize",
    "BlockModel",
    "ConvergenceTable",
    "Disconnected",
    "DuplicateEdge",
    "EigenFailure",
    "InternalNumericalError",
    "ModspecError",
    "NegativeWeight",
    "NoGap",
    "NoSeparation",
    "PairRegularity",
    "ParseError",
    "Partition",
    "QualityReport",
    "RegularityReport",
    "Representatives",
    "SampleDraw",
    "SelfLoop",
    "SpectralDecomposition",
    "TooLarge",
    "WeightedGraph",
    "WeightsNotProbabilities",
    "ZeroDegree",
    "ZeroVolume",
    "blow_up",
    "classical",
    "complete_bipartite",
    "complete_graph",
    "cut_norm_bound",
    "cut_norm_exact",
    "cut_norm_exact_bilinear",
    "derive_trial_seed",
    "dominant_vertex_ratio",
    "dump_edge_list",
    "eigendecompose",
    "exhaustive_min_k_variance",
    "expected_block_graph",
    "generalized_random_graph",
    "k_variance",
    "k_variance_convergence",
    "load_edge_list",
    "mixing_discrepancy",
    "modularity",
    "normalized_cut_value",
    "normalized_modularity",
    "normalized_partition_vectors",
    "order_by_abs",
    "path_graph",
    "quality_report",
    "regularity_certificate",
    "relaxation_bounds",
    "representatives",
    "sample_subgraph",
    "sin_theta_check",
    "spectral_convergence",
    "spectral_decomposition",
    "spectral_gap",
    "structural_count",
    "subspace_convergence",
    "subspace_distance_sq",
    "two_cliques_bridge",
    "verify_mixing",
    "vertex_subset",
    "weighted_kmeans",
]
