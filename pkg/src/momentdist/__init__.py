"""Graph similarity via spectral moment matrices.

Represents each graph by the Hankel moment matrix of its adjacency spectrum
in the uniform vector state, and measures graph distance as a distance
between these positive semidefinite matrices. Includes exact spectral-measure
oracles, competing baseline methods, and clustering/classification harnesses.
"""

__version__ = "0.1.0"

from .baselines import (
    DegenerateDenominatorError,
    EigensolverError,
    FeatureVector,
    GRAPHLET3_TYPES,
    GRAPHLET4_TYPES,
    bhattacharyya_dist,
    cov_descriptor,
    feature_vectors_to_csv,
    graphlet3_distribution,
    graphlet4_distribution,
    graphlet_kernel_value,
    nclm_vector,
    top_k_eigenvalues,
    wicker_distance,
)
from .experiments import (
    METHODS,
    bench_moment_scaling,
    classify_experiment,
    cluster_experiment,
    make_rewired_corpus,
    method_distance_matrix,
)
from .graphs import (
    EdgeListError,
    Graph,
    NAMED_GRAPH_CATALOG,
    Permutation,
    SelfLoopError,
    UnknownGraphNameError,
    complement,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    diameter,
    disjoint_union,
    empty_graph,
    generate_rewired,
    induced_subgraph,
    load_edge_list,
    named_graph,
    parse_edge_list,
    path_graph,
    permute,
    sample_subgraph,
    star_graph,
    walk_count,
    write_edge_list,
)
from .hankel import MomentMatrix, build_moment_matrix, hankel_rank, mix
from .learn import clustering_accuracy, kernel_from_distances, kernel_kmeans, knn_classify
from .measures import (
    DiscreteMeasure,
    graph_spectral_measure,
    measure_moment,
    spectral_measure,
)
from .metrics import (
    ConfigError,
    DistanceConfig,
    DistanceMatrix,
    SingularMatrixError,
    affine_invariant_dist,
    cholesky_frobenius_dist,
    frobenius_dist,
    graph_distance,
    j_divergence_dist,
    log_frobenius_dist,
    moment_matrix_of_graph,
    pairwise_distance_matrix,
)
from .moments import (
    DensityParams,
    EmptyGraphError,
    MomentSequence,
    density_state_moments,
    trace_moments,
    vector_state_moments,
    xi_state_moments,
)
