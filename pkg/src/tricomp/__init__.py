"""Graph compaction preserving 3-connectivity, 2-cut decomposition trees,
and a complete 2-disjoint-rooted-paths solver with planar certificates."""

from .graph import (
    Graph,
    Matching,
    MinorOp,
    TriangleSet,
    apply_minor_op,
    contract_edge,
    contract_triangle,
    parse_edge_list,
    replay,
    write_edge_list,
)
from .connectivity import (
    ForestDecomposition,
    KuratowskiWitness,
    PathSet,
    PlanarEmbedding,
    count_disjoint_paths,
    dense_edge_deletion,
    is_k_connected,
    planarity,
    sparse_certificate,
)
from .decomposition import (
    CutTree,
    block_tree,
    harvest,
    special_2cut_tree,
    strong_2cut_tree,
)
from .compactor import (
    CompactionSequence,
    CompactorOutput,
    CompactorParams,
    compactor,
    greedy_low_degree_matching,
    iterative_compactor,
    low_density_compactor,
    refine_matching,
    small_cover_embed,
    stable_set_output,
    verify_output,
)
from .drp import (
    DrpCertificate,
    DrpConfig,
    DrpInstance,
    build_auxiliary,
    check_ferociously_strong,
    check_strong,
    find_reducible_3cut,
    root_graph,
    solve,
    verify_certificate,
)

__version__ = "0.1.0"
