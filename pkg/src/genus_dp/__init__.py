"""Embedded graphs, surface cut decompositions and dynamic programming on them."""

from .decomposition import (
    BranchDecomposition,
    CarvingDecomposition,
    RootedBranchDecomposition,
    branch_decomposition,
    branchwidth_exact,
    branchwidth_heuristic,
    root,
)
from .dp import (
    TableStats,
    brute_force_cvc,
    brute_force_vc,
    run_dp,
    solve_cvc,
    solve_vc,
    table_stats,
)
from .embedding import (
    EmbeddedGraph,
    Noose,
    SurfaceReport,
    dual,
    euler_genus,
    from_edge_rotations,
    genus,
    medial,
    radial,
)
from .errors import (
    DegenerateInputError,
    GenusDPError,
    GuardExceededError,
    InfeasibleError,
    InvalidNooseError,
    PreconditionError,
    StructuralInputError,
    UnsupportedInputError,
)
from .formats import format_emb, parse_emb, read_emb, write_emb
from .packings import (
    PartialPacking,
    bell,
    catalan,
    count_ncp_disk,
    enumerate_connected_packings,
    enumerate_ncp_disk,
    enumerate_partitions_via_subgraphs,
)
from .polyhedral import PolyhedralDecomposition, polyhedral_decomposition, replay_gluing
from .surface_cut import SurfaceCutDecomposition, surface_cut_decomposition, tree_cotree, verify_scd
from .transforms import (
    add_apices,
    branch_to_medial_carving,
    carving_to_bond,
    carving_to_branch,
    merge_clique_sums,
)

__version__ = "0.1.0"
