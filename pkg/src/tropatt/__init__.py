"""Max-plus linear algebra and the beta -> inf limit of softmax attention."""

from tropatt.attention import (
    EmbeddingSet,
    attention_forward,
    hard_attention,
    log_space_attention,
    log_sum_exp,
    score_matrix,
    softmax_weights,
)
from tropatt.convergence import (
    DEFAULT_EPSILON_TIE,
    ConvergenceRecord,
    GapRecord,
    MarginReport,
    RegionClassification,
    classify_region,
    row_margin,
    sweep,
    theorem_gap_report,
)
from tropatt.errors import (
    AllBottomRowError,
    DimensionMismatchError,
    DomainError,
    EnumerationGuardError,
    InvalidValueError,
    SchemaError,
    TropattError,
)
from tropatt.linalg import (
    PathWitness,
    TropicalMatrix,
    ValueVector,
    argmax_row_witness,
    path_weight,
    propagate,
    reconstruct_path,
    trop_matmul,
    trop_matvec,
    trop_power,
)
from tropatt.pathfinding import (
    TokenGraph,
    add_self_loops,
    bellman_ford_step,
    enumerate_paths,
    export_dot,
    fig2,
)
from tropatt.semiring import (
    BOTTOM,
    ONE,
    TropicalScalar,
    format_scalar,
    parse_scalar,
    trop_add,
    trop_leq,
    trop_mul,
)

__version__ = "0.1.0"
