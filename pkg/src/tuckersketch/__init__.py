"""Randomized low multilinear rank approximation of dense and sparse tensors.

Modes are numbered 1..N throughout. The sketch-based decompositions
(:func:`tucker_svd_seq`, :func:`tucker_svd_batch`) compress each mode with a
chain of small Gaussian matrices instead of one wide one; classical baselines
(HOSVD, HOOI) and single-matrix randomized variants are included for
comparison, along with synthetic test-tensor generators, text serialization,
and a benchmark harness.
"""

from .bench import (
    FAMILIES,
    BenchRecord,
    BoundProbe,
    SuiteConfig,
    SuiteResult,
    check_inequality13,
    emit_plots,
    load_config,
    oracle_floor,
    parse_config,
    probe_bound,
    read_records_csv,
    run_suite,
    write_records_csv,
)
from .core import (
    SparseTensor,
    accumulate_sparse,
    fold,
    frob_norm,
    khatri_rao,
    kron,
    mode_product,
    unfold,
)
from .generators import (
    NoisySpec,
    gen_log_reciprocal,
    gen_random_sparse,
    gen_reciprocal_sum,
    gen_sparse_outer,
    gen_tucker_noise,
    sparse_outer_sum,
)
from .linalg import (
    RankDeficiencyWarning,
    delta_tail,
    fixed_rank_basis,
    numerical_rank,
    orthonormal_basis_qr,
    svd,
)
from .sketch import (
    GaussianStream,
    SketchPlan,
    SketchWidthWarning,
    default_plan,
    gaussian_matrix,
    sketch_full_gaussian,
    sketch_khatri_rao,
    sketch_mode,
)
from .tensor_io import (
    load_approx,
    read_matrix,
    read_tensor,
    save_approx,
    write_matrix,
    write_tensor,
)
from .tucker import (
    ALGORITHMS,
    Metrics,
    RankTooLargeError,
    TuckerApprox,
    decompose,
    hooi,
    kr_tucker,
    metrics_for,
    ran_tucker,
    reconstruct,
    rlne,
    truncated_hosvd,
    tucker_svd_batch,
    tucker_svd_seq,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "FAMILIES",
    "BenchRecord",
    "BoundProbe",
    "GaussianStream",
    "Metrics",
    "NoisySpec",
    "RankDeficiencyWarning",
    "RankTooLargeError",
    "SketchPlan",
    "SketchWidthWarning",
    "SparseTensor",
    "SuiteConfig",
    "SuiteResult",
    "TuckerApprox",
    "accumulate_sparse",
    "check_inequality13",
    "decompose",
    "default_plan",
    "delta_tail",
    "emit_plots",
    "fixed_rank_basis",
    "fold",
    "frob_norm",
    "gaussian_matrix",
    "gen_log_reciprocal",
    "gen_random_sparse",
    "gen_reciprocal_sum",
    "gen_sparse_outer",
    "gen_tucker_noise",
    "hooi",
    "khatri_rao",
    "kr_tucker",
    "kron",
    "load_approx",
    "load_config",
    "metrics_for",
    "mode_product",
    "numerical_rank",
    "oracle_floor",
    "orthonormal_basis_qr",
    "parse_config",
    "probe_bound",
    "ran_tucker",
    "read_matrix",
    "read_records_csv",
    "read_tensor",
    "reconstruct",
    "rlne",
    "run_suite",
    "save_approx",
    "sketch_full_gaussian",
    "sketch_khatri_rao",
    "sketch_mode",
    "sparse_outer_sum",
    "svd",
    "truncated_hosvd",
    "tucker_svd_batch",
    "tucker_svd_seq",
    "unfold",
    "write_matrix",
    "write_records_csv",
    "write_tensor",
]
