"""Sparse directed network reconstruction from stationary covariances.

The stationary covariance of a noise-driven linear system pins its
state matrix down only to an affine family; this package recovers a
sparse member of that family by linear programming, optionally guided
by transfer-entropy edge screening, and ships the simulator and
benchmark harness used to evaluate the approach.
"""

from .bench import (
    METHODS,
    ExperimentConfig,
    ResultRecord,
    alignment,
    bootstrap_median_pvalue,
    report,
    run_experiment,
    summarize,
)
from .errors import (
    BlowupError,
    DegenerateVarianceError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    InsufficientDataError,
    InvalidPairError,
    LyapnetError,
    NotHurwitzError,
    NotPositiveDefiniteError,
    RetryExhaustedError,
    SelfLoopInPriorsError,
    SingularBlockError,
    SingularMatrixError,
    ZeroOffDiagonalError,
)
from .linalg import (
    SpectralDecomposition,
    check_covariance,
    correlation_baseline,
    empirical_covariance,
    forward_lyapunov_solve,
    is_hurwitz,
    lyapunov_residual,
    precision_baseline,
    spectral_abscissa,
    spectral_decompose,
    unvec,
    vec,
)
from .lp import (
    IterationRecord,
    LpProblem,
    LpSolution,
    solve_lp,
)
from .recovery import (
    ReconstructionResult,
    assemble_lp,
    prior_weights,
    reconstruct,
    reconstruct_from_series,
)
from .simulate import (
    GeneratorConfig,
    SimConfig,
    TimeSeries,
    random_hurwitz,
    simulate_linear,
    simulate_tanh,
    true_edges,
)
from .solution_space import (
    ConstraintSystem,
    build_constraints,
    complete_solution,
    free_parameter_count,
    index_full,
    index_upper,
    membership_residual,
    sample_solution,
    symmetric_solution,
)
from .te import (
    EdgeSet,
    TeConfig,
    conditional_te,
    gaussian_cmi,
    infer_edges,
    lagged_covariance,
    surrogate_threshold,
    transfer_entropy,
)

__version__ = "0.1.0"
