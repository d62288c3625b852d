"""Slepian bases for projected compact operators and multiscale regularization."""

from .eigen import EigenConvergenceError, sym_eig
from .experiment import ExperimentConfig, ExperimentReport, emit_reports, run_experiment
from .operators import (
    DiagonalOperator,
    apply,
    couple,
    identity_operator,
    reciprocal_degree_operator,
    restrict,
    upward_continuation_operator,
)
from .problems import (
    ProblemInstance,
    circle_identity,
    circle_ill_posed,
    coupled_fields,
    problem_from_config,
    sphere_downward_continuation,
)
from .regularization import (
    SHANNON,
    FilterSpec,
    KernelEval,
    RegionalData,
    Solution,
    eval_kernel,
    scaling_solve,
    tsvd_solve,
    wavelet_detail,
)
from .slepian import (
    EmptySlepianSystemError,
    NegativeEigenvalueError,
    SlepianSystem,
    build_slepian_system,
    eval_g,
    eval_h,
)
from .spaces import (
    Domain1D,
    FourierBasis,
    GridSpec,
    RegionQuadrature,
    SphereDomain,
    SphericalBasis,
    make_interval_region,
    make_polar_cap_region,
)

__version__ = "0.1.0"
