"""Universal first-order convex solvers with exact line search.

Adaptive fast-gradient and linear-coupling methods that estimate an inexact
Lipschitz constant on the fly (no smoothness parameters as inputs), a
conjugate-gradient baseline, the benchmark problem families, and a CLI
harness (``ufom-bench``) for reproducing iteration-count tables and
convergence traces.
"""

from ufom.core import (
    Objective,
    RayFunction,
    Vector,
    as_vector,
    axpy,
    dot,
    finite_diff_check,
)
from ufom.kernels import BACKEND
from ufom.linesearch import (
    LineSearchConfig,
    LineSearchResult,
    LocalizationError,
    bisect_min,
    localize,
    minimize_ray,
)
from ufom.problems import (
    CompositeObjective,
    MaxQuadProblem,
    QuadraticProblem,
    composite_restrict,
    diag_quadratic,
    least_squares_composite,
    maxquad_eval,
    maxquad_subgrad,
    quad_eval,
    quad_grad,
)
from ufom.solvers import (
    SolverOptions,
    SolverReport,
    Trace,
    UniversalState,
    dual_bound,
    inexact_lipschitz,
    ncg_solve,
    step_coefficients,
    ufgm_solve,
    ulcm_accept_test,
    ulcm_fixed_step,
    ulcm_solve,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CompositeObjective",
    "LineSearchConfig",
    "LineSearchResult",
    "LocalizationError",
    "MaxQuadProblem",
    "Objective",
    "QuadraticProblem",
    "RayFunction",
    "SolverOptions",
    "SolverReport",
    "Trace",
    "UniversalState",
    "Vector",
    "as_vector",
    "axpy",
    "bisect_min",
    "composite_restrict",
    "diag_quadratic",
    "dot",
    "dual_bound",
    "finite_diff_check",
    "inexact_lipschitz",
    "least_squares_composite",
    "localize",
    "maxquad_eval",
    "maxquad_subgrad",
    "minimize_ray",
    "ncg_solve",
    "quad_eval",
    "quad_grad",
    "step_coefficients",
    "ufgm_solve",
    "ulcm_accept_test",
    "ulcm_fixed_step",
    "ulcm_solve",
]
