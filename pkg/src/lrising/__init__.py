"""Long-range Ising chains with random boundary conditions.

Finite-volume toolkit for the one-dimensional ferromagnet with couplings
J(x,y) = J for |x-y| = 1 and |x-y|^{-(2-alpha)} for |x-y| > 1, 0 <= alpha < 1:
boundary energies and their scaling, the zero-bulk-temperature toy mixture,
triangle/contour geometry with free boundary conditions, cluster-expansion
diagnostics (Peierls ratios, entropy sums, quasi-additivity, truncated rho),
exact and Monte Carlo Gibbs measures, and empirical metastate experiments
exhibiting the alpha < 1/2 vs alpha > 1/2 dichotomy.
"""

__version__ = "0.1.0"

def _cap_threads() -> None:
    # applied before the first numpy import so the BLAS pools honor the
    # TOOL_THREADS cap; explicit per-library env vars win via setdefault
    import os

    cap = os.environ.get("TOOL_THREADS")
    if cap is not None and cap.isdigit() and int(cap) > 0:
        for var in (
            "OMP_NUM_THREADS",
            "OPENBLAS_NUM_THREADS",
            "MKL_NUM_THREADS",
            "NUMEXPR_NUM_THREADS",
        ):
            os.environ.setdefault(var, cap)


_cap_threads()

from .model import (
    BoundaryCondition,
    MeasureMarginal,
    ModelParams,
    SpinConfig,
    boundary_energy,
    boundary_field,
    coefficient_profile,
    coupling,
    hamiltonian,
    window_distance,
)
from .contours import (
    ContourSet,
    Triangle,
    find_min_c,
    group_contours,
    omega_sign,
    reconstruct_config,
    triangles_from_config,
)
from .gibbs import (
    ExactEnsemble,
    exact_measure,
    free_energy_difference,
    mc_measure,
    mixture_weight,
)
from .diagnostics import (
    EnumerationBudgetExceeded,
    entropy_bound_check,
    entropy_bound_scan,
    peierls_check,
    peierls_scan,
    quasi_additivity_check,
    quasi_additivity_constant,
    rho_scan,
    rho_truncated,
)
from .toy import (
    LambdaHistogram,
    ScalingTable,
    WlltSchedule,
    exact_variance,
    histogram_from_lambdas,
    sample_boundary_energies,
    smallball_scaling_experiment,
    toy_lambdas,
    toy_metastate_histogram,
    toy_mixture_marginal,
    toy_threshold,
    toy_weights,
    variance_scaling,
    wllt_schedule,
)
from .metastate import (
    DichotomyReport,
    GoodEtaReport,
    MetastateHistogram,
    NullRecurrenceProfile,
    SparseSchedule,
    SparseScheduleError,
    decoupled_gap_bound,
    decoupled_measure_gap,
    dichotomy_report,
    empirical_metastate,
    exp_tail,
    good_eta_classifier,
    good_eta_fraction,
    mixed_ball_distance,
    null_recurrence_profile,
    sparse_schedule,
)

__all__ = [
    "ModelParams",
    "SpinConfig",
    "BoundaryCondition",
    "MeasureMarginal",
    "coupling",
    "hamiltonian",
    "boundary_field",
    "boundary_energy",
    "coefficient_profile",
    "window_distance",
    "Triangle",
    "ContourSet",
    "find_min_c",
    "triangles_from_config",
    "group_contours",
    "omega_sign",
    "reconstruct_config",
    "ExactEnsemble",
    "exact_measure",
    "free_energy_difference",
    "mixture_weight",
    "mc_measure",
    "EnumerationBudgetExceeded",
    "entropy_bound_check",
    "entropy_bound_scan",
    "peierls_check",
    "peierls_scan",
    "quasi_additivity_check",
    "quasi_additivity_constant",
    "rho_scan",
    "rho_truncated",
    "LambdaHistogram",
    "ScalingTable",
    "WlltSchedule",
    "exact_variance",
    "histogram_from_lambdas",
    "sample_boundary_energies",
    "smallball_scaling_experiment",
    "toy_lambdas",
    "toy_metastate_histogram",
    "toy_mixture_marginal",
    "toy_threshold",
    "toy_weights",
    "variance_scaling",
    "wllt_schedule",
    "SparseSchedule",
    "SparseScheduleError",
    "sparse_schedule",
    "exp_tail",
    "GoodEtaReport",
    "good_eta_classifier",
    "good_eta_fraction",
    "decoupled_gap_bound",
    "decoupled_measure_gap",
    "MetastateHistogram",
    "empirical_metastate",
    "NullRecurrenceProfile",
    "null_recurrence_profile",
    "mixed_ball_distance",
    "DichotomyReport",
    "dichotomy_report",
    "__version__",
]
