"""plmnet: elastic-net family estimation for partially linear models.

The model is y = x'beta + f(t) + noise with unknown smooth f. Kernel
smoothing in t turns it into a linear problem on partial residuals, which is
then fit by penalized least squares (elastic net, lasso, adaptive lasso,
ridge) with cross-validated tuning, a group-effect diagnostic for correlated
predictors, and a reproducible simulation harness.

Note: the penalized objective uses an UNSCALED residual sum of squares; see
:mod:`plmnet.solver` for conversion to per-observation conventions.
"""

from .data import (
    CoefficientVector,
    Dataset,
    StandardizationInfo,
    load_csv,
    save_csv,
    standardize,
    unstandardize_coefficients,
)
from .diagnostics import GroupEffectReport, group_effect, group_effect_reports, kkt_check, mse
from .estimators import (
    PartiallyLinearAdaptiveLasso,
    PartiallyLinearElasticNet,
    PartiallyLinearElasticNetCV,
    PartiallyLinearLasso,
    PartiallyLinearRidge,
)
from .kernels import SmootherConfig, default_bandwidth
from .model_selection import (
    CvPlan,
    CvResult,
    cross_validate,
    default_lambda1_grid,
    make_cv_plan,
    make_folds,
)
from .simulation import (
    ExperimentReport,
    SimulationConfig,
    generate_dgp,
    generate_pggn,
    run_experiment,
    run_pggn_study,
)
from .smoothing import NadarayaWatsonSmoother, PartialResiduals, nw_smooth, partial_out
from .solver import (
    AugmentedProblem,
    FitResult,
    PenaltySpec,
    SolverOptions,
    augment_to_lasso,
    fit_alasso,
    fit_penalized,
    fit_ridge_closed_form,
    fit_via_augmentation,
    lambda1_max,
    objective,
    sklearn_equivalent_params,
)

__version__ = "0.1.0"

__all__ = [
    "CoefficientVector",
    "Dataset",
    "StandardizationInfo",
    "load_csv",
    "save_csv",
    "standardize",
    "unstandardize_coefficients",
    "GroupEffectReport",
    "group_effect",
    "group_effect_reports",
    "kkt_check",
    "mse",
    "PartiallyLinearAdaptiveLasso",
    "PartiallyLinearElasticNet",
    "PartiallyLinearElasticNetCV",
    "PartiallyLinearLasso",
    "PartiallyLinearRidge",
    "SmootherConfig",
    "default_bandwidth",
    "CvPlan",
    "CvResult",
    "cross_validate",
    "default_lambda1_grid",
    "make_cv_plan",
    "make_folds",
    "ExperimentReport",
    "SimulationConfig",
    "generate_dgp",
    "generate_pggn",
    "run_experiment",
    "run_pggn_study",
    "NadarayaWatsonSmoother",
    "PartialResiduals",
    "nw_smooth",
    "partial_out",
    "AugmentedProblem",
    "FitResult",
    "PenaltySpec",
    "SolverOptions",
    "augment_to_lasso",
    "fit_alasso",
    "fit_penalized",
    "fit_ridge_closed_form",
    "fit_via_augmentation",
    "lambda1_max",
    "objective",
    "sklearn_equivalent_params",
    "__version__",
]
