"""k-fold cross-validation over a penalty grid, with training-only smoothing.

Fold mechanics guard against leakage through the semiparametric stage: for
each fold the kernel smoother and the penalized fit see the training rows
only, and held-out partial residuals are formed by smoothing the held-out
rows against the training sample. A held-out point with an empty
bounded-support window falls back to the training mean (counted, not fatal).

The grid is over lambda1 at fixed lambda2 for l1-bearing methods. For
``method="ridge"`` the same machinery tunes its single free penalty, so the
grid values are interpreted as lambda2 levels there.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateGridError, DimensionError, PlanError
from .kernels import SmootherConfig
from .smoothing import NadarayaWatsonSmoother, partial_out
from .solver import (
    PenaltySpec,
    SolverOptions,
    fit_penalized,
    fit_ridge_closed_form,
    lambda1_max,
    ridge_weights,
)

__all__ = ["CvPlan", "CvResult", "make_folds", "make_cv_plan", "default_lambda1_grid", "cross_validate"]

GRID_SPAN = 1e-4


def make_folds(n, k, seed) -> np.ndarray:
    """Random fold ids (0..k-1) balanced to within one element, deterministic in seed."""
    if not 2 <= k <= n:
        raise PlanError(f"need 2 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    assignment = np.empty(n, dtype=np.int64)
    assignment[rng.permutation(n)] = np.arange(n) % k
    return assignment


@dataclass(frozen=True)
class CvPlan:
    """A fixed fold assignment plus the penalty grid to scan."""

    k: int
    lambda1_grid: np.ndarray
    lambda2: float
    seed: int
    fold_assignment: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.lambda1_grid, dtype=np.float64)
        if grid.ndim != 1 or grid.size < 1:
            raise PlanError("lambda1_grid must be a nonempty 1-d array")
        if np.any(grid <= 0):
            raise PlanError("grid values must be positive")
        if grid.size > 1 and np.any(np.diff(grid) >= 0):
            raise PlanError("lambda1_grid must be strictly descending")
        if self.k < 2:
            raise PlanError("need at least 2 folds")
        if self.lambda2 < 0:
            raise PlanError("lambda2 must be nonnegative")
        fold = np.asarray(self.fold_assignment, dtype=np.int64)
        counts = np.bincount(fold, minlength=self.k)
        if counts.size != self.k or np.any(counts < 1):
            raise PlanError("every fold must contain at least one observation")
        if counts.max() - counts.min() > 1:
            raise PlanError("fold sizes must differ by at most one")
        grid.flags.writeable = False
        fold.flags.writeable = False
        object.__setattr__(self, "lambda1_grid", grid)
        object.__setattr__(self, "fold_assignment", fold)


def make_cv_plan(n, lambda1_grid, k=10, lambda2=0.0, seed=0) -> CvPlan:
    return CvPlan(
        k=k,
        lambda1_grid=np.asarray(lambda1_grid, dtype=np.float64),
        lambda2=float(lambda2),
        seed=int(seed),
        fold_assignment=make_folds(n, k, seed),
    )


@dataclass(frozen=True)
class CvResult:
    """Per-grid-point held-out error summary and the chosen penalty."""

    lambda1_grid: np.ndarray
    mean_cv_error: np.ndarray
    se_cv_error: np.ndarray
    best_lambda1: float
    best_index: int
    selected_lambda1: float
    selected_index: int
    one_se: bool
    n_smoothing_fallbacks: int
    penalty: str = "lambda1"
    lambda2: float = 0.0
    fold_models: dict | None = field(default=None, repr=False)


def default_lambda1_grid(pr, spec=None, grid_size=100) -> np.ndarray:
    """Log-spaced descending grid from lambda1_max down to lambda1_max * 1e-4.

    The top of the grid is the smallest lambda1 with an all-zero solution at
    the fixed lambda2 (inactive-coordinate stationarity bound), weighted for
    the adaptive lasso when `spec` carries weights.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    lam_max = lambda1_max(pr, spec)
    if lam_max <= 0.0:
        raise DegenerateGridError(
            "all predictor/response correlations are zero; no meaningful lambda1 grid exists"
        )
    return np.geomspace(lam_max, lam_max * GRID_SPAN, grid_size)


def _held_out_partial_residuals(data, train_idx, test_idx, smoother):
    """Training-only smoothing: residualize held-out rows against the training sample."""
    d_train = data.take(train_idx)
    pr_train = partial_out(d_train, smoother)
    cfg = pr_train.config
    sm_y = NadarayaWatsonSmoother(cfg.kernel, cfg.bandwidth, cfg.bandwidth_c, on_empty="train_mean")
    sm_x = NadarayaWatsonSmoother(cfg.kernel, cfg.bandwidth, cfg.bandwidth_c, on_empty="train_mean")
    sm_y.fit(d_train.t, d_train.y)
    sm_x.fit(d_train.t, d_train.x)
    t_test = data.t[test_idx]
    y_tilde_test = data.y[test_idx] - sm_y.predict(t_test)
    x_tilde_test = data.x[test_idx] - sm_x.predict(t_test)
    return pr_train, x_tilde_test, y_tilde_test, sm_y.n_fallback_ + sm_x.n_fallback_


def cross_validate(
    data,
    plan,
    smoother=SmootherConfig(),
    method="enet",
    *,
    adaptive_gamma=1.0,
    one_se=False,
    keep_fold_models=False,
    options=SolverOptions(),
) -> CvResult:
    """Score the penalty grid by k-fold held-out squared error on partial residuals.

    Within each fold the grid runs from its largest value down with warm
    starts. Ties at the minimum go to the largest penalty (smallest index).
    With ``one_se=True`` the selected penalty is the largest one whose mean
    error is within one standard error of the minimum; ``best_*`` always
    records the plain argmin.
    """
    if method not in ("enet", "lasso", "alasso", "ridge"):
        raise ValueError(f"cross_validate supports enet/lasso/alasso/ridge, got {method!r}")
    n = data.n
    if plan.fold_assignment.shape[0] != n:
        raise DimensionError("plan fold assignment length differs from the dataset")
    grid = plan.lambda1_grid
    k = plan.k
    errors = np.empty((k, grid.size))
    fallbacks = 0
    fold_models = {} if keep_fold_models else None
    for f in range(k):
        test_idx = np.flatnonzero(plan.fold_assignment == f)
        train_idx = np.flatnonzero(plan.fold_assignment != f)
        pr_train, x_te, y_te, n_fb = _held_out_partial_residuals(data, train_idx, test_idx, smoother)
        fallbacks += n_fb
        if method == "alasso":
            weights, _ = ridge_weights(pr_train, gamma=adaptive_gamma)
        betas = np.empty((grid.size, pr_train.p)) if keep_fold_models else None
        warm = None
        for gi, lam in enumerate(grid):
            if method == "ridge":
                fit = fit_ridge_closed_form(pr_train, lam)
            else:
                if method == "enet":
                    spec = PenaltySpec.enet(lam, plan.lambda2)
                elif method == "lasso":
                    spec = PenaltySpec.lasso(lam)
                else:
                    spec = PenaltySpec.alasso(lam, weights, gamma=adaptive_gamma)
                fit = fit_penalized(pr_train, spec, options=options, beta0=warm)
                warm = fit.beta.values
            pred_err = y_te - x_te @ fit.beta.values
            errors[f, gi] = float(pred_err @ pred_err) / len(test_idx)
            if keep_fold_models:
                betas[gi] = fit.beta.values
        if keep_fold_models:
            fold_models[f] = betas
    mean_err = errors.mean(axis=0)
    se_err = errors.std(axis=0, ddof=1) / np.sqrt(k)
    best = int(np.argmin(mean_err))
    if one_se:
        threshold = mean_err[best] + se_err[best]
        selected = int(np.flatnonzero(mean_err <= threshold)[0])
    else:
        selected = best
    return CvResult(
        lambda1_grid=grid,
        mean_cv_error=mean_err,
        se_cv_error=se_err,
        best_lambda1=float(grid[best]),
        best_index=best,
        selected_lambda1=float(grid[selected]),
        selected_index=selected,
        one_se=one_se,
        n_smoothing_fallbacks=fallbacks,
        penalty="lambda2" if method == "ridge" else "lambda1",
        lambda2=plan.lambda2,
        fold_models=fold_models,
    )
