"""scikit-learn style estimators for the partially linear model family.

Every estimator follows the fit/predict/get_params protocol, with one
extension: the scalar smoothing covariate ``t`` is a required argument of
both ``fit(X, y, t)`` and ``predict(X, t)``, since the model
y = x'beta + f(t) + eps treats it separately from the design.

fit pipeline: validate -> (optionally) center y and standardize X ->
kernel partial-out in t -> penalized solve. Predictions rebuild
f(t) implicitly through the training smoother:

    yhat(X0, t0) = y_mean + mhat_y(t0) + (X0_std - mhat_x(t0))' beta_std

evaluated with training-sample kernel averages at t0 (training-mean fallback
for empty bounded-support windows, counted in ``n_smoothing_fallbacks_``).
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .data import CoefficientVector, Dataset, StandardizationInfo, standardize, unstandardize_coefficients
from .kernels import SmootherConfig
from .model_selection import CvPlan, cross_validate, default_lambda1_grid, make_folds
from .smoothing import NadarayaWatsonSmoother, partial_out
from .solver import (
    PenaltySpec,
    SolverOptions,
    fit_alasso,
    fit_penalized,
    fit_ridge_closed_form,
    ridge_weights,
)
from .validation import as_1d_float, as_2d_float, check_same_length

__all__ = [
    "PartiallyLinearElasticNet",
    "PartiallyLinearLasso",
    "PartiallyLinearAdaptiveLasso",
    "PartiallyLinearRidge",
    "PartiallyLinearElasticNetCV",
]


class _BasePartiallyLinear(RegressorMixin, BaseEstimator):
    def __init__(self, kernel="box", bandwidth=None, bandwidth_c=1.0, standardize=True,
                 tol=1e-8, max_iter=10_000):
        self.kernel = kernel
        self.bandwidth = bandwidth
        self.bandwidth_c = bandwidth_c
        self.standardize = standardize
        self.tol = tol
        self.max_iter = max_iter

    def _solve(self, pr, options):
        raise NotImplementedError

    def _smoother_config(self):
        return SmootherConfig(self.kernel, self.bandwidth, self.bandwidth_c)

    def _options(self):
        return SolverOptions(tolerance=self.tol, max_iterations=self.max_iter)

    def fit(self, X, y, t):
        X = as_2d_float(X, "X")
        y = as_1d_float(y, "y")
        t = as_1d_float(t, "t")
        check_same_length(X.shape[0], (y.shape[0], "y"), (t.shape[0], "t"))
        names = tuple(f"x{j + 1}" for j in range(X.shape[1]))
        data = Dataset(y, t, X, names)
        if self.standardize:
            data_std, info = standardize(data)
        else:
            data_std = data
            info = StandardizationInfo(
                y_mean=0.0,
                x_means=np.zeros(X.shape[1]),
                x_scales=np.ones(X.shape[1]),
                applied=False,
            )
        pr = partial_out(data_std, self._smoother_config())
        fit = self._solve(pr, self._options())
        self.fit_result_ = fit
        self.partial_residuals_ = pr
        self.standardization_ = info
        self.coef_standardized_ = fit.beta.values.copy()
        if info.applied:
            coef, offset = unstandardize_coefficients(fit.beta, info)
            self.coef_ = coef.values.copy()
            self.intercept_ = offset
        else:
            self.coef_ = fit.beta.values.copy()
            self.intercept_ = 0.0
        cfg = pr.config
        self._smoother_y = NadarayaWatsonSmoother(cfg.kernel, cfg.bandwidth, cfg.bandwidth_c, on_empty="train_mean")
        self._smoother_x = NadarayaWatsonSmoother(cfg.kernel, cfg.bandwidth, cfg.bandwidth_c, on_empty="train_mean")
        self._smoother_y.fit(data_std.t, data_std.y)
        self._smoother_x.fit(data_std.t, data_std.x)
        self.n_features_in_ = X.shape[1]
        self.n_smoothing_fallbacks_ = 0
        return self

    def predict(self, X, t):
        if not hasattr(self, "fit_result_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted")
        X = as_2d_float(X, "X")
        t = as_1d_float(t, "t")
        check_same_length(X.shape[0], (t.shape[0], "t"))
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, fitted with {self.n_features_in_}")
        info = self.standardization_
        x_std = (X - info.x_means) / info.x_scales if info.applied else X
        my = self._smoother_y.predict(t)
        mx = self._smoother_x.predict(t)
        self.n_smoothing_fallbacks_ = self._smoother_y.n_fallback_ + self._smoother_x.n_fallback_
        return info.y_mean + my + (x_std - mx) @ self.coef_standardized_

    def score(self, X, y, t):
        """Coefficient of determination R^2 on (X, t) -> y."""
        y = as_1d_float(y, "y")
        pred = self.predict(X, t)
        ss_res = float(np.sum((y - pred) ** 2))
        ss_tot = float(np.sum((y - np.mean(y)) ** 2))
        return 1.0 - ss_res / ss_tot


class PartiallyLinearElasticNet(_BasePartiallyLinear):
    """Partially linear regression with an elastic-net penalized linear part.

    Minimizes ||y_tilde - X_tilde b||^2 + lambda2 ||b||^2 + lambda1 ||b||_1
    on kernel partial residuals. Note the unscaled residual sum of squares:
    lambda values are not per-observation.

    Attributes after fit: ``coef_`` (original scale), ``coef_standardized_``,
    ``intercept_``, ``fit_result_``, ``partial_residuals_``.
    """

    def __init__(self, lambda1=1.0, lambda2=1.0, kernel="box", bandwidth=None,
                 bandwidth_c=1.0, standardize=True, tol=1e-8, max_iter=10_000):
        super().__init__(kernel, bandwidth, bandwidth_c, standardize, tol, max_iter)
        self.lambda1 = lambda1
        self.lambda2 = lambda2

    def _solve(self, pr, options):
        return fit_penalized(pr, PenaltySpec.enet(self.lambda1, self.lambda2), options=options)


class PartiallyLinearLasso(_BasePartiallyLinear):
    """l1-penalized partially linear regression (lambda2 = 0)."""

    def __init__(self, lambda1=1.0, kernel="box", bandwidth=None, bandwidth_c=1.0,
                 standardize=True, tol=1e-8, max_iter=10_000):
        super().__init__(kernel, bandwidth, bandwidth_c, standardize, tol, max_iter)
        self.lambda1 = lambda1

    def _solve(self, pr, options):
        return fit_penalized(pr, PenaltySpec.lasso(self.lambda1), options=options)


class PartiallyLinearAdaptiveLasso(_BasePartiallyLinear):
    """Adaptively weighted l1 penalty with a ridge pilot for the weights."""

    def __init__(self, lambda1=1.0, gamma=1.0, init_lambda2=None, kernel="box",
                 bandwidth=None, bandwidth_c=1.0, standardize=True, tol=1e-8, max_iter=10_000):
        super().__init__(kernel, bandwidth, bandwidth_c, standardize, tol, max_iter)
        self.lambda1 = lambda1
        self.gamma = gamma
        self.init_lambda2 = init_lambda2

    def _solve(self, pr, options):
        fit = fit_alasso(pr, self.lambda1, gamma=self.gamma, options=options,
                         init_lambda2=self.init_lambda2)
        self.adaptive_weights_ = np.asarray(fit.spec.adaptive_weights)
        return fit


class PartiallyLinearRidge(_BasePartiallyLinear):
    """l2-penalized partially linear regression, solved in closed form."""

    def __init__(self, lambda2=1.0, kernel="box", bandwidth=None, bandwidth_c=1.0,
                 standardize=True, tol=1e-8, max_iter=10_000):
        super().__init__(kernel, bandwidth, bandwidth_c, standardize, tol, max_iter)
        self.lambda2 = lambda2

    def _solve(self, pr, options):
        return fit_ridge_closed_form(pr, self.lambda2)


class PartiallyLinearElasticNetCV(_BasePartiallyLinear):
    """Elastic net with lambda1 tuned by k-fold cross-validation at fixed lambda2.

    The fold smoothers and fits are trained on the training rows only; the
    grid descends from the data-driven lambda1_max with warm starts. With
    ``one_se=True`` the largest lambda1 within one standard error of the
    minimum is selected instead of the argmin.

    Attributes after fit: ``lambda1_`` (selected), ``cv_result_``, plus the
    base attributes.
    """

    def __init__(self, lambda2=1.0 / 3.0, cv=10, grid_size=100, seed=0, one_se=False,
                 kernel="box", bandwidth=None, bandwidth_c=1.0, standardize=True,
                 tol=1e-8, max_iter=10_000):
        super().__init__(kernel, bandwidth, bandwidth_c, standardize, tol, max_iter)
        self.lambda2 = lambda2
        self.cv = cv
        self.grid_size = grid_size
        self.seed = seed
        self.one_se = one_se

    def fit(self, X, y, t):
        X = as_2d_float(X, "X")
        y = as_1d_float(y, "y")
        t = as_1d_float(t, "t")
        check_same_length(X.shape[0], (y.shape[0], "y"), (t.shape[0], "t"))
        names = tuple(f"x{j + 1}" for j in range(X.shape[1]))
        data = Dataset(y, t, X, names)
        data_std, _ = standardize(data) if self.standardize else (data, None)
        pr_full = partial_out(data_std, self._smoother_config())
        grid = default_lambda1_grid(pr_full, grid_size=self.grid_size)
        plan = CvPlan(
            k=self.cv,
            lambda1_grid=grid,
            lambda2=self.lambda2,
            seed=self.seed,
            fold_assignment=make_folds(X.shape[0], self.cv, self.seed),
        )
        self.cv_result_ = cross_validate(
            data_std, plan, self._smoother_config(), "enet",
            one_se=self.one_se, options=self._options(),
        )
        self.lambda1_ = self.cv_result_.selected_lambda1
        return super().fit(X, y, t)

    def _solve(self, pr, options):
        return fit_penalized(pr, PenaltySpec.enet(self.lambda1_, self.lambda2), options=options)
