"""Nadaraya-Watson smoothing in the scalar covariate and partial residuals.

The partial-out step reduces the partially linear model
``y = x'beta + f(t) + eps`` to a linear one by subtracting kernel estimates of
the conditional means given t:

    y_tilde = y - mhat_y(t),    x_tilde = x - mhat_x(t)

Smoothing at the sample points keeps the evaluation point in its own window
(leave-self-in); a leave-one-out variant exists for diagnostics only.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.exceptions import NotFittedError

from .exceptions import DimensionError, EmptyNeighborhoodError
from .kernels import SmootherConfig, kernel_function
from .validation import as_1d_float

__all__ = ["nw_smooth", "partial_out", "PartialResiduals", "NadarayaWatsonSmoother"]


def _weight_matrix(t_train, t_eval, config):
    h = config.resolve_bandwidth(t_train.shape[0])
    k = kernel_function(config.kernel)
    return k((t_train[None, :] - t_eval[:, None]) / h)


def _anchored_average(weights, values, on_empty="raise"):
    """Row-normalized weighted averages of `values` (n x p), anchored per column.

    Anchoring at the column minimum makes constant columns reproduce exactly:
    the weighted sum of an all-zero offset column is exactly zero in floating
    point, whatever the weights.
    """
    denom = weights.sum(axis=1)
    empty = denom == 0.0
    n_empty = int(np.count_nonzero(empty))
    if n_empty and on_empty == "raise":
        idx = np.flatnonzero(empty)[:5].tolist()
        raise EmptyNeighborhoodError(
            f"{n_empty} evaluation point(s) have no kernel neighbor in the sample "
            f"(first indices {idx}); widen the bandwidth or use an unbounded kernel"
        )
    anchor = values.min(axis=0)
    safe = np.where(empty, 1.0, denom)
    fitted = anchor + (weights @ (values - anchor)) / safe[:, None]
    if n_empty:
        fitted[empty] = values.mean(axis=0)
    return fitted, n_empty


def nw_smooth(values, t, config, t_eval=None, leave_one_out=False):
    """Kernel-weighted local averages of `values` over windows in t.

    Parameters
    ----------
    values : array, shape (n,) or (n, p)
        Quantities to smooth; matrix columns are smoothed independently.
    t : array, shape (n,)
        Scalar covariate at the sample points.
    config : SmootherConfig
    t_eval : array, optional
        Evaluation points; defaults to the sample points themselves.
    leave_one_out : bool
        Zero the self-weight when evaluating at the sample points
        (diagnostic use only; the estimator proper sums over all points).

    Returns
    -------
    Fitted means with shape (len(t_eval),) or (len(t_eval), p).

    Raises
    ------
    EmptyNeighborhoodError
        If some evaluation point receives zero total kernel weight (possible
        for bounded-support kernels evaluated off-sample).
    """
    t = as_1d_float(t, "t")
    vals = np.asarray(values, dtype=np.float64)
    squeeze = vals.ndim == 1
    v2d = vals.reshape(-1, 1) if squeeze else vals
    if v2d.shape[0] != t.shape[0]:
        raise DimensionError(f"values has {v2d.shape[0]} rows, t has {t.shape[0]}")
    at_sample = t_eval is None
    te = t if at_sample else as_1d_float(t_eval, "t_eval")
    if leave_one_out and not at_sample:
        raise ValueError("leave_one_out only applies when evaluating at the sample points")
    weights = _weight_matrix(t, te, config)
    if leave_one_out:
        np.fill_diagonal(weights, 0.0)
    fitted, _ = _anchored_average(weights, v2d, on_empty="raise")
    return fitted[:, 0] if squeeze else fitted


@dataclass(frozen=True)
class PartialResiduals:
    """Kernel-residualized design and response.

    ``x_tilde`` and ``y_tilde`` are exactly the one-subtraction results
    ``x - mx_hat`` and ``y - my_hat``; re-running those subtractions
    reproduces them bit-for-bit.
    """

    x_tilde: np.ndarray
    y_tilde: np.ndarray
    config: SmootherConfig
    mx_hat: np.ndarray
    my_hat: np.ndarray
    column_names: tuple[str, ...] = ()

    def __post_init__(self):
        n, p = self.x_tilde.shape
        if self.y_tilde.shape != (n,) or self.mx_hat.shape != (n, p) or self.my_hat.shape != (n,):
            raise DimensionError("partial-residual arrays disagree on (n, p)")
        for a in (self.x_tilde, self.y_tilde, self.mx_hat, self.my_hat):
            a.flags.writeable = False

    @property
    def n(self) -> int:
        return self.x_tilde.shape[0]

    @property
    def p(self) -> int:
        return self.x_tilde.shape[1]

    def names(self) -> tuple[str, ...]:
        return self.column_names or tuple(f"x{j + 1}" for j in range(self.p))


def partial_out(dataset, config=SmootherConfig(), leave_one_out=False) -> PartialResiduals:
    """Build the partial residuals of a Dataset under the given smoother."""
    cfg = config.resolved(dataset.n)
    my_hat = nw_smooth(dataset.y, dataset.t, cfg, leave_one_out=leave_one_out)
    mx_hat = nw_smooth(dataset.x, dataset.t, cfg, leave_one_out=leave_one_out)
    return PartialResiduals(
        x_tilde=dataset.x - mx_hat,
        y_tilde=dataset.y - my_hat,
        config=cfg,
        mx_hat=mx_hat,
        my_hat=my_hat,
        column_names=dataset.column_names,
    )


class NadarayaWatsonSmoother(RegressorMixin, BaseEstimator):
    """Nadaraya-Watson conditional-mean estimator with a scikit-learn face.

    fit(t, values) memorizes the sample; predict(t_new) returns kernel-weighted
    averages of the training values at the new points. Evaluation points with
    an empty bounded-support window fall back to the training mean when
    ``on_empty="train_mean"`` (the count is kept in ``n_fallback_``).
    """

    def __init__(self, kernel="box", bandwidth=None, bandwidth_c=1.0, on_empty="raise"):
        self.kernel = kernel
        self.bandwidth = bandwidth
        self.bandwidth_c = bandwidth_c
        self.on_empty = on_empty

    def _config(self, n):
        return SmootherConfig(self.kernel, self.bandwidth, self.bandwidth_c).resolved(n)

    def fit(self, t, values):
        t = as_1d_float(np.asarray(t).ravel(), "t")
        vals = np.asarray(values, dtype=np.float64)
        self._squeeze = vals.ndim == 1
        self.t_ = t
        self.values_ = vals.reshape(-1, 1) if self._squeeze else vals
        if self.values_.shape[0] != t.shape[0]:
            raise DimensionError("t and values disagree on the number of observations")
        self.config_ = self._config(t.shape[0])
        self.n_fallback_ = 0
        return self

    def predict(self, t):
        if not hasattr(self, "t_"):
            raise NotFittedError("NadarayaWatsonSmoother is not fitted")
        te = as_1d_float(np.asarray(t).ravel(), "t")
        weights = _weight_matrix(self.t_, te, self.config_)
        fitted, n_empty = _anchored_average(
            weights, self.values_, on_empty="mean" if self.on_empty == "train_mean" else "raise"
        )
        self.n_fallback_ += n_empty
        return fitted[:, 0] if self._squeeze else fitted
