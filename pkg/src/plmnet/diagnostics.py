"""Fit diagnostics: the group-effect bound, stationarity certification, and
coefficient-error metrics.

The group-effect quantity for a column pair (k, l) is D = |b_k - b_l|. When
both coefficients share a sign and lambda2 > 0, subtracting the two active
stationarity equations bounds it by

    D <= (2 m / lambda2) * sum_i |r_i|,

with m = max_i |x_ik - x_il| taken over the standardized pre-smoothing
design and r the fitted partial-residual errors. Near-identical columns
(m -> 0) therefore force near-identical coefficients: the quantitative form
of the grouping behavior that the l1-only estimators lack.
"""

from dataclasses import dataclass

import numpy as np

from .data import CoefficientVector
from .exceptions import DimensionError, GroupEffectUndefinedError
from .validation import as_2d_float

__all__ = ["GroupEffectReport", "group_effect", "group_effect_reports", "kkt_check", "mse"]


@dataclass(frozen=True)
class GroupEffectReport:
    """Pairwise coefficient gap, its bound ingredients, and the sign hypothesis."""

    pair: tuple[int, int]
    d_value: float
    m_value: float
    bound: float
    sign_condition_met: bool
    residual_l1: float
    flipped: bool = False

    @property
    def holds(self) -> bool:
        return self.d_value <= self.bound


def _report(beta_k, beta_l, col_k, col_l, residual_l1, lambda2, pair, flipped):
    d = abs(beta_k - beta_l)
    m = float(np.max(np.abs(col_k - col_l)))
    return GroupEffectReport(
        pair=pair,
        d_value=float(d),
        m_value=m,
        bound=2.0 * m / lambda2 * residual_l1,
        sign_condition_met=bool(beta_k * beta_l > 0),
        residual_l1=residual_l1,
        flipped=flipped,
    )


def group_effect(fit, raw_x, pair, lambda2) -> GroupEffectReport:
    """Group-effect report for one column pair of a converged elastic-net fit.

    Parameters
    ----------
    fit : FitResult
    raw_x : array (n, p)
        The standardized design BEFORE kernel residualization; m is defined on
        these columns, not on the partial residuals.
    pair : (k, l)
        Zero-based column indices, k != l.
    lambda2 : float
        Must be positive; the bound divides by it.

    The report is computed even when the sign hypothesis b_k * b_l > 0 fails;
    ``sign_condition_met`` records whether the bound's premise held.
    """
    if not (lambda2 > 0):
        raise GroupEffectUndefinedError("the group-effect bound requires lambda2 > 0")
    x = as_2d_float(raw_x, "raw_x")
    k, l = pair
    if k == l:
        raise ValueError("pair must name two distinct columns")
    p = len(fit.beta.values)
    if x.shape[1] != p:
        raise DimensionError(f"raw_x has {x.shape[1]} columns, fit has {p} coefficients")
    if not (0 <= k < p and 0 <= l < p):
        raise IndexError(f"pair {pair} out of range for p={p}")
    residual_l1 = float(np.sum(np.abs(fit.residuals)))
    b = fit.beta.values
    return _report(b[k], b[l], x[:, k], x[:, l], residual_l1, lambda2, (k, l), flipped=False)


def group_effect_reports(fit, raw_x, pair, lambda2, sign_flip=True) -> list[GroupEffectReport]:
    """Primary report, plus a sign-flipped one when the sign hypothesis fails.

    Negating column k maps the fit to an equivalent problem whose minimizer
    has -b_k in coordinate k and identical residuals, so the flipped report
    needs no refit: it evaluates |b_k + b_l| against m = max_i |x_ik + x_il|.
    """
    primary = group_effect(fit, raw_x, pair, lambda2)
    reports = [primary]
    if sign_flip and not primary.sign_condition_met:
        x = as_2d_float(raw_x, "raw_x")
        k, l = pair
        b = fit.beta.values
        residual_l1 = primary.residual_l1
        reports.append(
            _report(-b[k], b[l], -x[:, k], x[:, l], residual_l1, lambda2, (k, l), flipped=True)
        )
    return reports


def kkt_check(fit, pr, spec, tol) -> tuple[float, bool]:
    """Independent stationarity certificate for a penalized fit.

    Recomputes the residuals from the coefficients. Active coordinates must
    satisfy -2 x_k'y + 2 x_k'(X b) + lam1 w_k sgn(b_k) + 2 lam2 b_k = 0 within
    tol; inactive ones contribute max(0, |2 x_k'r| - lam1 w_k). Returns
    (max violation, max violation <= tol).
    """
    if not (tol > 0):
        raise ValueError("tol must be positive")
    x = np.asarray(pr.x_tilde)
    y = np.asarray(pr.y_tilde)
    b = fit.beta.values
    if b.shape[0] != x.shape[1]:
        raise DimensionError("fit and partial residuals disagree on p")
    r = y - x @ b
    lam1w = spec.lambda1 * spec.l1_weights(x.shape[1])
    a = -2.0 * (x.T @ r) + 2.0 * spec.lambda2 * b
    viol = np.where(
        b != 0.0,
        np.abs(a + lam1w * np.sign(b)),
        np.maximum(np.abs(a) - lam1w, 0.0),
    )
    worst = float(np.max(viol))
    return worst, worst <= tol


def mse(beta_hat, beta_true) -> float:
    """Squared Euclidean distance ||beta_hat - beta_true||^2."""
    a = beta_hat.values if isinstance(beta_hat, CoefficientVector) else np.asarray(beta_hat, dtype=np.float64)
    b = beta_true.values if isinstance(beta_true, CoefficientVector) else np.asarray(beta_true, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"coefficient vectors disagree: {a.shape} vs {b.shape}")
    diff = a - b
    return float(diff @ diff)
