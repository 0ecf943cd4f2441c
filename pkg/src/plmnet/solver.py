"""Penalized least-squares solvers on partial residuals.

The family minimizes, over coefficient vectors b,

    L(lam1, lam2, b) = ||y_tilde - X_tilde b||^2 + lam2 ||b||^2 + lam1 ||b||_1

with an UNSCALED residual sum of squares: there is no 1/n or 1/(2n) factor,
so lam1/lam2 values are not interchangeable with per-observation conventions
(scikit-learn, glmnet). Use :func:`sklearn_equivalent_params` to convert.

Method tags: ``enet`` (both penalties), ``lasso`` (lam2 = 0), ``alasso``
(weighted l1, lam2 = 0), ``ridge`` (lam1 = 0), ``ols`` (no penalty).

The production solver is cyclic coordinate descent with soft thresholding:

    b_k <- S(2 sum_i x_ik (y_i - sum_{j != k} b_j x_ij), lam1 w_k)
           / (2 sum_i x_ik^2 + 2 lam2)

A fit is reported converged only when a recomputed stationarity certificate
holds at the solver tolerance. Exact duplicate columns (bitwise-equal) are
averaged each sweep when lam2 > 0, so such groups exit with exactly equal
coefficients; with lam2 = 0 the minimizer over a duplicate group is genuinely
non-unique and the path-dependent result is returned with a note.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ._cd import cd_gram, cd_naive
from .exceptions import DimensionError, InvalidPenaltyError
from .data import CoefficientVector
from .validation import as_1d_float, as_2d_float

__all__ = [
    "PenaltySpec",
    "SolverOptions",
    "FitResult",
    "AugmentedProblem",
    "soft_threshold",
    "objective",
    "lambda1_max",
    "duplicate_column_groups",
    "fit_penalized",
    "augment_to_lasso",
    "fit_via_augmentation",
    "fit_ridge_closed_form",
    "fit_alasso",
    "ridge_weights",
    "sklearn_equivalent_params",
]

METHODS = ("enet", "lasso", "alasso", "ridge", "ols")

ALASSO_WEIGHT_GUARD = 1e-6
ALASSO_INIT_RIDGE_PER_N = 1e-3


@dataclass(frozen=True)
class PenaltySpec:
    """Estimator family tag with its penalty levels and optional l1 weights."""

    method: str
    lambda1: float = 0.0
    lambda2: float = 0.0
    adaptive_weights: np.ndarray | None = None
    adaptive_gamma: float = 1.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidPenaltyError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise InvalidPenaltyError("penalty levels must be nonnegative")
        if self.method == "lasso" and self.lambda2 != 0:
            raise InvalidPenaltyError("lasso requires lambda2 = 0 (use method='enet' for a ridge term)")
        if self.method == "ridge" and self.lambda1 != 0:
            raise InvalidPenaltyError("ridge requires lambda1 = 0")
        if self.method == "ols" and (self.lambda1 != 0 or self.lambda2 != 0):
            raise InvalidPenaltyError("ols requires lambda1 = lambda2 = 0")
        if self.method == "alasso":
            if self.lambda2 != 0:
                raise InvalidPenaltyError("alasso requires lambda2 = 0")
            if self.adaptive_weights is None:
                raise InvalidPenaltyError("alasso requires adaptive_weights")
            w = as_1d_float(self.adaptive_weights, "adaptive_weights")
            if np.any(w <= 0):
                raise InvalidPenaltyError("adaptive_weights must be strictly positive")
            w.flags.writeable = False
            object.__setattr__(self, "adaptive_weights", w)
        elif self.adaptive_weights is not None:
            raise InvalidPenaltyError("adaptive_weights only apply to method='alasso'")
        if not (self.adaptive_gamma > 0):
            raise InvalidPenaltyError("adaptive_gamma must be positive")

    @classmethod
    def enet(cls, lambda1, lambda2):
        return cls("enet", lambda1=lambda1, lambda2=lambda2)

    @classmethod
    def lasso(cls, lambda1):
        return cls("lasso", lambda1=lambda1)

    @classmethod
    def alasso(cls, lambda1, weights, gamma=1.0):
        return cls("alasso", lambda1=lambda1, adaptive_weights=weights, adaptive_gamma=gamma)

    @classmethod
    def ridge(cls, lambda2):
        return cls("ridge", lambda2=lambda2)

    @classmethod
    def ols(cls):
        return cls("ols")

    def l1_weights(self, p) -> np.ndarray:
        """Per-coordinate l1 weights (all ones except for the adaptive lasso)."""
        if self.method == "alasso":
            if len(self.adaptive_weights) != p:
                raise DimensionError(
                    f"{len(self.adaptive_weights)} adaptive weights for {p} columns"
                )
            return np.asarray(self.adaptive_weights)
        return np.ones(p)


@dataclass(frozen=True)
class SolverOptions:
    tolerance: float = 1e-8
    max_iterations: int = 10_000

    def __post_init__(self):
        if not (self.tolerance > 0):
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class FitResult:
    """A solved penalized fit on partial residuals."""

    beta: CoefficientVector
    residuals: np.ndarray
    objective: float
    iterations: int
    converged: bool
    dual_gap_proxy: float
    spec: PenaltySpec
    messages: tuple[str, ...] = ()
    objective_trace: np.ndarray | None = field(default=None, repr=False)

    @property
    def nonzero_count(self) -> int:
        return int(np.count_nonzero(self.beta.values))


def soft_threshold(z, gamma):
    """S(z, gamma) = sign(z) * max(|z| - gamma, 0)."""
    return np.sign(z) * np.maximum(np.abs(z) - gamma, 0.0)


def _max_stationarity_violation(x, y, lam1w, lam2, beta):
    r = y - x @ beta
    a = -2.0 * (x.T @ r) + 2.0 * lam2 * beta
    viol = np.where(
        beta != 0.0,
        np.abs(a + lam1w * np.sign(beta)),
        np.maximum(np.abs(a) - lam1w, 0.0),
    )
    return float(np.max(viol))


def _pr_arrays(pr):
    return np.ascontiguousarray(pr.x_tilde), np.ascontiguousarray(pr.y_tilde)


def objective(beta, pr, spec) -> float:
    """Evaluate the penalized objective at `beta` on the given partial residuals."""
    b = beta.values if isinstance(beta, CoefficientVector) else as_1d_float(beta, "beta")
    x, y = _pr_arrays(pr)
    if b.shape[0] != x.shape[1]:
        raise DimensionError(f"beta has {b.shape[0]} entries for {x.shape[1]} columns")
    r = y - x @ b
    w = spec.l1_weights(x.shape[1])
    return float(r @ r + spec.lambda2 * (b @ b) + spec.lambda1 * (w @ np.abs(b)))


def lambda1_max(pr, spec=None) -> float:
    """Smallest lambda1 at which the penalized solution is exactly zero.

    From the inactive-coordinate stationarity bound |2 x_k'y| <= lam1 w_k:
    lam1_max = max_k |2 x_k'y| / w_k.
    """
    x, y = _pr_arrays(pr)
    corr = np.abs(2.0 * (x.T @ y))
    if spec is not None and spec.method == "alasso":
        corr = corr / spec.l1_weights(x.shape[1])
    return float(np.max(corr))


def duplicate_column_groups(x) -> tuple[np.ndarray, int]:
    """Group bitwise-identical columns. Returns (group_id per column, n_groups).

    Columns outside any duplicate group get id -1.
    """
    x = np.asarray(x)
    seen: dict[bytes, list[int]] = {}
    for j in range(x.shape[1]):
        seen.setdefault(np.ascontiguousarray(x[:, j]).tobytes(), []).append(j)
    group_id = np.full(x.shape[1], -1, dtype=np.int64)
    n_groups = 0
    for cols in seen.values():
        if len(cols) > 1:
            group_id[cols] = n_groups
            n_groups += 1
    return group_id, n_groups


def _run_cd(x, y, lam1w, lam2, beta0, options, record_objective, symmetrize=True):
    n, p = x.shape
    beta = np.zeros(p) if beta0 is None else np.array(beta0, dtype=np.float64, copy=True)
    if beta.shape != (p,):
        raise DimensionError(f"warm start has shape {beta.shape}, expected ({p},)")
    if symmetrize and lam2 > 0.0:
        group_id, n_groups = duplicate_column_groups(x)
    else:
        group_id, n_groups = np.full(p, -1, dtype=np.int64), 0
    trace = np.full(options.max_iterations + 1, np.nan) if record_objective else np.empty(1)
    kernel = cd_gram if p <= n else cd_naive
    if kernel is cd_gram:
        g2 = 2.0 * (x.T @ x)
        c2 = 2.0 * (x.T @ y)
        yty = float(y @ y)
        sweeps, converged, kkt = cd_gram(
            g2, c2, yty, lam1w, lam2, beta, group_id, n_groups,
            options.tolerance, options.max_iterations, trace, record_objective,
        )
    else:
        sweeps, converged, kkt = cd_naive(
            np.ascontiguousarray(x), np.ascontiguousarray(y), lam1w, lam2, beta,
            group_id, n_groups, options.tolerance, options.max_iterations, trace,
            record_objective,
        )
    trace_out = trace[: sweeps + 1].copy() if record_objective else None
    return beta, int(sweeps), bool(converged), float(kkt), trace_out, n_groups


def fit_penalized(pr, spec, options=SolverOptions(), beta0=None, record_objective=False) -> FitResult:
    """Minimize the penalized objective by cyclic coordinate descent.

    `beta0` warm-starts the solver. Non-convergence within
    ``options.max_iterations`` sweeps is reported through
    ``FitResult.converged``; no exception is raised.
    """
    x, y = _pr_arrays(pr)
    p = x.shape[1]
    lam1w = spec.lambda1 * spec.l1_weights(p)
    beta, sweeps, converged, kkt, trace, n_groups = _run_cd(
        x, y, lam1w, spec.lambda2, beta0, options, record_objective
    )
    messages = []
    if spec.lambda2 == 0.0 and duplicate_column_groups(x)[1] > 0:
        messages.append(
            "design has exactly duplicated columns and lambda2 = 0: the minimizer is "
            "non-unique over each duplicate group; reporting the path-dependent solution"
        )
    residuals = y - x @ beta
    coef = CoefficientVector(beta, pr.names())
    return FitResult(
        beta=coef,
        residuals=residuals,
        objective=objective(beta, pr, spec),
        iterations=sweeps,
        converged=converged,
        dual_gap_proxy=kkt,
        spec=spec,
        messages=tuple(messages),
        objective_trace=trace,
    )


@dataclass(frozen=True)
class AugmentedProblem:
    """Ridge-augmented design on which the elastic net reduces to a lasso.

    x_star stacks scale * X_tilde over scale * sqrt(lam2) * I, y_star pads the
    response with p zeros, scale = (1 + lam2)**-0.5, and the equivalent lasso
    level is lambda_star = lam1 * scale. The elastic-net minimizer is
    scale * (lasso minimizer on the augmented problem).
    """

    x_star: np.ndarray
    y_star: np.ndarray
    scale: float
    lambda_star: float


def augment_to_lasso(pr, lambda2, lambda1) -> AugmentedProblem:
    """Build the augmented lasso problem equivalent to the elastic net."""
    if lambda2 < 0 or lambda1 < 0:
        raise InvalidPenaltyError("penalty levels must be nonnegative")
    x, y = _pr_arrays(pr)
    n, p = x.shape
    scale = (1.0 + lambda2) ** -0.5
    x_star = np.vstack([scale * x, scale * np.sqrt(lambda2) * np.eye(p)])
    y_star = np.concatenate([y, np.zeros(p)])
    return AugmentedProblem(x_star=x_star, y_star=y_star, scale=scale, lambda_star=lambda1 * scale)


def fit_via_augmentation(pr, spec, options=SolverOptions()) -> FitResult:
    """Solve the elastic net through its augmented-lasso form (cross-check path).

    Exists to certify the production solver, not to replace it.
    """
    if spec.method not in ("enet", "lasso", "ols"):
        raise InvalidPenaltyError("augmentation path applies to unweighted l1/l2 penalties")
    aug = augment_to_lasso(pr, spec.lambda2, spec.lambda1)
    p = aug.x_star.shape[1]
    lam1w = aug.lambda_star * np.ones(p)
    beta_star, sweeps, converged, kkt, _, _ = _run_cd(
        aug.x_star, aug.y_star, lam1w, 0.0, None, options, False, symmetrize=False
    )
    beta = aug.scale * beta_star
    x, y = _pr_arrays(pr)
    gid, n_groups = duplicate_column_groups(x)
    if n_groups and spec.lambda2 > 0.0:
        for g in range(n_groups):
            members = gid == g
            beta[members] = beta[members].mean()
    residuals = y - x @ beta
    lam1w_orig = spec.lambda1 * spec.l1_weights(x.shape[1])
    return FitResult(
        beta=CoefficientVector(beta, pr.names()),
        residuals=residuals,
        objective=objective(beta, pr, spec),
        iterations=sweeps,
        converged=converged,
        dual_gap_proxy=_max_stationarity_violation(x, y, lam1w_orig, spec.lambda2, beta),
        spec=spec,
        messages=("solved via ridge-augmented lasso",),
    )


def fit_ridge_closed_form(pr, lambda2) -> FitResult:
    """Ridge fit by a direct linear solve of (X'X + lam2 I) b = X'y."""
    if not (lambda2 > 0):
        raise InvalidPenaltyError("closed-form ridge requires lambda2 > 0")
    x, y = _pr_arrays(pr)
    p = x.shape[1]
    a = x.T @ x + lambda2 * np.eye(p)
    beta = scipy.linalg.solve(a, x.T @ y, assume_a="pos")
    messages = []
    if p <= 500:
        cond = float(np.linalg.cond(a))
        if cond > 1e10:
            messages.append(f"ridge system is ill-conditioned (cond ~ {cond:.2e}); solution kept")
            warnings.warn(messages[-1], RuntimeWarning, stacklevel=2)
    spec = PenaltySpec.ridge(lambda2)
    residuals = y - x @ beta
    grad = -2.0 * (x.T @ residuals) + 2.0 * lambda2 * beta
    return FitResult(
        beta=CoefficientVector(beta, pr.names()),
        residuals=residuals,
        objective=objective(beta, pr, spec),
        iterations=0,
        converged=True,
        dual_gap_proxy=float(np.max(np.abs(grad))),
        spec=spec,
        messages=tuple(messages),
    )


def ridge_weights(pr, gamma=1.0, init_lambda2=None) -> tuple[np.ndarray, FitResult]:
    """Adaptive-lasso weights w_j = 1 / (|b_init_j| + 1e-6)**gamma from a ridge pilot.

    The pilot is a ridge fit with a small penalty (1e-3 * n by default), which
    exists even when p >> n where least squares does not.
    """
    lam2 = ALASSO_INIT_RIDGE_PER_N * pr.n if init_lambda2 is None else init_lambda2
    init = fit_ridge_closed_form(pr, lam2)
    weights = 1.0 / (np.abs(init.beta.values) + ALASSO_WEIGHT_GUARD) ** gamma
    return weights, init


def fit_alasso(pr, lambda1, gamma=1.0, options=SolverOptions(), init_lambda2=None, weights=None) -> FitResult:
    """Adaptive lasso: ridge-pilot weights, then a weighted-l1 coordinate descent."""
    if weights is None:
        weights, _ = ridge_weights(pr, gamma=gamma, init_lambda2=init_lambda2)
    spec = PenaltySpec.alasso(lambda1, weights, gamma=gamma)
    return fit_penalized(pr, spec, options=options)


def sklearn_equivalent_params(lambda1, lambda2, n) -> tuple[float, float]:
    """Map (lambda1, lambda2) on the unscaled objective to scikit-learn's (alpha, l1_ratio).

    scikit-learn's ElasticNet minimizes
    (1/(2n)) ||y - Xb||^2 + alpha * l1_ratio * ||b||_1
    + 0.5 * alpha * (1 - l1_ratio) * ||b||^2,
    which is our objective divided by 2n.
    """
    if lambda1 < 0 or lambda2 < 0:
        raise InvalidPenaltyError("penalty levels must be nonnegative")
    if lambda1 == 0 and lambda2 == 0:
        return 0.0, 1.0
    l1_term = lambda1 / (2.0 * n)
    l2_term = lambda2 / n
    alpha = l1_term + l2_term
    return alpha, l1_term / alpha
