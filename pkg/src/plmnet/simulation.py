"""Reproducible simulation studies for the partially linear elastic net.

Two generators:

* :func:`generate_dgp` draws the correlated benchmark design with an exactly
  duplicated column pair and a mixed fourth column, response
  y = x'beta + t^2 + eps. It is the standard stress test for grouping
  behavior under collinearity.
* :func:`generate_pggn` builds p >> n designs with highly correlated
  predictor groups and a 0/1 response (fit by squared loss, classified by
  thresholding), for studying selection beyond the sample-size limit.

Every replicate owns an RNG stream derived from (seed, replicate index), so
serial and thread-parallel runs produce bit-identical reports.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .data import CoefficientVector, Dataset, standardize, unstandardize_coefficients
from .diagnostics import group_effect, mse
from .exceptions import ConfigurationError, ExperimentError
from .kernels import SmootherConfig
from .model_selection import CvPlan, cross_validate, default_lambda1_grid, make_folds
from .smoothing import partial_out
from .solver import (
    PenaltySpec,
    SolverOptions,
    fit_penalized,
    fit_ridge_closed_form,
    ridge_weights,
)

__all__ = [
    "SimulationConfig",
    "ExperimentReport",
    "generate_dgp",
    "run_experiment",
    "generate_pggn",
    "pggn_group_indices",
    "run_pggn_study",
    "BENCHMARK_BETA",
]

BENCHMARK_BETA = np.array([-2.0, 1.0, 1.0, 0.0, 2.0 / 3.0, 0.0, 0.0, 0.0])
BENCHMARK_NAMES = tuple(f"x{j}" for j in range(1, 9))
METHOD_ORDER = ("lasso", "alasso", "ridge", "enet")

SELECTION_CUT = 1e-10  # |beta| above this counts as selected (absorbs boundary hover)
REPORT_CUT = 1e-3  # |beta| above this counts as a reported effect

DUPLICATE_PAIR = (1, 2)  # zero-based indices of the bitwise-identical columns


@dataclass(frozen=True)
class SimulationConfig:
    """Benchmark experiment settings."""

    n: int = 1000
    reps: int = 50
    sigma: float = 0.2
    lambda2: float = 1.0 / 3.0
    cv_folds: int = 10
    seed: int = 0
    f_nonparametric: str = "tsquared"
    kernel: str = "box"
    bandwidth_c: float = 1.0
    grid_size: int = 100
    one_se: bool = True

    def __post_init__(self):
        if self.n < 10:
            raise ConfigurationError("n must be at least 10")
        if self.reps < 1:
            raise ConfigurationError("reps must be at least 1")
        if not (self.sigma > 0):
            raise ConfigurationError("sigma must be positive")
        if self.lambda2 < 0:
            raise ConfigurationError("lambda2 must be nonnegative")
        if self.f_nonparametric != "tsquared":
            raise ConfigurationError(f"unknown nonparametric part {self.f_nonparametric!r}")


def generate_dgp(config, rep_index) -> tuple[Dataset, CoefficientVector]:
    """One replicate of the benchmark design, deterministic in (seed, rep_index).

    Columns: x1, x2 iid N(0,1); x3 = x2 bitwise; x4 = (2/3)x1 + (1/3)x2 +
    (1/3)x3 + (2/3)e; x5..x8 iid N(0,1); t ~ U[-1,1];
    y = x'beta + t^2 + N(0, sigma^2) with beta = (-2, 1, 1, 0, 2/3, 0, 0, 0).
    """
    rng = np.random.default_rng([config.seed, rep_index])
    n = config.n
    draws = rng.standard_normal((n, 7))  # x1, x2, x5, x6, x7, x8, e
    x1, x2, x5, x6, x7, x8, e = draws.T
    x3 = x2.copy()
    x4 = (2.0 / 3.0) * x1 + (1.0 / 3.0) * x2 + (1.0 / 3.0) * x3 + (2.0 / 3.0) * e
    x = np.column_stack([x1, x2, x3, x4, x5, x6, x7, x8])
    t = rng.uniform(-1.0, 1.0, size=n)
    eps = config.sigma * rng.standard_normal(n)
    y = x @ BENCHMARK_BETA + t * t + eps
    return Dataset(y, t, x, BENCHMARK_NAMES), CoefficientVector(BENCHMARK_BETA, BENCHMARK_NAMES)


@dataclass(frozen=True)
class ExperimentReport:
    """Aggregates of the four-method comparison across replicates."""

    config: SimulationConfig
    column_names: tuple[str, ...]
    mean_coefficients: dict
    mse_mean: dict
    mse_values: dict
    selection_frequency: dict
    mean_count_above_cut: dict
    selected_penalty: dict
    selected_grid_index: dict
    replicate_coefficients: dict
    n_failed: dict
    group_effect_pair: tuple[int, int]
    group_d_values: np.ndarray
    group_m_values: np.ndarray
    group_bounds: np.ndarray
    enet_pair_gap_max: float

    def summary_dict(self) -> dict:
        """JSON-ready summary (used by the CLI)."""
        return {
            "n": self.config.n,
            "reps": self.config.reps,
            "sigma": self.config.sigma,
            "lambda2": self.config.lambda2,
            "cv_folds": self.config.cv_folds,
            "seed": self.config.seed,
            "one_se": self.config.one_se,
            "columns": list(self.column_names),
            "mean_coefficients": {m: list(v) for m, v in self.mean_coefficients.items()},
            "mse_mean": dict(self.mse_mean),
            "selection_frequency": {m: list(v) for m, v in self.selection_frequency.items()},
            "mean_count_above_cut": dict(self.mean_count_above_cut),
            "report_cut": REPORT_CUT,
            "selection_cut": SELECTION_CUT,
            "n_failed": dict(self.n_failed),
            "group_effect": {
                "pair": [self.group_effect_pair[0] + 1, self.group_effect_pair[1] + 1],
                "d_max": float(np.max(self.group_d_values)) if self.group_d_values.size else None,
                "m_max": float(np.max(self.group_m_values)) if self.group_m_values.size else None,
                "bound_max": float(np.max(self.group_bounds)) if self.group_bounds.size else None,
            },
            "enet_pair_gap_max": self.enet_pair_gap_max,
        }


def _fit_method_cv(data_std, pr, info, method, config, fold_assignment, options):
    """CV-tune one method on a standardized replicate and refit on all rows.

    Returns (original-scale coefficients, fit, selected penalty, selected index).
    """
    smoother = SmootherConfig(config.kernel, None, config.bandwidth_c)
    if method == "alasso":
        weights, _ = ridge_weights(pr)
        grid_spec = PenaltySpec.alasso(1.0, weights)
        grid = default_lambda1_grid(pr, grid_spec, config.grid_size)
    else:
        grid = default_lambda1_grid(pr, grid_size=config.grid_size)
    lambda2 = config.lambda2 if method == "enet" else 0.0
    plan = CvPlan(
        k=config.cv_folds,
        lambda1_grid=grid,
        lambda2=lambda2,
        seed=config.seed,
        fold_assignment=fold_assignment,
    )
    cv = cross_validate(
        data_std, plan, smoother, method, one_se=config.one_se, options=options
    )
    lam = cv.selected_lambda1
    if method == "enet":
        fit = fit_penalized(pr, PenaltySpec.enet(lam, config.lambda2), options=options)
    elif method == "lasso":
        fit = fit_penalized(pr, PenaltySpec.lasso(lam), options=options)
    elif method == "alasso":
        fit = fit_penalized(pr, PenaltySpec.alasso(lam, weights), options=options)
    else:
        fit = fit_ridge_closed_form(pr, lam)
    beta_orig, _ = unstandardize_coefficients(fit.beta, info)
    return beta_orig, fit, lam, cv.selected_index


def _run_replicate(config, rep, options):
    data, beta_true = generate_dgp(config, rep)
    data_std, info = standardize(data)
    smoother = SmootherConfig(config.kernel, None, config.bandwidth_c)
    pr = partial_out(data_std, smoother)
    fold_seed = np.random.default_rng([config.seed, rep, 1]).integers(2**63)
    folds = make_folds(config.n, config.cv_folds, fold_seed)
    out = {"rep": rep}
    for method in METHOD_ORDER:
        beta_orig, fit, lam, idx = _fit_method_cv(
            data_std, pr, info, method, config, folds, options
        )
        out[method] = {
            "beta": beta_orig.values,
            "converged": fit.converged,
            "mse": mse(beta_orig, beta_true),
            "selected_penalty": lam,
            "selected_index": idx,
        }
        if method == "enet":
            if config.lambda2 > 0:
                report = group_effect(fit, data_std.x, DUPLICATE_PAIR, config.lambda2)
                out["group_effect"] = report
            out["pair_gap"] = abs(fit.beta.values[DUPLICATE_PAIR[0]] - fit.beta.values[DUPLICATE_PAIR[1]])
    return out


def run_experiment(config=SimulationConfig(), options=SolverOptions(), threads=None) -> ExperimentReport:
    """Run the replicated four-method comparison.

    Replicates run on independent RNG streams and may execute concurrently
    (``threads`` defaults to the PLM_ENET_THREADS environment variable);
    results are reduced in replicate order, so the report is bit-identical
    regardless of the thread cap. A replicate whose final fit fails to
    converge is excluded from that method's averages and counted; more than
    10% failures for any method aborts the run.
    """
    if threads is None:
        threads = int(os.environ.get("PLM_ENET_THREADS", "1") or "1")
    reps = range(config.reps)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda r: _run_replicate(config, r, options), reps))
    else:
        results = [_run_replicate(config, r, options) for r in reps]

    p = len(BENCHMARK_NAMES)
    mean_coefficients, mse_mean, mse_values = {}, {}, {}
    selection_frequency, mean_count_above_cut = {}, {}
    selected_penalty, selected_grid_index, replicate_coefficients, n_failed = {}, {}, {}, {}
    for method in METHOD_ORDER:
        betas = np.array([r[method]["beta"] for r in results])
        ok = np.array([r[method]["converged"] for r in results])
        failed = int(np.count_nonzero(~ok))
        if failed > 0.10 * config.reps:
            raise ExperimentError(
                f"{method}: {failed}/{config.reps} replicates failed to converge"
            )
        kept = betas[ok]
        mean_coefficients[method] = kept.mean(axis=0)
        mses = np.array([r[method]["mse"] for r in results])[ok]
        mse_mean[method] = float(mses.mean())
        mse_values[method] = mses
        selection_frequency[method] = (np.abs(kept) > SELECTION_CUT).mean(axis=0)
        mean_count_above_cut[method] = float((np.abs(kept) > REPORT_CUT).sum(axis=1).mean())
        selected_penalty[method] = np.array([r[method]["selected_penalty"] for r in results])
        selected_grid_index[method] = np.array([r[method]["selected_index"] for r in results])
        replicate_coefficients[method] = betas
        n_failed[method] = failed

    has_ge = config.lambda2 > 0
    return ExperimentReport(
        config=config,
        column_names=BENCHMARK_NAMES,
        mean_coefficients=mean_coefficients,
        mse_mean=mse_mean,
        mse_values=mse_values,
        selection_frequency=selection_frequency,
        mean_count_above_cut=mean_count_above_cut,
        selected_penalty=selected_penalty,
        selected_grid_index=selected_grid_index,
        replicate_coefficients=replicate_coefficients,
        n_failed=n_failed,
        group_effect_pair=DUPLICATE_PAIR,
        group_d_values=np.array([r["group_effect"].d_value for r in results]) if has_ge else np.empty(0),
        group_m_values=np.array([r["group_effect"].m_value for r in results]) if has_ge else np.empty(0),
        group_bounds=np.array([r["group_effect"].bound for r in results]) if has_ge else np.empty(0),
        enet_pair_gap_max=float(max(r["pair_gap"] for r in results)),
    )


def pggn_group_indices(group_sizes) -> list[np.ndarray]:
    """Column indices of each correlated group (groups occupy the leading columns)."""
    out, start = [], 0
    for size in group_sizes:
        out.append(np.arange(start, start + size))
        start += size
    return out


def generate_pggn(
    n,
    p,
    group_sizes,
    seed,
    active_groups=None,
    member_noise=0.25,
    signal=1.0,
    response_noise=0.25,
) -> tuple[Dataset, CoefficientVector]:
    """A p >> n design with correlated predictor groups and a 0/1 response.

    Each group's members are a shared latent N(0,1) factor plus
    ``member_noise`` times independent noise (within-group correlation
    1/sqrt(1 + member_noise^2) ~ 0.97 by default). True coefficients equal
    ``signal`` on every member of each active group (all groups by default)
    and zero elsewhere. The response thresholds the linear predictor plus
    ``response_noise * sd`` Gaussian noise at its median and codes 0/1; it is
    fit by squared loss downstream.
    """
    group_sizes = tuple(int(s) for s in group_sizes)
    if p <= n:
        raise ConfigurationError(f"this generator targets p > n, got n={n}, p={p}")
    if any(s < 2 for s in group_sizes):
        raise ConfigurationError("each group needs at least 2 members")
    if sum(group_sizes) > p:
        raise ConfigurationError(f"group sizes sum to {sum(group_sizes)} > p={p}")
    groups = pggn_group_indices(group_sizes)
    if active_groups is None:
        active_groups = tuple(range(len(group_sizes)))
    if any(not 0 <= g < len(group_sizes) for g in active_groups):
        raise ConfigurationError("active_groups indexes a nonexistent group")

    rng = np.random.default_rng([seed, 0])
    x = np.empty((n, p))
    for g, idx in enumerate(groups):
        latent = rng.standard_normal(n)
        x[:, idx] = latent[:, None] + member_noise * rng.standard_normal((n, len(idx)))
    n_grouped = sum(group_sizes)
    x[:, n_grouped:] = rng.standard_normal((n, p - n_grouped))

    beta = np.zeros(p)
    for g in active_groups:
        beta[groups[g]] = signal
    t = rng.uniform(-1.0, 1.0, size=n)
    eta = x @ beta
    noisy = eta + response_noise * float(np.std(eta)) * rng.standard_normal(n)
    y = (noisy > np.median(noisy)).astype(np.float64)
    names = tuple(
        f"g{g + 1}m{i + 1}" for g, idx in enumerate(groups) for i in range(len(idx))
    ) + tuple(f"z{j + 1}" for j in range(p - n_grouped))
    return Dataset(y, t, x, names), CoefficientVector(beta, names)


def run_pggn_study(
    n=38,
    p=500,
    group_sizes=(10, 10),
    seeds=range(20),
    lambda2=1.0 / 3.0,
    cv_folds=10,
    grid_size=100,
    kernel="box",
    bandwidth_c=1.0,
    options=SolverOptions(),
) -> list[dict]:
    """Per-seed elastic-net vs lasso selection study on p >> n grouped designs.

    For each seed: build the design, scan the shared lambda1 grid with warm
    starts recording the nonzero count at every grid point, tune lambda1 by
    k-fold CV for both methods, and record which active-group members the
    CV-selected model keeps (|beta| > SELECTION_CUT).
    """
    groups = pggn_group_indices(group_sizes)
    smoother = SmootherConfig(kernel, None, bandwidth_c)
    results = []
    for seed in seeds:
        data, beta_true = generate_pggn(n, p, group_sizes, seed)
        data_std, info = standardize(data)
        pr = partial_out(data_std, smoother)
        grid = default_lambda1_grid(pr, grid_size=grid_size)
        fold_seed = np.random.default_rng([seed, 99]).integers(2**63)
        folds = make_folds(n, cv_folds, fold_seed)
        rec = {"seed": seed, "groups": groups}
        for method in ("enet", "lasso"):
            lam2 = lambda2 if method == "enet" else 0.0
            counts = np.empty(grid.size, dtype=np.int64)
            warm = None
            fits = []
            for gi, lam in enumerate(grid):
                spec = PenaltySpec.enet(lam, lam2) if method == "enet" else PenaltySpec.lasso(lam)
                fit = fit_penalized(pr, spec, options=options, beta0=warm)
                warm = fit.beta.values
                counts[gi] = int(np.count_nonzero(np.abs(fit.beta.values) > SELECTION_CUT))
                fits.append(fit.beta.values)
            plan = CvPlan(cv_folds, grid, lam2, int(fold_seed % 2**31), folds)
            cv = cross_validate(data_std, plan, smoother, method, options=options)
            chosen = fits[cv.selected_index]
            selected = np.abs(chosen) > SELECTION_CUT
            rec[method] = {
                "nonzeros_path": counts,
                "max_nonzeros": int(counts.max()),
                "selected_index": cv.selected_index,
                "selected_mask": selected,
                "group_inclusion": np.array([selected[idx].mean() for idx in groups]),
            }
        results.append(rec)
    return results
