"""Command-line front end.

Subcommands: ``fit``, ``cv``, ``simulate``, ``group-effect``, ``smooth``,
``rerun``. Every run writes a ``manifest.json`` capturing the command, the
fully resolved parameters, the seed, a content hash of the input file, and
content hashes of the outputs. Runs are pure functions of (inputs, flags,
seed): re-executing a manifest (``plmnet rerun``) reproduces every output
byte for byte, whatever PLM_ENET_THREADS says.

Exit codes: 0 success; 2 input/schema/flag errors; 3 solver non-convergence;
4 degenerate penalty grid; 5 group-effect bound undefined (lambda2 = 0);
1 unexpected failure.
"""

import csv
import hashlib
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .data import CoefficientVector, StandardizationInfo, load_csv, standardize, unstandardize_coefficients
from .diagnostics import group_effect_reports, kkt_check
from .exceptions import (
    ConfigurationError,
    DegenerateColumnError,
    DegenerateGridError,
    DimensionError,
    GroupEffectUndefinedError,
    IngestionError,
    InvalidPenaltyError,
    PlanError,
    SchemaError,
)
from .kernels import SmootherConfig
from .model_selection import CvPlan, cross_validate, default_lambda1_grid, make_folds
from .simulation import SimulationConfig, run_experiment
from .smoothing import partial_out
from .solver import (
    FitResult,
    PenaltySpec,
    SolverOptions,
    fit_penalized,
    fit_ridge_closed_form,
    ridge_weights,
)

EXIT_INPUT = 2
EXIT_NONCONVERGED = 3
EXIT_GRID = 4
EXIT_GROUP_EFFECT = 5

_INPUT_ERRORS = (
    SchemaError,
    IngestionError,
    DegenerateColumnError,
    InvalidPenaltyError,
    PlanError,
    DimensionError,
    ConfigurationError,
)


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _sha256(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _write_manifest(out_dir, command, parameters, seed, input_path):
    out_dir = Path(out_dir)
    outputs = {
        p.name: _sha256(p)
        for p in sorted(out_dir.iterdir())
        if p.is_file() and p.name != "manifest.json"
    }
    manifest = {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "input_digest": _sha256(input_path) if input_path else None,
        "tool_version": __version__,
        "outputs": outputs,
    }
    _write_json(out_dir / "manifest.json", manifest)
    return manifest


def _prepare(params):
    """Load, optionally standardize, and partial-out the input CSV."""
    data = load_csv(
        params["data"], params["response"], params["covariate"], params["predictors"]
    )
    if params["standardize"]:
        data_std, info = standardize(data)
    else:
        data_std = data
        info = StandardizationInfo(0.0, np.zeros(data.p), np.ones(data.p), applied=False)
    smoother = SmootherConfig(params["kernel"], params["bandwidth"], params["bandwidth_c"])
    pr = partial_out(data_std, smoother)
    return data, data_std, info, pr


def _build_spec(params, pr):
    method = params["method"]
    lam1 = params["lambda1"]
    lam2 = params["lambda2"]
    if method == "enet":
        if lam1 is None or lam2 is None:
            raise InvalidPenaltyError("enet requires --lambda1 and --lambda2")
        return PenaltySpec.enet(lam1, lam2)
    if method == "lasso":
        if lam2 is not None:
            raise InvalidPenaltyError("lasso fixes lambda2 = 0; drop --lambda2 or use --method enet")
        if lam1 is None:
            raise InvalidPenaltyError("lasso requires --lambda1")
        return PenaltySpec.lasso(lam1)
    if method == "alasso":
        if lam2 is not None:
            raise InvalidPenaltyError("alasso fixes lambda2 = 0; drop --lambda2")
        if lam1 is None:
            raise InvalidPenaltyError("alasso requires --lambda1")
        weights, _ = ridge_weights(pr, gamma=params["gamma"])
        return PenaltySpec.alasso(lam1, weights, gamma=params["gamma"])
    if method == "ridge":
        if lam1 is not None:
            raise InvalidPenaltyError("ridge fixes lambda1 = 0; drop --lambda1")
        if lam2 is None or lam2 <= 0:
            raise InvalidPenaltyError("ridge requires --lambda2 > 0")
        return PenaltySpec.ridge(lam2)
    if method == "ols":
        if lam1 is not None or lam2 is not None:
            raise InvalidPenaltyError("ols takes no penalties")
        return PenaltySpec.ols()
    raise InvalidPenaltyError(f"unknown method {method!r}")


def _solve(pr, spec, params):
    options = SolverOptions(tolerance=params["tol"], max_iterations=params["max_iter"])
    if spec.method == "ridge":
        return fit_ridge_closed_form(pr, spec.lambda2)
    return fit_penalized(pr, spec, options=options)


def _write_fit_outputs(out_dir, params, data, info, pr, fit):
    out_dir = Path(out_dir)
    beta_std = fit.beta
    if info.applied:
        beta_orig, offset = unstandardize_coefficients(beta_std, info)
    else:
        beta_orig, offset = CoefficientVector(beta_std.values, beta_std.names), 0.0
    _write_csv(
        out_dir / "coefficients.csv",
        ["name", "standardized", "original"],
        [
            [name, _fmt(bs), _fmt(bo)]
            for name, bs, bo in zip(beta_std.names, beta_std.values, beta_orig.values)
        ],
    )
    _write_csv(
        out_dir / "residuals.csv",
        ["index", "residual"],
        [[i, _fmt(r)] for i, r in enumerate(fit.residuals)],
    )
    kkt_tol = 10.0 * params["tol"]
    violation, passed = kkt_check(fit, pr, fit.spec, kkt_tol)
    _write_json(
        out_dir / "fit.json",
        {
            "method": fit.spec.method,
            "lambda1": fit.spec.lambda1,
            "lambda2": fit.spec.lambda2,
            "adaptive_gamma": fit.spec.adaptive_gamma if fit.spec.method == "alasso" else None,
            "objective": fit.objective,
            "iterations": fit.iterations,
            "converged": fit.converged,
            "kkt_max_violation": violation,
            "kkt_tol": kkt_tol,
            "kkt_pass": passed,
            "intercept_offset": offset,
            "n": data.n,
            "p": data.p,
            "standardized": info.applied,
            "kernel": pr.config.kernel,
            "bandwidth": pr.config.bandwidth,
            "messages": list(fit.messages),
        },
    )
    if params.get("classify"):
        # y - r = mhat_y + X_tilde b (+ y_mean when standardized): the in-sample prediction
        fitted = data.y - fit.residuals
        labels = (fitted >= params["threshold"]).astype(int)
        _write_csv(
            out_dir / "predictions.csv",
            ["index", "fitted", "label"],
            [[i, _fmt(f), int(l)] for i, (f, l) in enumerate(zip(fitted, labels))],
        )
    return fit.converged


def _exec_fit(params, out_dir):
    data, data_std, info, pr = _prepare(params)
    spec = _build_spec(params, pr)
    fit = _solve(pr, spec, params)
    converged = _write_fit_outputs(out_dir, params, data, info, pr, fit)
    _write_manifest(out_dir, "fit", params, params["seed"], params["data"])
    return 0 if converged else EXIT_NONCONVERGED


def _exec_cv(params, out_dir):
    out_dir = Path(out_dir)
    data, data_std, info, pr = _prepare(params)
    method = params["method"]
    options = SolverOptions(tolerance=params["tol"], max_iterations=params["max_iter"])
    if method == "alasso":
        weights, _ = ridge_weights(pr, gamma=params["gamma"])
        grid = default_lambda1_grid(pr, PenaltySpec.alasso(1.0, weights, gamma=params["gamma"]), params["grid_size"])
    else:
        weights = None
        grid = default_lambda1_grid(pr, grid_size=params["grid_size"])
    lambda2 = params["lambda2"] if method == "enet" else 0.0
    if method == "enet" and lambda2 is None:
        raise InvalidPenaltyError("cv --method enet requires --lambda2")
    if method in ("lasso", "alasso", "ridge") and params["lambda2"] is not None:
        raise InvalidPenaltyError(f"cv --method {method} does not take --lambda2")
    smoother = SmootherConfig(params["kernel"], params["bandwidth"], params["bandwidth_c"])
    plan = CvPlan(
        k=params["cv_folds"],
        lambda1_grid=grid,
        lambda2=lambda2 or 0.0,
        seed=params["seed"],
        fold_assignment=make_folds(data.n, params["cv_folds"], params["seed"]),
    )
    cv = cross_validate(
        data_std, plan, smoother, method,
        adaptive_gamma=params["gamma"], one_se=params["one_se"], options=options,
    )
    penalty_col = cv.penalty
    _write_csv(
        out_dir / "cv_curve.csv",
        [penalty_col, "mean_cv_error", "se_cv_error"],
        [
            [_fmt(lam), _fmt(m), _fmt(s)]
            for lam, m, s in zip(grid, cv.mean_cv_error, cv.se_cv_error)
        ],
    )
    _write_json(
        out_dir / "selection.json",
        {
            "penalty": penalty_col,
            "best_lambda1": cv.best_lambda1,
            "best_index": cv.best_index,
            "selected_lambda1": cv.selected_lambda1,
            "selected_index": cv.selected_index,
            "one_se": cv.one_se,
            "n_smoothing_fallbacks": cv.n_smoothing_fallbacks,
            "grid_size": int(grid.size),
        },
    )
    if params.get("emit_path"):
        warm = None
        rows = []
        for lam in grid:
            if method == "ridge":
                f = fit_ridge_closed_form(pr, lam)
            else:
                if method == "enet":
                    spec = PenaltySpec.enet(lam, lambda2)
                elif method == "lasso":
                    spec = PenaltySpec.lasso(lam)
                else:
                    spec = PenaltySpec.alasso(lam, weights, gamma=params["gamma"])
                f = fit_penalized(pr, spec, options=options, beta0=warm)
                warm = f.beta.values
            rows.append([_fmt(lam), *[_fmt(b) for b in f.beta.values]])
        _write_csv(out_dir / "path.csv", [penalty_col, *pr.names()], rows)
    if method == "ridge":
        final = fit_ridge_closed_form(pr, cv.selected_lambda1)
    elif method == "enet":
        final = fit_penalized(pr, PenaltySpec.enet(cv.selected_lambda1, lambda2), options=options)
    elif method == "lasso":
        final = fit_penalized(pr, PenaltySpec.lasso(cv.selected_lambda1), options=options)
    else:
        final = fit_penalized(pr, PenaltySpec.alasso(cv.selected_lambda1, weights, gamma=params["gamma"]), options=options)
    converged = _write_fit_outputs(out_dir, params, data, info, pr, final)
    _write_manifest(out_dir, "cv", params, params["seed"], params["data"])
    return 0 if converged else EXIT_NONCONVERGED


def _exec_simulate(params, out_dir):
    out_dir = Path(out_dir)
    config = SimulationConfig(
        n=params["n"],
        reps=params["reps"],
        sigma=params["sigma"],
        lambda2=params["lambda2"],
        cv_folds=params["cv_folds"],
        seed=params["seed"],
        kernel=params["kernel"],
        bandwidth_c=params["bandwidth_c"],
        grid_size=params["grid_size"],
        one_se=params["one_se"],
    )
    report = run_experiment(config)
    methods = list(report.mean_coefficients)
    cols = list(report.column_names)
    _write_csv(
        out_dir / "coefficient_means.csv",
        ["method", *cols],
        [[m, *[_fmt(v) for v in report.mean_coefficients[m]]] for m in methods],
    )
    _write_csv(
        out_dir / "mse.csv",
        ["method", "mse_mean"],
        [[m, _fmt(report.mse_mean[m])] for m in methods],
    )
    _write_csv(
        out_dir / "selection_frequency.csv",
        ["method", *cols],
        [[m, *[_fmt(v) for v in report.selection_frequency[m]]] for m in methods],
    )
    _write_json(out_dir / "summary.json", report.summary_dict())
    _write_manifest(out_dir, "simulate", params, params["seed"], None)
    return 0


def _exec_group_effect(params, out_dir):
    out_dir = Path(out_dir)
    fit_dir = Path(params["fit_dir"])
    manifest = json.loads((fit_dir / "manifest.json").read_text(encoding="utf-8"))
    fit_params = manifest["parameters"]
    fit_json = json.loads((fit_dir / "fit.json").read_text(encoding="utf-8"))
    lambda2 = fit_json["lambda2"]
    if not lambda2 or lambda2 <= 0:
        raise GroupEffectUndefinedError(
            "the fitted model has lambda2 = 0; the group-effect bound is undefined"
        )
    digest = _sha256(fit_params["data"])
    if manifest["input_digest"] is not None and digest != manifest["input_digest"]:
        raise IngestionError(
            f"input file {fit_params['data']} changed since the fit (digest mismatch)"
        )
    data, data_std, info, pr = _prepare(fit_params)

    names = []
    std_beta = []
    with open(fit_dir / "coefficients.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            names.append(row["name"])
            std_beta.append(float(row["standardized"]))
    residuals = []
    with open(fit_dir / "residuals.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            residuals.append(float(row["residual"]))
    beta = CoefficientVector(np.asarray(std_beta), tuple(names))
    spec = PenaltySpec.enet(fit_json["lambda1"], lambda2)
    fit = FitResult(
        beta=beta,
        residuals=np.asarray(residuals),
        objective=fit_json["objective"],
        iterations=fit_json["iterations"],
        converged=fit_json["converged"],
        dual_gap_proxy=fit_json["kkt_max_violation"],
        spec=spec,
    )
    p = data.p
    if params["pairs"].strip().lower() == "all":
        pairs = [(k, l) for k in range(p) for l in range(k + 1, p)]
    else:
        pairs = []
        for chunk in params["pairs"].split(";"):
            k_s, l_s = chunk.split(",")
            k, l = int(k_s) - 1, int(l_s) - 1  # CLI pairs are 1-based
            if not (0 <= k < p and 0 <= l < p) or k == l:
                raise SchemaError(f"pair {chunk!r} out of range for p={p} (pairs are 1-based)")
            pairs.append((k, l))
    rows = []
    for pair in pairs:
        reports = group_effect_reports(fit, data_std.x, pair, lambda2, sign_flip=params["sign_flip"])
        for rep in reports:
            rows.append(
                [
                    rep.pair[0] + 1,
                    rep.pair[1] + 1,
                    names[rep.pair[0]],
                    names[rep.pair[1]],
                    _fmt(rep.d_value),
                    _fmt(rep.m_value),
                    _fmt(rep.bound),
                    int(rep.sign_condition_met),
                    int(rep.holds),
                    int(rep.flipped),
                ]
            )
    _write_csv(
        out_dir / "group_effect.csv",
        ["k", "l", "name_k", "name_l", "d_value", "m_value", "bound", "sign_condition_met", "holds", "flipped"],
        rows,
    )
    _write_manifest(out_dir, "group-effect", params, fit_params["seed"], fit_params["data"])
    return 0


def _exec_smooth(params, out_dir):
    out_dir = Path(out_dir)
    data, data_std, info, pr = _prepare(params)
    names = pr.names()
    _write_csv(
        out_dir / "partial_residuals.csv",
        ["y_tilde", *[f"{c}_tilde" for c in names]],
        [
            [_fmt(pr.y_tilde[i]), *[_fmt(v) for v in pr.x_tilde[i]]]
            for i in range(pr.n)
        ],
    )
    _write_csv(
        out_dir / "smoothed_means.csv",
        ["my_hat", *[f"m_{c}_hat" for c in names]],
        [[_fmt(pr.my_hat[i]), *[_fmt(v) for v in pr.mx_hat[i]]] for i in range(pr.n)],
    )
    _write_manifest(out_dir, "smooth", params, params["seed"], params["data"])
    return 0


_EXECUTORS = {
    "fit": _exec_fit,
    "cv": _exec_cv,
    "simulate": _exec_simulate,
    "group-effect": _exec_group_effect,
    "smooth": _exec_smooth,
}


def _guarded(executor, params, out_dir):
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    try:
        code = executor(params, out_dir)
    except GroupEffectUndefinedError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_GROUP_EFFECT)
    except DegenerateGridError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_GRID)
    except _INPUT_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    if code:
        click.echo("warning: solver did not converge; outputs written anyway", err=True)
        sys.exit(code)


def _data_options(fn):
    fn = click.option("--response", "-y", default="y", show_default=True, help="response column")(fn)
    fn = click.option("--covariate", "-t", "covariate", default="t", show_default=True, help="scalar covariate column")(fn)
    fn = click.option("--predictors", default=None, help="comma-separated predictor columns (default: all remaining)")(fn)
    fn = click.option("--no-standardize", "no_standardize", is_flag=True, help="skip centering y / standardizing X")(fn)
    return fn


def _smoother_options(fn):
    fn = click.option("--kernel", type=click.Choice(["box", "epanechnikov", "gaussian"]), default="box", show_default=True)(fn)
    fn = click.option("--bandwidth", type=float, default=None, help="explicit bandwidth h")(fn)
    fn = click.option("--bandwidth-c", type=float, default=1.0, show_default=True, help="c in h = c * n^(-1/5)")(fn)
    return fn


def _solver_options(fn):
    fn = click.option("--tol", type=float, default=1e-8, show_default=True)(fn)
    fn = click.option("--max-iter", type=int, default=10_000, show_default=True)(fn)
    return fn


def _split_predictors(predictors):
    return [c.strip() for c in predictors.split(",")] if predictors else None


@click.group()
@click.version_option(version=__version__, prog_name="plmnet")
def main():
    """Partially linear models with elastic-net family penalties.

    Penalties live on the unscaled objective
    ||y_tilde - X_tilde b||^2 + lambda2 ||b||^2 + lambda1 ||b||_1
    (no 1/n factor): lambda values are NOT per-observation.
    """


@main.command()
@click.argument("data", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["enet", "lasso", "alasso", "ridge", "ols"]), default="enet", show_default=True)
@click.option("--lambda1", type=float, default=None, help="l1 penalty level")
@click.option("--lambda2", type=float, default=None, help="l2 penalty level")
@click.option("--gamma", type=float, default=1.0, show_default=True, help="adaptive-weight exponent (alasso)")
@click.option("--classify", is_flag=True, help="emit 0/1 labels by thresholding fitted values")
@click.option("--threshold", type=float, default=0.5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
@_data_options
@_smoother_options
@_solver_options
def fit(data, method, lambda1, lambda2, gamma, classify, threshold, seed, out,
        response, covariate, predictors, no_standardize, kernel, bandwidth, bandwidth_c, tol, max_iter):
    """Fit one penalized partially linear model and write its artifacts."""
    params = {
        "data": data, "method": method, "lambda1": lambda1, "lambda2": lambda2,
        "gamma": gamma, "classify": classify, "threshold": threshold, "seed": seed,
        "response": response, "covariate": covariate,
        "predictors": _split_predictors(predictors), "standardize": not no_standardize,
        "kernel": kernel, "bandwidth": bandwidth, "bandwidth_c": bandwidth_c,
        "tol": tol, "max_iter": max_iter,
    }
    _guarded(_exec_fit, params, out)


@main.command()
@click.argument("data", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["enet", "lasso", "alasso", "ridge"]), default="enet", show_default=True)
@click.option("--lambda2", type=float, default=None, help="fixed l2 level (enet only; ridge tunes lambda2 on the grid)")
@click.option("--gamma", type=float, default=1.0, show_default=True)
@click.option("--cv-folds", type=int, default=10, show_default=True)
@click.option("--grid-size", type=int, default=100, show_default=True)
@click.option("--one-se", is_flag=True, help="pick the largest penalty within one SE of the minimum")
@click.option("--emit-path", is_flag=True, help="also write the full coefficient path over the grid")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
@_data_options
@_smoother_options
@_solver_options
def cv(data, method, lambda2, gamma, cv_folds, grid_size, one_se, emit_path, seed, out,
       response, covariate, predictors, no_standardize, kernel, bandwidth, bandwidth_c, tol, max_iter):
    """Cross-validate the penalty grid, then fit at the selected value."""
    params = {
        "data": data, "method": method, "lambda2": lambda2, "gamma": gamma,
        "cv_folds": cv_folds, "grid_size": grid_size, "one_se": one_se,
        "emit_path": emit_path, "seed": seed, "response": response,
        "covariate": covariate, "predictors": _split_predictors(predictors),
        "standardize": not no_standardize, "kernel": kernel, "bandwidth": bandwidth,
        "bandwidth_c": bandwidth_c, "tol": tol, "max_iter": max_iter,
    }
    _guarded(_exec_cv, params, out)


@main.command()
@click.option("--n", type=int, default=1000, show_default=True)
@click.option("--reps", type=int, default=50, show_default=True)
@click.option("--sigma", type=float, default=0.2, show_default=True)
@click.option("--lambda2", type=float, default=1.0 / 3.0, show_default=True)
@click.option("--cv-folds", type=int, default=10, show_default=True)
@click.option("--grid-size", type=int, default=100, show_default=True)
@click.option("--one-se/--argmin", "one_se", default=True, show_default=True, help="CV selection rule")
@click.option("--kernel", type=click.Choice(["box", "epanechnikov", "gaussian"]), default="box", show_default=True)
@click.option("--bandwidth-c", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
def simulate(n, reps, sigma, lambda2, cv_folds, grid_size, one_se, kernel, bandwidth_c, seed, out):
    """Run the replicated four-method benchmark comparison."""
    params = {
        "n": n, "reps": reps, "sigma": sigma, "lambda2": lambda2,
        "cv_folds": cv_folds, "grid_size": grid_size, "one_se": one_se,
        "kernel": kernel, "bandwidth_c": bandwidth_c, "seed": seed,
    }
    _guarded(_exec_simulate, params, out)


@main.command("group-effect")
@click.argument("fit_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--pairs", default="all", show_default=True, help='"all" or 1-based "k,l[;k,l...]"')
@click.option("--sign-flip/--no-sign-flip", default=True, show_default=True,
              help="re-evaluate against the negated first column when the signs disagree")
@click.option("--out", type=click.Path(file_okay=False), required=True)
def group_effect_cmd(fit_dir, pairs, sign_flip, out):
    """Pairwise coefficient-gap bounds for a previous fit directory."""
    params = {"fit_dir": fit_dir, "pairs": pairs, "sign_flip": sign_flip}
    _guarded(_exec_group_effect, params, out)


@main.command()
@click.argument("data", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
@_data_options
@_smoother_options
def smooth(data, seed, out, response, covariate, predictors, no_standardize, kernel, bandwidth, bandwidth_c):
    """Write the kernel partial residuals and smoothed means, nothing else."""
    params = {
        "data": data, "seed": seed, "response": response, "covariate": covariate,
        "predictors": _split_predictors(predictors), "standardize": not no_standardize,
        "kernel": kernel, "bandwidth": bandwidth, "bandwidth_c": bandwidth_c,
    }
    _guarded(_exec_smooth, params, out)


@main.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(file_okay=False), required=True)
def rerun(manifest, out):
    """Re-execute a recorded run; outputs are bit-identical to the original."""
    spec = json.loads(Path(manifest).read_text(encoding="utf-8"))
    command = spec["command"]
    if command not in _EXECUTORS:
        click.echo(f"error: manifest names unknown command {command!r}", err=True)
        sys.exit(EXIT_INPUT)
    _guarded(_EXECUTORS[command], spec["parameters"], out)


if __name__ == "__main__":
    main()
