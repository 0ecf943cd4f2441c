from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.linear_model import ElasticNet, Lasso

from plmnet import (
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
from plmnet.exceptions import InvalidPenaltyError
from plmnet.solver import duplicate_column_groups, soft_threshold
from plmnet.simulation import SimulationConfig, generate_dgp
from plmnet import SmootherConfig, partial_out, standardize

from conftest import make_pr
from oracles import grid_refine_minimize, penalized_objective_fn, pr_from_arrays


class TestPenaltySpec:
    def test_lasso_rejects_lambda2(self):
        with pytest.raises(InvalidPenaltyError):
            PenaltySpec("lasso", lambda1=1.0, lambda2=0.5)

    def test_ridge_rejects_lambda1(self):
        with pytest.raises(InvalidPenaltyError):
            PenaltySpec("ridge", lambda1=0.5, lambda2=1.0)

    def test_ols_rejects_penalties(self):
        with pytest.raises(InvalidPenaltyError):
            PenaltySpec("ols", lambda1=0.1)

    def test_alasso_requires_positive_weights(self):
        with pytest.raises(InvalidPenaltyError):
            PenaltySpec("alasso", lambda1=1.0)
        with pytest.raises(InvalidPenaltyError):
            PenaltySpec("alasso", lambda1=1.0, adaptive_weights=np.array([1.0, 0.0]))

    def test_negative_penalty_rejected(self):
        with pytest.raises(InvalidPenaltyError):
            PenaltySpec("enet", lambda1=-1.0)


class TestObjective:
    def test_zero_beta_is_response_energy(self, rng):
        pr = pr_from_arrays(rng.normal(size=(10, 3)), rng.normal(size=10))
        spec = PenaltySpec.enet(2.0, 3.0)
        assert objective(np.zeros(3), pr, spec) == pytest.approx(float(pr.y_tilde @ pr.y_tilde))

    def test_perfect_fit_no_penalty_is_zero(self, rng):
        x = rng.normal(size=(12, 2))
        beta = np.array([1.5, -2.0])
        pr = pr_from_arrays(x, x @ beta)
        assert objective(beta, pr, PenaltySpec.ols()) == pytest.approx(0.0, abs=1e-24)

    def test_four_by_two_exact_rational_instance(self):
        # All quantities dyadic, so the float evaluation is exact; the
        # expected value is re-derived with Fraction arithmetic.
        x = np.array([[1.0, 2.0], [0.0, 1.0], [-1.0, 3.0], [2.0, -2.0]])
        y = np.array([1.0, -1.0, 2.0, 0.0])
        beta = np.array([0.5, -0.25])
        lam1, lam2 = 0.375, 1.25
        got = objective(beta, pr_from_arrays(x, y), PenaltySpec.enet(lam1, lam2))

        bf = [Fraction(1, 2), Fraction(-1, 4)]
        rss = sum(
            (Fraction(int(yv)) - (Fraction(int(r[0])) * bf[0] + Fraction(int(r[1])) * bf[1])) ** 2
            for r, yv in zip(x.astype(int), y.astype(int))
        )
        expected = rss + Fraction(5, 4) * (bf[0] ** 2 + bf[1] ** 2) + Fraction(3, 8) * (
            abs(bf[0]) + abs(bf[1])
        )
        assert expected == Fraction(963, 64)
        assert got == float(expected) == 15.046875


class TestSoftThreshold:
    @settings(max_examples=100, deadline=None)
    @given(
        z=st.floats(-1e6, 1e6, allow_nan=False),
        g=st.floats(0, 1e6, allow_nan=False),
    )
    def test_definition(self, z, g):
        s = soft_threshold(z, g)
        if abs(z) <= g:
            assert s == 0.0
        else:
            assert s == pytest.approx(np.sign(z) * (abs(z) - g))
        assert abs(s) <= abs(z)


class TestFitPenalized:
    def test_ols_reduction_matches_least_squares(self, rng):
        pr, _, _ = make_pr(rng, n=50, p=2)
        fit = fit_penalized(pr, PenaltySpec.ols())
        ls, *_ = np.linalg.lstsq(pr.x_tilde, pr.y_tilde, rcond=None)
        np.testing.assert_allclose(fit.beta.values, ls, atol=1e-8)
        assert fit.converged

    def test_huge_lambda1_gives_exact_zero(self, rng):
        pr, _, _ = make_pr(rng, n=40, p=5)
        lam = lambda1_max(pr)
        for lam1 in (lam, lam * 2.0):
            fit = fit_penalized(pr, PenaltySpec.enet(lam1, 0.7))
            assert np.all(fit.beta.values == 0.0)
            assert fit.converged

    def test_duplicated_column_instance_matches_grid_oracle(self, rng):
        n = 20
        x1 = rng.normal(size=n)
        x = np.column_stack([x1, x1])
        y = 1.2 * x1 + 0.1 * rng.normal(size=n)
        pr = pr_from_arrays(x, y)
        lam1, lam2 = 0.1, 1.0 / 3.0
        fit = fit_penalized(pr, PenaltySpec.enet(lam1, lam2))
        oracle = grid_refine_minimize(penalized_objective_fn(x, y, lam1, lam2), 2)
        np.testing.assert_allclose(fit.beta.values, oracle, atol=5e-3)
        assert fit.beta.values[0] == fit.beta.values[1]

    def test_p3_enet_matches_grid_oracle(self, rng):
        n = 25
        x = rng.normal(size=(n, 3))
        x[:, 1] = 0.9 * x[:, 0] + 0.1 * rng.normal(size=n)
        y = x @ np.array([1.0, 0.5, -0.8]) + 0.2 * rng.normal(size=n)
        lam1, lam2 = 3.0, 0.5
        fit = fit_penalized(pr_from_arrays(x, y), PenaltySpec.enet(lam1, lam2))
        oracle = grid_refine_minimize(penalized_objective_fn(x, y, lam1, lam2), 3)
        np.testing.assert_allclose(fit.beta.values, oracle, atol=5e-3)

    def test_result_invariants_recompute(self, rng):
        pr, _, _ = make_pr(rng, n=45, p=6)
        spec = PenaltySpec.enet(2.5, 0.8)
        fit = fit_penalized(pr, spec)
        assert fit.objective == pytest.approx(objective(fit.beta, pr, spec), rel=1e-10)
        np.testing.assert_allclose(
            fit.residuals, pr.y_tilde - pr.x_tilde @ fit.beta.values, atol=1e-12
        )

    def test_objective_descends_every_sweep(self, rng):
        pr, _, _ = make_pr(rng, n=50, p=6, duplicate_pair=(1, 2))
        fit = fit_penalized(pr, PenaltySpec.enet(1.0, 0.25), record_objective=True)
        trace = fit.objective_trace
        assert trace is not None and len(trace) == fit.iterations + 1
        diffs = np.diff(trace)
        assert np.all(diffs <= 1e-9 * (1.0 + np.abs(trace[:-1])))

    def test_duplicate_symmetry_with_ridge_term(self, rng):
        pr, _, _ = make_pr(rng, n=60, p=5, duplicate_pair=(0, 3))
        fit = fit_penalized(pr, PenaltySpec.enet(0.5, 0.2))
        assert abs(fit.beta.values[0] - fit.beta.values[3]) == 0.0
        assert fit.converged

    def test_duplicate_without_ridge_keeps_note(self, rng):
        pr, _, _ = make_pr(rng, n=60, p=5, duplicate_pair=(0, 3))
        fit = fit_penalized(pr, PenaltySpec.lasso(0.5))
        assert any("non-unique" in m for m in fit.messages)

    def test_warm_start_reaches_same_minimizer(self, rng):
        pr, _, _ = make_pr(rng, n=40, p=6)
        spec = PenaltySpec.enet(1.0, 0.5)
        cold = fit_penalized(pr, spec)
        other = fit_penalized(pr, PenaltySpec.enet(20.0, 0.5))
        warm = fit_penalized(pr, spec, beta0=other.beta.values)
        np.testing.assert_allclose(cold.beta.values, warm.beta.values, atol=1e-7)

    def test_nonconvergence_reported_not_raised(self, rng):
        pr, _, _ = make_pr(rng, n=60, p=8)
        fit = fit_penalized(
            pr, PenaltySpec.enet(0.001, 0.0), options=SolverOptions(tolerance=1e-12, max_iterations=1)
        )
        assert not fit.converged

    def test_zero_column_gets_zero_coefficient(self, rng):
        x = rng.normal(size=(20, 3))
        x[:, 1] = 0.0
        pr = pr_from_arrays(x, rng.normal(size=20))
        fit = fit_penalized(pr, PenaltySpec.lasso(0.1))
        assert fit.beta.values[1] == 0.0

    def test_response_scaling_identity(self, rng):
        # b(a*y, a*lam1, lam2) / a solves the original problem
        x = rng.normal(size=(30, 4))
        y = x @ np.array([1.0, -0.5, 0.0, 0.25]) + 0.3 * rng.normal(size=30)
        a = 3.7
        lam1, lam2 = 1.2, 0.6
        base = fit_penalized(pr_from_arrays(x, y), PenaltySpec.enet(lam1, lam2))
        scaled = fit_penalized(pr_from_arrays(x, a * y), PenaltySpec.enet(a * lam1, lam2))
        np.testing.assert_allclose(scaled.beta.values / a, base.beta.values, atol=1e-7)

    def test_matches_sklearn_lasso_reference(self, rng):
        for seed in range(5):
            r = np.random.default_rng(seed)
            n, p = 40, 6
            x = r.normal(size=(n, p))
            y = x @ r.normal(size=p) * 0.5 + r.normal(size=n)
            lam1 = float(r.uniform(0.5, 20.0))
            ours = fit_penalized(pr_from_arrays(x, y), PenaltySpec.lasso(lam1))
            ref = Lasso(alpha=lam1 / (2 * n), fit_intercept=False, tol=1e-14, max_iter=500_000)
            ref.fit(x, y)
            np.testing.assert_allclose(ours.beta.values, ref.coef_, atol=1e-6)

    def test_matches_sklearn_elasticnet_via_conversion(self, rng):
        n, p = 50, 5
        x = rng.normal(size=(n, p))
        y = x @ rng.normal(size=p) + rng.normal(size=n)
        lam1, lam2 = 4.0, 2.5
        alpha, l1_ratio = sklearn_equivalent_params(lam1, lam2, n)
        ref = ElasticNet(alpha=alpha, l1_ratio=l1_ratio, fit_intercept=False, tol=1e-14, max_iter=500_000)
        ref.fit(x, y)
        ours = fit_penalized(pr_from_arrays(x, y), PenaltySpec.enet(lam1, lam2))
        np.testing.assert_allclose(ours.beta.values, ref.coef_, atol=1e-6)

    def test_kkt_certificate_for_converged_fits(self, rng):
        from plmnet import kkt_check

        tol = 1e-8
        for trial in range(20):
            r = np.random.default_rng(trial)
            n = int(r.integers(20, 80))
            p = int(r.integers(2, 10))
            x = r.normal(size=(n, p)) + 0.5 * r.normal(size=(n, 1))
            y = x @ r.normal(size=p) * 0.4 + r.normal(size=n)
            pr = pr_from_arrays(x, y)
            lam1 = float(r.uniform(0.0, 2.0 * n / 10))
            lam2 = float(r.choice([0.0, 0.1, 1.0, 5.0]))
            spec = PenaltySpec.enet(lam1, lam2)
            fit = fit_penalized(pr, spec, options=SolverOptions(tolerance=tol))
            assert fit.converged
            violation, passed = kkt_check(fit, pr, spec, 10 * tol)
            assert passed, violation


class TestAugmentation:
    def test_lambda2_zero_is_passthrough(self, rng):
        pr, _, _ = make_pr(rng, n=30, p=3)
        aug = augment_to_lasso(pr, 0.0, 1.5)
        assert aug.scale == 1.0
        assert aug.lambda_star == 1.5
        np.testing.assert_array_equal(aug.x_star[:30], pr.x_tilde)
        np.testing.assert_array_equal(aug.x_star[30:], np.zeros((3, 3)))
        np.testing.assert_array_equal(aug.y_star, np.concatenate([pr.y_tilde, np.zeros(3)]))

    def test_lambda2_three_block_arithmetic(self, rng):
        pr, _, _ = make_pr(rng, n=20, p=2)
        aug = augment_to_lasso(pr, 3.0, 1.0)
        assert aug.scale == 0.5  # (1 + 3)^(-1/2)
        np.testing.assert_array_equal(aug.x_star[20:], 0.5 * np.sqrt(3.0) * np.eye(2))
        np.testing.assert_array_equal(aug.x_star[:20], 0.5 * pr.x_tilde)
        assert aug.lambda_star == 0.5

    def test_augmented_path_equals_direct_path(self, rng):
        for trial in range(8):
            r = np.random.default_rng(100 + trial)
            n = int(r.integers(15, 60))
            p = int(r.integers(2, 8))
            x = r.normal(size=(n, p)) + 0.7 * r.normal(size=(n, 1))
            y = x @ r.normal(size=p) * 0.5 + r.normal(size=n)
            pr = pr_from_arrays(x, y)
            spec = PenaltySpec.enet(float(r.uniform(0.1, 5.0)), float(r.uniform(0.05, 4.0)))
            direct = fit_penalized(pr, spec)
            via_aug = fit_via_augmentation(pr, spec)
            np.testing.assert_allclose(via_aug.beta.values, direct.beta.values, atol=1e-6)


class TestRidgeClosedForm:
    def test_identity_design_halves_unit_response(self):
        x = np.eye(4)
        y = np.zeros(4)
        y[0] = 1.0
        fit = fit_ridge_closed_form(pr_from_arrays(x, y), 1.0)
        np.testing.assert_allclose(fit.beta.values, [0.5, 0, 0, 0], atol=1e-14)

    def test_shrinkage_monotone_on_diagonal_design(self, rng):
        x = np.diag(rng.uniform(0.5, 2.0, size=5))
        y = rng.normal(size=5)
        norms = [
            np.linalg.norm(fit_ridge_closed_form(pr_from_arrays(x, y), lam).beta.values)
            for lam in (0.1, 1.0, 10.0, 100.0)
        ]
        assert all(a > b for a, b in zip(norms, norms[1:]))

    def test_matches_coordinate_descent(self, rng):
        for trial in range(10):
            r = np.random.default_rng(200 + trial)
            x = r.normal(size=(10, 4))
            y = r.normal(size=10)
            lam2 = float(r.uniform(0.1, 5.0))
            pr = pr_from_arrays(x, y)
            closed = fit_ridge_closed_form(pr, lam2)
            cd = fit_penalized(pr, PenaltySpec("enet", 0.0, lam2))
            np.testing.assert_allclose(closed.beta.values, cd.beta.values, atol=1e-8)

    def test_requires_positive_lambda2(self, rng):
        pr, _, _ = make_pr(rng, n=20, p=2)
        with pytest.raises(InvalidPenaltyError):
            fit_ridge_closed_form(pr, 0.0)


class TestAdaptiveLasso:
    def test_uniform_weights_reduce_to_rescaled_lasso(self, rng):
        pr, _, _ = make_pr(rng, n=40, p=4)
        w = np.full(4, 2.5)
        weighted = fit_penalized(pr, PenaltySpec.alasso(1.0, w))
        plain = fit_penalized(pr, PenaltySpec.lasso(2.5))
        np.testing.assert_allclose(weighted.beta.values, plain.beta.values, atol=1e-9)

    def test_tiny_pilot_weight_blowup_forces_zero(self, rng):
        n = 50
        x = rng.normal(size=(n, 3))
        y = 2.0 * x[:, 0] + 0.1 * rng.normal(size=n)  # columns 1, 2 are pure noise
        pr = pr_from_arrays(x, y)
        fit = fit_alasso(pr, lambda1=0.5)
        assert fit.beta.values[1] == 0.0 and fit.beta.values[2] == 0.0
        assert abs(fit.beta.values[0]) > 1.0
        w = np.asarray(fit.spec.adaptive_weights)
        assert w[1] > 10 * w[0] and w[2] > 10 * w[0]

    def test_zeroes_noise_columns_more_often_than_lasso(self):
        # benchmark-style replicates: count exact zeros among the three pure
        # noise coordinates at a matched penalty fraction
        alasso_zeros = 0
        lasso_zeros = 0
        for seed in range(50):
            data, _ = generate_dgp(SimulationConfig(n=200, seed=seed), 0)
            ds, _ = standardize(data)
            pr = partial_out(ds, SmootherConfig("box"))
            lam = 0.02 * lambda1_max(pr)
            noise_idx = [5, 6, 7]
            la = fit_penalized(pr, PenaltySpec.lasso(lam))
            al = fit_alasso(pr, lam)
            lasso_zeros += sum(la.beta.values[j] == 0.0 for j in noise_idx)
            alasso_zeros += sum(al.beta.values[j] == 0.0 for j in noise_idx)
        assert alasso_zeros > lasso_zeros


class TestDuplicateGroups:
    def test_grouping(self, rng):
        x = rng.normal(size=(10, 5))
        x[:, 3] = x[:, 1]
        x[:, 4] = x[:, 1]
        gid, n_groups = duplicate_column_groups(x)
        assert n_groups == 1
        assert gid[1] == gid[3] == gid[4] == 0
        assert gid[0] == gid[2] == -1

    def test_near_duplicates_not_grouped(self, rng):
        x = rng.normal(size=(10, 2))
        x[:, 1] = x[:, 0] + 1e-15
        _, n_groups = duplicate_column_groups(x)
        assert n_groups == 0


class TestConversionHelper:
    def test_pure_cases(self):
        alpha, ratio = sklearn_equivalent_params(10.0, 0.0, 50)
        assert ratio == 1.0 and alpha == pytest.approx(0.1)
        alpha, ratio = sklearn_equivalent_params(0.0, 10.0, 50)
        assert ratio == 0.0 and alpha == pytest.approx(0.2)
        assert sklearn_equivalent_params(0.0, 0.0, 50) == (0.0, 1.0)
