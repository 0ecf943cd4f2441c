import numpy as np
import pytest

from plmnet import (
    Dataset,
    NadarayaWatsonSmoother,
    SmootherConfig,
    default_bandwidth,
    nw_smooth,
    partial_out,
)
from plmnet.exceptions import EmptyNeighborhoodError

from oracles import naive_nw


class TestDefaultBandwidth:
    def test_rejects_n_below_two(self):
        with pytest.raises(ValueError):
            default_bandwidth(1, 1.0)

    def test_rejects_nonpositive_c(self):
        with pytest.raises(ValueError):
            default_bandwidth(100, 0.0)

    def test_n_1000_value(self):
        # 1000**(-1/5) to 17 digits, checked against 40-digit arithmetic
        assert default_bandwidth(1000) == pytest.approx(0.25118864315095801, rel=1e-15)

    def test_power_of_two_case(self):
        assert default_bandwidth(32, c=2.0) == 1.0  # 32**(1/5) = 2 exactly


class TestNwSmooth:
    def test_constant_input_exact(self, rng):
        t = rng.uniform(-1, 1, 40)
        for kernel in ("box", "epanechnikov", "gaussian"):
            for c in (0.3712345, -2.5, 1e-7):
                fitted = nw_smooth(np.full(40, c), t, SmootherConfig(kernel, 0.25))
                assert np.all(fitted == c)

    def test_two_point_uniform_weights(self):
        fitted = nw_smooth(np.array([0.0, 2.0]), np.array([0.0, 1.0]), SmootherConfig("box", 10.0))
        np.testing.assert_array_equal(fitted, [1.0, 1.0])

    def test_matches_naive_oracle(self, rng):
        for trial in range(5):
            n = int(rng.integers(5, 40))
            t = rng.uniform(-2, 2, n)
            v = rng.normal(size=n)
            h = float(rng.uniform(0.2, 3.0))
            for kernel in ("box", "epanechnikov", "gaussian"):
                got = nw_smooth(v, t, SmootherConfig(kernel, h))
                want = naive_nw(v, t, kernel, h)
                assert np.max(np.abs(got - want)) < 1e-12

    def test_matrix_columns_smoothed_independently(self, rng):
        n, p = 25, 3
        t = rng.uniform(-1, 1, n)
        v = rng.normal(size=(n, p))
        cfg = SmootherConfig("epanechnikov", 0.7)
        got = nw_smooth(v, t, cfg)
        for j in range(p):
            # matrix path uses gemm, column path gemv: identical to rounding
            np.testing.assert_allclose(got[:, j], nw_smooth(v[:, j], t, cfg), rtol=0, atol=1e-12)

    def test_off_sample_evaluation(self, rng):
        t = rng.uniform(-1, 1, 30)
        v = rng.normal(size=30)
        te = rng.uniform(-1, 1, 7)
        got = nw_smooth(v, t, SmootherConfig("box", 0.5), t_eval=te)
        want = naive_nw(v, t, "box", 0.5, t_eval=te)
        assert np.max(np.abs(got - want)) < 1e-12

    def test_empty_neighborhood_raises(self):
        t = np.array([0.0, 0.1, 0.2])
        with pytest.raises(EmptyNeighborhoodError):
            nw_smooth(np.ones(3), t, SmootherConfig("box", 0.05), t_eval=np.array([5.0]))

    def test_box_saturation_returns_global_mean(self, rng):
        t = rng.uniform(-1, 1, 50)
        v = rng.normal(size=50)
        h = (t.max() - t.min()) * 1.5
        fitted = nw_smooth(v, t, SmootherConfig("box", h))
        assert np.max(np.abs(fitted - v.mean())) < 1e-12

    def test_permutation_equivariance(self, rng):
        n = 30
        t = rng.uniform(-1, 1, n)
        v = rng.normal(size=n)
        perm = rng.permutation(n)
        cfg = SmootherConfig("gaussian", 0.4)
        base = nw_smooth(v, t, cfg)
        permuted = nw_smooth(v[perm], t[perm], cfg)
        # FP dot products are order-sensitive, so equivariance holds to rounding
        assert np.max(np.abs(permuted - base[perm])) < 1e-12

    def test_linearity_in_values(self, rng):
        n = 20
        t = rng.uniform(-1, 1, n)
        v, w = rng.normal(size=n), rng.normal(size=n)
        a, b = 2.5, -1.25
        cfg = SmootherConfig("box", 0.6)
        lhs = nw_smooth(a * v + b * w, t, cfg)
        rhs = a * nw_smooth(v, t, cfg) + b * nw_smooth(w, t, cfg)
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_ties_in_t(self):
        t = np.array([0.0, 0.0, 0.0, 1.0])
        v = np.array([1.0, 2.0, 3.0, 10.0])
        got = nw_smooth(v, t, SmootherConfig("box", 0.5))
        want = naive_nw(v, t, "box", 0.5)
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_leave_one_out(self, rng):
        t = rng.uniform(-1, 1, 15)
        v = rng.normal(size=15)
        got = nw_smooth(v, t, SmootherConfig("gaussian", 0.5), leave_one_out=True)
        want = naive_nw(v, t, "gaussian", 0.5, leave_one_out=True)
        assert np.max(np.abs(got - want)) < 1e-12


class TestPartialOut:
    def test_uniform_weight_limit_reduces_to_centering(self, rng):
        n = 40
        t = rng.uniform(-1, 1, n)
        x = rng.normal(size=(n, 3))
        y = x @ np.array([1.0, 0.0, -1.0]) + rng.normal(size=n)
        d = Dataset(y, t, x, ("a", "b", "c"))
        pr = partial_out(d, SmootherConfig("box", bandwidth=10.0))
        assert np.max(np.abs(pr.y_tilde - (y - y.mean()))) < 1e-12
        assert np.max(np.abs(pr.x_tilde - (x - x.mean(axis=0)))) < 1e-12

    def test_noiseless_quadratic_local_oscillation_bound(self):
        # y = t^2 exactly: |t_i^2 - t_j^2| <= 2h + h^2 inside a window of
        # half-width h on [-1, 1], so the partial residual obeys the looser
        # 4h + 2h^2 bound with room to spare.
        rng = np.random.default_rng(7)
        n = 1000
        t = rng.uniform(-1, 1, n)
        y = t * t
        x = rng.normal(size=(n, 2))
        d = Dataset(y, t, x, ("x1", "x2"))
        h = default_bandwidth(n)
        pr = partial_out(d, SmootherConfig("box", h))
        assert np.max(np.abs(pr.y_tilde)) <= 4 * h + 2 * h * h

    def test_reconstruction_identity(self, rng):
        for _ in range(3):
            n = int(rng.integers(10, 60))
            t = rng.uniform(-1, 1, n)
            x = rng.normal(size=(n, 3)) * rng.choice([1e-3, 1.0, 1e3])
            y = rng.normal(size=n)
            pr = partial_out(Dataset(y, t, x, ("a", "b", "c")), SmootherConfig("box", 0.5))
            # the stored arrays reproduce the defining subtraction bit-for-bit
            np.testing.assert_array_equal(x - pr.mx_hat, pr.x_tilde)
            np.testing.assert_array_equal(y - pr.my_hat, pr.y_tilde)
            # additive reconstruction holds to <= 1 ulp of the larger addend
            ulp_x = np.spacing(np.maximum(np.abs(pr.x_tilde), np.abs(pr.mx_hat)))
            assert np.all(np.abs(pr.x_tilde + pr.mx_hat - x) <= ulp_x)
            ulp_y = np.spacing(np.maximum(np.abs(pr.y_tilde), np.abs(pr.my_hat)))
            assert np.all(np.abs(pr.y_tilde + pr.my_hat - y) <= ulp_y)

    def test_duplicate_columns_stay_bitwise_equal(self, rng):
        n = 30
        x = rng.normal(size=(n, 3))
        x[:, 2] = x[:, 1]
        d = Dataset(rng.normal(size=n), rng.uniform(-1, 1, n), x, ("a", "b", "c"))
        pr = partial_out(d, SmootherConfig("box"))
        np.testing.assert_array_equal(pr.x_tilde[:, 1], pr.x_tilde[:, 2])

    def test_config_bandwidth_resolved(self, rng):
        n = 32
        d = Dataset(rng.normal(size=n), rng.uniform(-1, 1, n), rng.normal(size=(n, 1)), ("x1",))
        pr = partial_out(d, SmootherConfig("box", None, bandwidth_c=2.0))
        assert pr.config.bandwidth == 1.0  # 2 * 32**(-1/5)


class TestNadarayaWatsonSmoother:
    def test_fit_predict_matches_nw_smooth(self, rng):
        t = rng.uniform(-1, 1, 25)
        v = rng.normal(size=25)
        sm = NadarayaWatsonSmoother(kernel="box", bandwidth=0.5).fit(t, v)
        np.testing.assert_array_equal(sm.predict(t), nw_smooth(v, t, SmootherConfig("box", 0.5)))

    def test_train_mean_fallback_counts(self, rng):
        t = rng.uniform(0, 1, 20)
        v = rng.normal(size=20)
        sm = NadarayaWatsonSmoother(kernel="box", bandwidth=0.1, on_empty="train_mean").fit(t, v)
        out = sm.predict(np.array([5.0, 0.5]))
        assert sm.n_fallback_ == 1
        assert out[0] == pytest.approx(v.mean())

    def test_raises_without_fallback(self, rng):
        t = rng.uniform(0, 1, 20)
        sm = NadarayaWatsonSmoother(kernel="box", bandwidth=0.1).fit(t, rng.normal(size=20))
        with pytest.raises(EmptyNeighborhoodError):
            sm.predict(np.array([5.0]))

    def test_get_params_roundtrip(self):
        sm = NadarayaWatsonSmoother(kernel="gaussian", bandwidth=0.3)
        params = sm.get_params()
        assert params["kernel"] == "gaussian"
        sm2 = NadarayaWatsonSmoother(**params)
        assert sm2.bandwidth == 0.3
