import numpy as np
import pytest

from plmnet import Dataset, SmootherConfig, partial_out, standardize


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_dataset(rng, n=60, p=4, duplicate_pair=None, f=None, sigma=0.3, beta=None):
    """Random correlated dataset with a smooth t-effect for solver/diagnostic tests."""
    latent = rng.normal(size=(n, 1))
    x = 0.6 * rng.normal(size=(n, p)) + 0.8 * latent
    if duplicate_pair is not None:
        k, l = duplicate_pair
        x[:, l] = x[:, k]
    t = rng.uniform(-1.0, 1.0, size=n)
    if beta is None:
        beta = np.zeros(p)
        beta[: min(3, p)] = [1.5, -1.0, 0.5][: min(3, p)]
    ft = f(t) if f is not None else t * t
    y = x @ beta + ft + sigma * rng.normal(size=n)
    return Dataset(y, t, x, tuple(f"x{j + 1}" for j in range(p))), np.asarray(beta, dtype=float)


def make_pr(rng, n=60, p=4, duplicate_pair=None, sigma=0.3, beta=None, kernel="box"):
    data, beta = make_dataset(rng, n=n, p=p, duplicate_pair=duplicate_pair, sigma=sigma, beta=beta)
    data_std, info = standardize(data)
    return partial_out(data_std, SmootherConfig(kernel)), data_std, info
