import numpy as np

from rpboost.data import Dataset

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE_RESULTS = {}


def random_dataset(rng, n, d):
    """Gaussian features, random labels with both classes guaranteed."""
    x = rng.normal(size=(n, d))
    y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    y[0], y[1] = 1.0, -1.0
    return Dataset(x, y)
