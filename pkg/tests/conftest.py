"""Shared fixtures and helpers for the test suite."""

import numpy as np
import pytest

from hamlearn.model import SIGMA_X, SIGMA_Y, SIGMA_Z, IDENTITY_2, HypothesisSet
from hamlearn.rng import RandomStream


@pytest.fixture()
def xz_set() -> HypothesisSet:
    """Two-hypothesis set {sigma_x, sigma_z} with a uniform prior."""
    return HypothesisSet([("X", SIGMA_X), ("Z", SIGMA_Z)])


def random_hermitian(rng: RandomStream, dim: int, scale: float = 3.0) -> np.ndarray:
    """Random Hermitian matrix with entries in [-scale, scale]."""
    re = np.array([[rng.uniform(-scale, scale) for _ in range(dim)] for _ in range(dim)])
    im = np.array([[rng.uniform(-scale, scale) for _ in range(dim)] for _ in range(dim)])
    m = re + 1j * im
    return (m + m.conj().T) / 2.0


def random_simplex(rng: RandomStream, n: int) -> np.ndarray:
    w = np.array([rng.uniform(0.0, 1.0) for _ in range(n)])
    return w / w.sum()


def random_qubit_set(rng: RandomStream, n: int) -> HypothesisSet:
    """Random non-degenerate single-qubit hypothesis set of size n."""
    while True:
        mats = [random_hermitian(rng, 2) for _ in range(n)]
        try:
            return HypothesisSet([(f"H{i}", m) for i, m in enumerate(mats)])
        except Exception:
            continue
