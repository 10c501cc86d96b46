from pathlib import Path

import numpy as np
import pytest

from tbscatter.verify import random_hermitian

REPO_ROOT = Path(__file__).resolve().parent.parent
SPECS_DIR = REPO_ROOT / "specs"


@pytest.fixture(scope="session")
def specs_dir() -> Path:
    return SPECS_DIR


def random_delta_like(rng: np.random.Generator, n_a: int, n_b: int, energy: float) -> np.ndarray:
    """A matrix with the structure of an energy-shifted valid center."""
    h_a = random_hermitian(rng, n_a)
    h_b = random_hermitian(rng, n_b)
    h_ab = rng.standard_normal((n_a, n_b)) + 1j * rng.standard_normal((n_a, n_b))
    n = n_a + n_b
    m = np.zeros((n, n), dtype=np.complex128)
    m[:n_a, :n_a] = h_a - energy * np.eye(n_a)
    m[:n_a, n_a:] = h_ab
    m[n_a:, :n_a] = -h_ab.conj().T
    m[n_a:, n_a:] = h_b - energy * np.eye(n_b)
    return m
