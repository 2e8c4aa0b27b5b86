"""
Seeded random test systems.

All randomness goes through ``numpy.random.Generator`` backed by PCG64, so a
given seed reproduces the same systems on every run.
"""

from __future__ import annotations

import numpy as np

from .quantum import Observable, QuantumState


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.standard_normal(dim) + 1j * rng.standard_normal(dim)


def random_state(rng: np.random.Generator, dim: int) -> QuantumState:
    """Haar-distributed pure state."""
    v = random_vector(rng, dim)
    return QuantumState(v / np.linalg.norm(v))


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> Observable:
    """GUE-like Hermitian matrix with entries of order ``scale / sqrt(dim)``."""
    a = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2 * dim)
    return Observable(scale * (a + a.conj().T) / 2)


def random_orthogonal_state(rng: np.random.Generator, to: QuantumState) -> QuantumState:
    """Random state orthogonal to ``to`` (dimension must be at least 2)."""
    b = to.amplitudes
    v = random_vector(rng, b.size)
    v = v - b * np.vdot(b, v)
    v = v - b * np.vdot(b, v)
    return QuantumState(v / np.linalg.norm(v))
