"""
Farhi-Gutmann two-state analog search model.

The Hamiltonian ``H = E_a |a><a| + E_b |b><b|`` with real overlap
``s = <a|b>`` lives in the plane spanned by ``|b>`` and
``|b'> = (|a> - s|b>) / sqrt(1 - s^2)``; in that basis it is a real
symmetric 2x2 matrix with eigenvalues ``(E/2)(1 +- mu)`` and the transition
probability from ``|a>`` to ``|b>`` oscillates with angular frequency
``mu E / hbar``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .errors import DomainError
from .quantum import NATURAL, Observable, PhysicalConstants, QuantumState


@dataclass(frozen=True)
class FgModel:
    e_a: float
    e_b: float
    s: float

    @property
    def e(self) -> float:
        return self.e_a + self.e_b

    @property
    def x(self) -> float:
        return self.e_a - self.e_b

    @property
    def mu(self) -> float:
        r = self.x / self.e
        return math.sqrt(self.s**2 + r * r * (1.0 - self.s**2))

    @property
    def lam(self) -> float:
        return self.s**2 - (self.x / self.e) * (1.0 - self.s**2)

    @property
    def degenerate(self) -> bool:
        """True when ``|a>`` and ``|b>`` coincide and ``|b'>`` is undefined."""
        return self.s == 1.0

    def as_dict(self) -> dict[str, float]:
        return {"e": self.e, "x": self.x, "mu": self.mu, "lambda": self.lam}


def fg_model(e_a: float, e_b: float, s: float) -> FgModel:
    e_a, e_b, s = float(e_a), float(e_b), float(s)
    for name, value in (("e_a", e_a), ("e_b", e_b)):
        if not (math.isfinite(value) and value > 0):
            raise DomainError(f"{name} must be a positive finite energy, got {value!r}")
    if not (math.isfinite(s) and 0.0 < s <= 1.0):
        raise DomainError(f"overlap s must lie in (0, 1], got {s!r}")
    return FgModel(e_a, e_b, s)


def fg_basis_states(model: FgModel) -> tuple[QuantumState, QuantumState]:
    """Coordinates of ``|a>`` and ``|b>`` in the ``{|b>, |b'>}`` basis.

    For ``s = 1`` both are ``(1, 0)``; check ``model.degenerate``.
    """
    c = math.sqrt(max(0.0, 1.0 - model.s**2))
    a = QuantumState(np.array([model.s, c], dtype=complex), "a")
    b = QuantumState(np.array([1.0, 0.0], dtype=complex), "b")
    return a, b


def fg_hamiltonian(model: FgModel) -> Observable:
    """Closed form ``(E/2) [[1 + lam, r], [r, 1 - lam]]`` with ``r = sqrt(mu^2 - lam^2)``."""
    mu, lam = model.mu, model.lam
    r = math.sqrt(max(0.0, mu * mu - lam * lam))
    half = 0.5 * model.e
    return Observable(half * np.array([[1.0 + lam, r], [r, 1.0 - lam]], dtype=complex))


def fg_hamiltonian_projected(model: FgModel) -> Observable:
    """``E_a |a><a| + E_b |b><b|`` assembled from the basis kets (the oracle form)."""
    a, b = fg_basis_states(model)
    va, vb = a.amplitudes, b.amplitudes
    return Observable(model.e_a * np.outer(va, va.conj()) + model.e_b * np.outer(vb, vb.conj()))


def fg_diagonalize(model: FgModel) -> tuple[tuple[float, float], npt.NDArray[np.float64]]:
    """Eigenvalues ``((E/2)(1 + mu), (E/2)(1 - mu))`` and the orthogonal matrix of eigenvectors.

    The eigenvector matrix is the symmetric reflection
    ``(1/sqrt 2) [[p, m], [m, -p]]`` with ``p = sqrt(1 + lam/mu)``,
    ``m = sqrt(1 - lam/mu)``; it is its own inverse.
    """
    mu, lam = model.mu, model.lam
    ratio = min(1.0, max(-1.0, lam / mu))
    p, m = math.sqrt(1.0 + ratio), math.sqrt(1.0 - ratio)
    u = np.array([[p, m], [m, -p]]) / math.sqrt(2.0)
    half = 0.5 * model.e
    return (half * (1.0 + mu), half * (1.0 - mu)), u


def fg_probability(model: FgModel, t: float | npt.ArrayLike, k: PhysicalConstants = NATURAL):
    """``P_t = s^2 [(1/mu^2 - 1) sin^2(mu E t / (2 hbar)) + 1]``; vectorized over ``t``."""
    mu, s = model.mu, model.s
    sin2 = np.sin(mu * model.e * np.asarray(t, dtype=float) / (2.0 * k.hbar)) ** 2
    p = s * s * ((1.0 / (mu * mu) - 1.0) * sin2 + 1.0)
    return float(p) if np.ndim(p) == 0 else p


def fg_pmax(model: FgModel) -> float:
    return (model.s / model.mu) ** 2


def fg_tmin(model: FgModel, k: PhysicalConstants = NATURAL) -> float:
    """First time the probability reaches its maximum: ``pi hbar / (E mu)``."""
    return math.pi * k.hbar / (model.e * model.mu)
