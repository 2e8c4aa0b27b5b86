"""
Pure states, observables and the scalar quantities built from them.

States are validated on construction and never silently renormalized; use
:func:`normalized` when renormalization is intended.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from .errors import DimensionError, NonFiniteError, NormalizationError, NotHermitianError, QSLError
from .linalg import HERMITICITY_TOLERANCE, ComplexMatrix, ComplexVector, as_matrix, as_vector, is_hermitian

NORMALIZATION_TOLERANCE = 1e-9
IMAGINARY_RESIDUE_TOLERANCE = 1e-10
VARIANCE_FLOOR = -1e-12

HBAR_SI = 1.054571817e-34


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise NonFiniteError(f"hbar must be finite and positive, got {self.hbar!r}")


NATURAL = PhysicalConstants()
SI = PhysicalConstants(HBAR_SI)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """A normalized ket. ``amplitudes`` is stored read-only."""

    amplitudes: ComplexVector
    label: str | None = field(default=None)

    def __post_init__(self) -> None:
        v = np.array(as_vector(self.amplitudes), copy=True)
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > NORMALIZATION_TOLERANCE:
            raise NormalizationError(f"state norm is {norm!r}, expected 1")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    def __len__(self) -> int:
        return self.dim


@dataclass(frozen=True, eq=False)
class Observable:
    """A Hermitian operator; ``matrix`` is stored read-only."""

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        m = np.array(as_matrix(self.matrix), copy=True)
        if not is_hermitian(m, HERMITICITY_TOLERANCE):
            raise NotHermitianError("observable matrix is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])


def normalized(v: npt.ArrayLike, label: str | None = None) -> QuantumState:
    """Build a state from an arbitrary non-zero vector by rescaling it."""
    x = as_vector(v)
    n = np.linalg.norm(x)
    if n == 0:
        raise NormalizationError("cannot normalize the zero vector")
    return QuantumState(x / n, label)


def as_state(psi: QuantumState | npt.ArrayLike) -> QuantumState:
    return psi if isinstance(psi, QuantumState) else QuantumState(psi)


def as_observable(a: Observable | npt.ArrayLike) -> Observable:
    return a if isinstance(a, Observable) else Observable(a)


def _check_dims(a: Observable, psi: QuantumState) -> None:
    if a.dim != psi.dim:
        raise DimensionError(f"operator is {a.dim}x{a.dim} but state has dimension {psi.dim}")


def _real_part(z: complex, what: str) -> float:
    if abs(z.imag) > IMAGINARY_RESIDUE_TOLERANCE:
        raise QSLError(f"{what} has imaginary part {z.imag:.3e}; operator is not Hermitian")
    return z.real


def _mean(m: np.ndarray, v: np.ndarray) -> complex:
    return complex(np.vdot(v, m @ v))


def expectation(a: Observable | npt.ArrayLike, psi: QuantumState | npt.ArrayLike) -> float:
    """``<psi|A|psi>`` as a real number."""
    a, psi = as_observable(a), as_state(psi)
    _check_dims(a, psi)
    return _real_part(_mean(a.matrix, psi.amplitudes), "expectation value")


def variance(a: Observable | npt.ArrayLike, psi: QuantumState | npt.ArrayLike) -> float:
    a, psi = as_observable(a), as_state(psi)
    _check_dims(a, psi)
    v = psi.amplitudes
    av = a.matrix @ v
    mean = _real_part(complex(np.vdot(v, av)), "expectation value")
    second = float(np.vdot(av, av).real)
    var = second - mean * mean
    if var < 0:
        if var < VARIANCE_FLOOR:
            raise QSLError(f"negative variance {var:.3e}: numerical corruption")
        var = 0.0
    return var


def std_dev(a: Observable | npt.ArrayLike, psi: QuantumState | npt.ArrayLike) -> float:
    """Standard deviation ``sqrt(<A^2> - <A>^2)`` of ``A`` in ``psi``."""
    return math.sqrt(variance(a, psi))


def projector(psi: QuantumState | npt.ArrayLike) -> Observable:
    """The rank-one projector ``|psi><psi|``."""
    v = as_state(psi).amplitudes
    return Observable(np.outer(v, v.conj()))


def overlap(a: QuantumState | npt.ArrayLike, b: QuantumState | npt.ArrayLike) -> complex:
    a, b = as_state(a), as_state(b)
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: QuantumState | npt.ArrayLike, b: QuantumState | npt.ArrayLike) -> float:
    """Squared overlap ``|<a|b>|^2``, clipped into [0, 1]."""
    return min(1.0, abs(overlap(a, b)) ** 2)


def commutator(r: ComplexMatrix, s: ComplexMatrix) -> ComplexMatrix:
    return r @ s - s @ r


def robertson_check(
    r: Observable | npt.ArrayLike,
    s: Observable | npt.ArrayLike,
    psi: QuantumState | npt.ArrayLike,
) -> tuple[float, float]:
    """Both sides of the Robertson uncertainty relation.

    Returns ``(dS * dR, |<[R, S]>| / 2)``; the relation holds when the first
    is not below the second.
    """
    r, s, psi = as_observable(r), as_observable(s), as_state(psi)
    _check_dims(r, psi)
    _check_dims(s, psi)
    lhs = std_dev(s, psi) * std_dev(r, psi)
    rhs = 0.5 * abs(_mean(commutator(r.matrix, s.matrix), psi.amplitudes))
    return lhs, rhs


def ehrenfest_rhs(
    r: Observable | npt.ArrayLike,
    h: Observable | npt.ArrayLike,
    psi: QuantumState | npt.ArrayLike,
    k: PhysicalConstants = NATURAL,
) -> float:
    """Instantaneous rate ``d<R>/dt = <[R, H]> / (i hbar)``."""
    r, h, psi = as_observable(r), as_observable(h), as_state(psi)
    _check_dims(r, psi)
    _check_dims(h, psi)
    c = _mean(commutator(r.matrix, h.matrix), psi.amplitudes)
    # <[R,H]> is purely imaginary for Hermitian R, H.
    rate = c / 1j
    return _real_part(rate, "commutator mean / i") / k.hbar
