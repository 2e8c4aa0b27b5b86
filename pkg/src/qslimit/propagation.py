"""
Time evolution under a time-independent Hamiltonian.

Everything here takes ``t0 = 0``; for a constant Hamiltonian only the
elapsed time matters. The spectral propagator is the production path and
:func:`rk4_evolve` is an independent fixed-step oracle for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt

from .errors import DimensionError, DomainError, NonFiniteError
from .linalg import ComplexMatrix, ComplexVector, EigenDecomposition, eig_hermitian, spectral_function
from .quantum import (
    NATURAL,
    Observable,
    PhysicalConstants,
    QuantumState,
    as_observable,
    as_state,
    std_dev,
)

UNITARITY_TOLERANCE = 1e-9
HITTING_GRID_POINTS = 2048
BISECTION_ITERATIONS = 80
HITTING_TOLERANCE = 1e-9
VANISH_EPSILON = 1e-10
# Relative to the spectral radius of H.
STATIONARY_TOLERANCE = 1e-12

HittingMode = Literal["reach-level", "vanish"]


@dataclass(frozen=True, eq=False)
class Propagator:
    matrix: ComplexMatrix
    t: float
    hbar: float

    def __post_init__(self) -> None:
        u = self.matrix
        err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
        if err > UNITARITY_TOLERANCE:
            raise NonFiniteError(f"propagator is not unitary (deviation {err:.3e})")

    def apply(self, psi: QuantumState) -> QuantumState:
        return QuantumState(self.matrix @ psi.amplitudes, psi.label)


@dataclass(frozen=True, eq=False)
class ProbabilitySeries:
    times: npt.NDArray[np.float64]
    values: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.times.shape != self.values.shape:
            raise DimensionError("times and values differ in length")
        if np.any(np.diff(self.times) <= 0):
            raise DomainError("times must be strictly increasing")

    def __len__(self) -> int:
        return int(self.times.size)


@dataclass(frozen=True)
class HittingResult:
    time: float | None
    achieved: float
    converged: bool


def _check_time(t: float) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise NonFiniteError(f"time must be finite, got {t!r}")
    return t


def _pair(h, psi0) -> tuple[Observable, QuantumState]:
    h, psi0 = as_observable(h), as_state(psi0)
    if h.dim != psi0.dim:
        raise DimensionError(f"Hamiltonian is {h.dim}x{h.dim} but state has dimension {psi0.dim}")
    return h, psi0


def propagator(h: Observable | npt.ArrayLike, t: float, k: PhysicalConstants = NATURAL) -> Propagator:
    """Spectral evaluation of ``exp(-i H t / hbar)``."""
    h = as_observable(h)
    t = _check_time(t)
    if t == 0.0:
        return Propagator(np.eye(h.dim, dtype=complex), 0.0, k.hbar)
    u = spectral_function(h.matrix, lambda lam: np.exp(-1j * lam * (t / k.hbar)))
    return Propagator(u, t, k.hbar)


def evolve(
    h: Observable | npt.ArrayLike,
    psi0: QuantumState | npt.ArrayLike,
    t: float,
    k: PhysicalConstants = NATURAL,
) -> QuantumState:
    h, psi0 = _pair(h, psi0)
    return propagator(h, t, k).apply(psi0)


class TransitionAmplitude:
    """``<target| exp(-iHt/hbar) |psi0>`` evaluated from one eigendecomposition.

    Writing the amplitude as ``sum_k c_k exp(-i E_k t / hbar)`` makes both
    the probability and its exact time derivative cheap on arbitrary grids.
    """

    def __init__(
        self,
        h: Observable | npt.ArrayLike,
        psi0: QuantumState | npt.ArrayLike,
        target: QuantumState | npt.ArrayLike,
        k: PhysicalConstants = NATURAL,
        decomposition: EigenDecomposition | None = None,
    ) -> None:
        h, psi0 = _pair(h, psi0)
        target = as_state(target)
        if target.dim != psi0.dim:
            raise DimensionError(f"target has dimension {target.dim}, expected {psi0.dim}")
        dec = decomposition or eig_hermitian(h.matrix)
        v = dec.eigenvectors
        a = v.conj().T @ psi0.amplitudes
        b = v.conj().T @ target.amplitudes
        self.coefficients = b.conj() * a
        # A global energy shift only changes the phase of the amplitude.
        lam = dec.eigenvalues
        self.omegas = (lam - 0.5 * (lam[0] + lam[-1])) / k.hbar
        self.hbar = k.hbar
        self.spectral_radius = float(np.max(np.abs(lam)))

    def amplitude(self, t: npt.ArrayLike) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        phases = np.exp(-1j * np.multiply.outer(t, self.omegas))
        return phases @ self.coefficients

    def probability(self, t: npt.ArrayLike) -> np.ndarray:
        return np.clip(np.abs(self.amplitude(t)) ** 2, 0.0, 1.0)

    def derivative(self, t: npt.ArrayLike) -> np.ndarray:
        """Exact ``dP/dt``."""
        t = np.asarray(t, dtype=float)
        phases = np.exp(-1j * np.multiply.outer(t, self.omegas))
        amp = phases @ self.coefficients
        damp = phases @ (self.coefficients * (-1j * self.omegas))
        return 2.0 * np.real(np.conj(amp) * damp)


def transition_probability(
    h: Observable | npt.ArrayLike,
    psi0: QuantumState | npt.ArrayLike,
    target: QuantumState | npt.ArrayLike,
    t: float,
    k: PhysicalConstants = NATURAL,
) -> float:
    """``|<target|U(t)|psi0>|^2``; survival probability when ``target`` is ``psi0``."""
    h, psi0 = _pair(h, psi0)
    target = as_state(target)
    if target.dim != psi0.dim:
        raise DimensionError(f"target has dimension {target.dim}, expected {psi0.dim}")
    psi_t = propagator(h, t, k).matrix @ psi0.amplitudes
    return float(min(1.0, abs(np.vdot(target.amplitudes, psi_t)) ** 2))


def scan_probability(
    h: Observable | npt.ArrayLike,
    psi0: QuantumState | npt.ArrayLike,
    target: QuantumState | npt.ArrayLike,
    t_max: float,
    n_points: int,
    k: PhysicalConstants = NATURAL,
) -> ProbabilitySeries:
    """Transition probability on a uniform grid ``0 .. t_max`` inclusive."""
    t_max = _check_time(t_max)
    if t_max <= 0:
        raise DomainError("t_max must be positive")
    if int(n_points) < 2:
        raise DomainError("n_points must be at least 2")
    times = np.linspace(0.0, t_max, int(n_points))
    values = TransitionAmplitude(h, psi0, target, k).probability(times)
    times.setflags(write=False)
    values.setflags(write=False)
    return ProbabilitySeries(times, values)


def default_t_max(delta_h: float, k: PhysicalConstants = NATURAL) -> float:
    """Four orthogonalization-time bounds: ``4 * pi hbar / (2 dH)``."""
    if not delta_h > 0:
        raise DomainError("default t_max needs a positive energy uncertainty")
    return 4.0 * math.pi * k.hbar / (2.0 * delta_h)


def _bisect_level(f, lo: float, hi: float, f_lo: float, iterations: int) -> float:
    # Returns the end of the final bracket lying on the far side of the level.
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return hi


def _refine_extremum(
    amp: TransitionAmplitude, times: np.ndarray, i: int, maximize: bool, iterations: int
) -> float:
    """Locate the extremum of P near ``times[i]`` by bisecting on the sign of dP/dt."""
    sign = 1.0 if maximize else -1.0
    d_mid = sign * float(amp.derivative(times[i]))
    if d_mid > 0:
        lo, hi = times[i], times[i + 1]
    elif d_mid < 0:
        lo, hi = times[i - 1], times[i]
    else:
        return float(times[i])
    d_lo = sign * float(amp.derivative(lo))
    d_hi = sign * float(amp.derivative(hi))
    if not (d_lo >= 0 >= d_hi):
        return float(times[i])
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if sign * float(amp.derivative(mid)) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def first_hitting_time(
    h: Observable | npt.ArrayLike,
    psi0: QuantumState | npt.ArrayLike,
    target: QuantumState | npt.ArrayLike,
    level: float,
    mode: HittingMode = "reach-level",
    t_max: float | None = None,
    k: PhysicalConstants = NATURAL,
    grid_points: int = HITTING_GRID_POINTS,
    iterations: int = BISECTION_ITERATIONS,
    tolerance: float = HITTING_TOLERANCE,
) -> HittingResult:
    """Earliest ``t`` in ``[0, t_max]`` with ``P_t = level``.

    A coarse grid brackets the first crossing, which bisection then refines.
    Levels that the probability only touches (a maximum equal to the level,
    or ``P_t = 0`` in ``"vanish"`` mode) never change sign; grid extrema on the
    approaching side are refined through the exact derivative and accepted
    when they reach the level within ``tolerance`` (``VANISH_EPSILON`` in
    vanish mode).

    When ``t_max`` is omitted it defaults to :func:`default_t_max`. A
    stationary initial state returns ``converged=False`` unless the level
    already holds at ``t = 0``.
    """
    if mode not in ("reach-level", "vanish"):
        raise DomainError(f"unknown hitting mode {mode!r}")
    if mode == "vanish":
        level, tolerance = 0.0, VANISH_EPSILON
    level = float(level)
    if not (0.0 <= level <= 1.0):
        raise DomainError(f"level must lie in [0, 1], got {level!r}")
    if int(grid_points) < 3:
        raise DomainError("grid_points must be at least 3")
    h, psi0 = _pair(h, psi0)
    amp = TransitionAmplitude(h, psi0, target, k)

    def p(t: float) -> float:
        return float(amp.probability(t))

    p0 = p(0.0)
    if abs(p0 - level) <= tolerance:
        return HittingResult(0.0, p0, True)
    delta_h = std_dev(h, psi0)
    if delta_h <= STATIONARY_TOLERANCE * max(amp.spectral_radius, 1e-300):
        return HittingResult(None, p0, False)
    if t_max is None:
        t_max = default_t_max(delta_h, k)
    t_max = _check_time(t_max)
    if t_max <= 0:
        raise DomainError("t_max must be positive")

    def g(t: float) -> float:
        return p(t) - level

    times = np.linspace(0.0, t_max, int(grid_points))
    gs = amp.probability(times) - level
    n = times.size
    for i in range(1, n):
        if gs[i] == 0.0 or (gs[i - 1] > 0) != (gs[i] > 0):
            t_hit = times[i] if gs[i] == 0.0 else _bisect_level(g, times[i - 1], times[i], gs[i - 1], iterations)
            achieved = p(t_hit)
            return HittingResult(float(t_hit), achieved, abs(achieved - level) <= tolerance)
        if i == n - 1:
            break
        below = gs[i] < 0
        if below and gs[i] >= gs[i - 1] and gs[i] >= gs[i + 1]:
            maximize = True
        elif not below and gs[i] <= gs[i - 1] and gs[i] <= gs[i + 1]:
            maximize = False
        else:
            continue
        t_ext = _refine_extremum(amp, times, i, maximize, iterations)
        g_ext = g(t_ext)
        if g_ext != 0.0 and (g_ext > 0) != (gs[i] > 0):
            t_hit = _bisect_level(g, times[i - 1], t_ext, gs[i - 1], iterations)
            achieved = p(t_hit)
            return HittingResult(float(t_hit), achieved, abs(achieved - level) <= tolerance)
        if abs(g_ext) <= tolerance:
            return HittingResult(float(t_ext), g_ext + level, True)
    return HittingResult(None, p(t_max), False)


def rk4_evolve_batch(
    hamiltonians: npt.ArrayLike,
    states: npt.ArrayLike,
    times: npt.ArrayLike,
    steps: int,
    hbar: float = 1.0,
) -> np.ndarray:
    """Classical RK4 on ``dpsi/dt = -i H psi / hbar`` for a batch of problems.

    ``hamiltonians`` has shape ``(B, d, d)``, ``states`` ``(B, d)`` and
    ``times`` ``(B,)``; problem ``j`` takes ``steps`` equal steps of
    ``times[j] / steps``. No renormalization is applied.
    """
    if int(steps) < 1:
        raise DomainError("steps must be at least 1")
    gen = -1j * np.asarray(hamiltonians, dtype=np.complex128) / hbar
    y = np.array(states, dtype=np.complex128)
    dt = (np.asarray(times, dtype=float) / int(steps))[:, None]
    if gen.ndim != 3 or y.ndim != 2 or gen.shape[:2] != y.shape or dt.shape[0] != y.shape[0]:
        raise DimensionError("inconsistent batch shapes")

    def f(v: np.ndarray) -> np.ndarray:
        return np.matmul(gen, v[..., None])[..., 0]

    for _ in range(int(steps)):
        k1 = f(y)
        k2 = f(y + 0.5 * dt * k1)
        k3 = f(y + 0.5 * dt * k2)
        k4 = f(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


def rk4_evolve(
    h: Observable | npt.ArrayLike,
    psi0: QuantumState | npt.ArrayLike,
    t: float,
    steps: int,
    k: PhysicalConstants = NATURAL,
) -> ComplexVector:
    """Fixed-step RK4 evolution of ``psi0`` to time ``t``.

    Returns the raw amplitude vector: its norm drift measures step adequacy,
    so it is not wrapped in a (normalized) :class:`QuantumState`.
    """
    h, psi0 = _pair(h, psi0)
    t = _check_time(t)
    out = rk4_evolve_batch(h.matrix[None], psi0.amplitudes[None], [t], steps, k.hbar)
    return out[0]
