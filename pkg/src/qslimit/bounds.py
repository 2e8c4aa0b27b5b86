"""
Closed-form quantum speed limits for time-independent Hamiltonians.

Angles follow one convention throughout: for two states the angle ``phi``
satisfies ``|<b|a>| = cos(phi)``, so their overlap probability is
``cos(phi)**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy.typing as npt

from .errors import DomainError, NonFiniteError, StationaryStateError
from .quantum import NATURAL, PhysicalConstants, QuantumState, overlap

BoundKind = Literal["bhattacharyya", "orthogonal", "offset", "general"]
BOUND_KINDS: tuple[str, ...] = ("bhattacharyya", "orthogonal", "offset", "general")
HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class BoundReport:
    """A minimum transition time together with everything needed to recompute it.

    ``inputs`` holds the kind-specific scalar argument: the target probability
    for ``bhattacharyya``, the angle ``phi`` for ``offset`` and ``general``,
    nothing for ``orthogonal``.
    """

    t_min: float
    kind: str
    delta_h: float
    hbar: float
    inputs: tuple[tuple[str, float], ...] = ()

    @property
    def inputs_summary(self) -> str:
        parts = [f"delta_h={self.delta_h!r}", f"hbar={self.hbar!r}"]
        parts += [f"{name}={value!r}" for name, value in self.inputs]
        return ", ".join(parts)

    def recompute(self) -> float:
        k = PhysicalConstants(self.hbar)
        args = dict(self.inputs)
        if self.kind == "bhattacharyya":
            return bhattacharyya_time(self.delta_h, args["p_target"], k).t_min
        if self.kind == "orthogonal":
            return orthogonal_bound(self.delta_h, k).t_min
        if self.kind == "offset":
            return offset_bound(self.delta_h, args["phi"], k).t_min
        if self.kind == "general":
            return _general_from_phi(self.delta_h, args["phi"], k).t_min
        raise DomainError(f"unknown bound kind {self.kind!r}")


def _check_delta_h(delta_h: float) -> float:
    delta_h = float(delta_h)
    if not math.isfinite(delta_h):
        raise NonFiniteError("energy uncertainty must be finite")
    if delta_h <= 0:
        raise StationaryStateError(
            "energy uncertainty is zero: a stationary state admits no transition"
        )
    return delta_h


def _check_phi(phi: float) -> float:
    phi = float(phi)
    if not (0.0 <= phi <= HALF_PI):
        raise DomainError(f"phi must lie in [0, pi/2], got {phi!r}")
    return phi


def angle_between(a: QuantumState | npt.ArrayLike, b: QuantumState | npt.ArrayLike) -> float:
    """``arccos |<b|a>|`` with the modulus clamped into [0, 1]."""
    return math.acos(min(1.0, max(0.0, abs(overlap(b, a)))))


def bhattacharyya_time(
    delta_h: float, p_target: float, k: PhysicalConstants = NATURAL
) -> BoundReport:
    """Earliest time the survival probability can drop to ``p_target``:
    ``(hbar / dH) * arccos(sqrt(p_target))``."""
    delta_h = _check_delta_h(delta_h)
    p_target = float(p_target)
    if not (0.0 <= p_target <= 1.0):
        raise DomainError(f"p_target must lie in [0, 1], got {p_target!r}")
    t = (k.hbar / delta_h) * math.acos(math.sqrt(p_target))
    return BoundReport(t, "bhattacharyya", delta_h, k.hbar, (("p_target", p_target),))


def orthogonal_bound(delta_h: float, k: PhysicalConstants = NATURAL) -> BoundReport:
    """``pi hbar / (2 dH)``, the Mandelstam-Tamm orthogonalization time."""
    delta_h = _check_delta_h(delta_h)
    # Same expression as bhattacharyya_time at p = 0 so the two agree bit for bit.
    t = (k.hbar / delta_h) * math.acos(0.0)
    return BoundReport(t, "orthogonal", delta_h, k.hbar)


def offset_bound(delta_h: float, phi: float, k: PhysicalConstants = NATURAL) -> BoundReport:
    """Time to reach a state orthogonal to ``|c>`` from ``|a>`` with
    ``|<c|a>| = cos(phi)``: ``hbar (pi - 2 phi) / (2 dH)``."""
    delta_h = _check_delta_h(delta_h)
    phi = _check_phi(phi)
    t = (k.hbar / delta_h) * (math.acos(0.0) - phi)
    return BoundReport(t, "offset", delta_h, k.hbar, (("phi", phi),))


def _general_from_phi(delta_h: float, phi: float, k: PhysicalConstants) -> BoundReport:
    delta_h = _check_delta_h(delta_h)
    phi = _check_phi(phi)
    t = (k.hbar / delta_h) * phi
    return BoundReport(t, "general", delta_h, k.hbar, (("phi", phi),))


def general_transition_bound(
    a: QuantumState | npt.ArrayLike,
    b: QuantumState | npt.ArrayLike,
    delta_h: float,
    k: PhysicalConstants = NATURAL,
) -> BoundReport:
    """``hbar * phi / dH`` with ``phi = arccos |<b|a>|``."""
    return _general_from_phi(delta_h, angle_between(a, b), k)


def mt_envelope(delta_h: float, t: float, k: PhysicalConstants = NATURAL) -> float:
    """Lower envelope ``cos^2(dH t / hbar)`` of the survival probability.

    Only defined up to the first zero at ``t = pi hbar / (2 dH)``; beyond it
    the cosine re-ascends and no longer bounds anything.
    """
    return offset_envelope(delta_h, 0.0, t, k)


def offset_envelope(
    delta_h: float, phi: float, t: float, k: PhysicalConstants = NATURAL
) -> float:
    """Lower envelope ``cos^2(dH t / hbar + phi)`` for a start at angle ``phi``."""
    delta_h, t = float(delta_h), float(t)
    if not (math.isfinite(delta_h) and delta_h >= 0):
        raise DomainError("delta_h must be finite and non-negative")
    phi = _check_phi(phi)
    if not (math.isfinite(t) and t >= 0):
        raise DomainError(f"t must be finite and non-negative, got {t!r}")
    arg = delta_h * t / k.hbar + phi
    # A few ulps of slack so the window endpoint computed by the caller is accepted.
    if arg > HALF_PI * (1.0 + 1e-12):
        raise DomainError(
            f"envelope argument {arg!r} exceeds pi/2: outside the validity window"
        )
    return math.cos(min(arg, HALF_PI)) ** 2


def envelope_window(delta_h: float, k: PhysicalConstants = NATURAL, phi: float = 0.0) -> float:
    """Last time at which :func:`offset_envelope` is defined (inf when dH = 0)."""
    if delta_h <= 0:
        return math.inf
    return (HALF_PI - phi) * k.hbar / delta_h
