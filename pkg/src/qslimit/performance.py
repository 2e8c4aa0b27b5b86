"""
Minimum-time performance measure for quantum control runs.

A run that took ``t_cqs`` to complete a transition whose speed limit is
``t_min`` scores ``eta = t_min / t_cqs``. Runs that never converged score 0.
Ratios above one are physically impossible; they are clamped to one and
flagged rather than rejected so that batch grading can continue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy.typing as npt

from .bounds import (
    angle_between,
    bhattacharyya_time,
    general_transition_bound,
    offset_bound,
    orthogonal_bound,
)
from .errors import DomainError, QSLError, StationaryStateError
from .farhi_gutmann import FgModel, fg_tmin
from .quantum import (
    NATURAL,
    Observable,
    PhysicalConstants,
    QuantumState,
    as_observable,
    as_state,
    fidelity,
    std_dev,
)

FIDELITY_THRESHOLD = 1.0 - 1e-6


@dataclass(frozen=True, eq=False)
class ControlRun:
    """Outcome of one controller run; ``t_cqs=None`` marks non-convergence."""

    t_cqs: float | None
    achieved_state: QuantumState | None = None
    achieved_fidelity: float | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.t_cqs is not None:
            t = float(self.t_cqs)
            if not (math.isfinite(t) and t > 0):
                raise DomainError(f"t_cqs must be positive and finite, got {self.t_cqs!r}")
            object.__setattr__(self, "t_cqs", t)
        if self.achieved_fidelity is not None:
            f = float(self.achieved_fidelity)
            if not (0.0 <= f <= 1.0):
                raise DomainError(f"achieved_fidelity must lie in [0, 1], got {f!r}")
            object.__setattr__(self, "achieved_fidelity", f)

    @property
    def converged(self) -> bool:
        return self.t_cqs is not None


@dataclass(frozen=True)
class EtaReport:
    eta: float
    t_min: float
    t_cqs: float | None
    kind: str
    clamped: bool
    raw: float | None = None


def eta(t_min: float, run: ControlRun, kind: str = "generic") -> EtaReport:
    t_min = float(t_min)
    if not (math.isfinite(t_min) and t_min >= 0):
        raise DomainError(f"t_min must be finite and non-negative, got {t_min!r}")
    if run.t_cqs is None:
        return EtaReport(0.0, t_min, None, kind, False, None)
    raw = t_min / run.t_cqs
    return EtaReport(min(raw, 1.0), t_min, run.t_cqs, kind, raw > 1.0, raw)


def _energy_spread(h: Observable, psi_i: QuantumState) -> float:
    # Constant of motion for time-independent H, so the initial state suffices.
    dh = std_dev(h, psi_i)
    if dh <= 0:
        raise StationaryStateError("initial state is an eigenstate of H: no transition can occur")
    return dh


def eta_bhattacharyya(
    h: Observable | npt.ArrayLike,
    psi_i: QuantumState | npt.ArrayLike,
    psi_g: QuantumState | npt.ArrayLike,
    run: ControlRun,
    k: PhysicalConstants = NATURAL,
) -> EtaReport:
    h, psi_i, psi_g = as_observable(h), as_state(psi_i), as_state(psi_g)
    dh = _energy_spread(h, psi_i)
    return eta(general_transition_bound(psi_i, psi_g, dh, k).t_min, run, "bhattacharyya")


def eta_orthogonal(delta_h: float, run: ControlRun, k: PhysicalConstants = NATURAL) -> EtaReport:
    return eta(orthogonal_bound(delta_h, k).t_min, run, "orthogonal")


def eta_offset(
    delta_h: float, phi: float, run: ControlRun, k: PhysicalConstants = NATURAL
) -> EtaReport:
    return eta(offset_bound(delta_h, phi, k).t_min, run, "offset")


def eta_fg(model: FgModel, run: ControlRun, k: PhysicalConstants = NATURAL) -> EtaReport:
    return eta(fg_tmin(model, k), run, "fg")


def eta_general(
    a: QuantumState | npt.ArrayLike,
    b: QuantumState | npt.ArrayLike,
    delta_h: float,
    run: ControlRun,
    k: PhysicalConstants = NATURAL,
) -> EtaReport:
    return eta(general_transition_bound(a, b, delta_h, k).t_min, run, "general")


def grade_run(
    h: Observable | npt.ArrayLike,
    psi_i: QuantumState | npt.ArrayLike,
    psi_g: QuantumState | npt.ArrayLike,
    run: ControlRun,
    fidelity_threshold: float = FIDELITY_THRESHOLD,
    k: PhysicalConstants = NATURAL,
) -> EtaReport:
    """Grade a run that may have missed its target.

    Runs reaching the target to within ``fidelity_threshold`` are graded
    against the exact-target bound. Otherwise the bound is for the state the
    run actually reached: with ``achieved_state`` known, the survival
    probability ``|<psi_i|psi_f>|^2`` sets the angle travelled; with only a
    target fidelity ``F``, the smallest angle consistent with it is
    ``arccos|<psi_g|psi_i>| - arccos(sqrt F)``.
    """
    h, psi_i, psi_g = as_observable(h), as_state(psi_i), as_state(psi_g)
    if run.t_cqs is None:
        return eta_bhattacharyya(h, psi_i, psi_g, run, k)
    if run.achieved_state is not None:
        f = fidelity(psi_g, run.achieved_state)
    elif run.achieved_fidelity is not None:
        f = run.achieved_fidelity
    else:
        raise QSLError("run carries neither achieved_state nor achieved_fidelity")
    if f >= fidelity_threshold:
        return eta_bhattacharyya(h, psi_i, psi_g, run, k)
    dh = _energy_spread(h, psi_i)
    if run.achieved_state is not None:
        t_min = bhattacharyya_time(dh, fidelity(psi_i, run.achieved_state), k).t_min
    else:
        travelled = max(0.0, angle_between(psi_i, psi_g) - math.acos(math.sqrt(f)))
        t_min = k.hbar * travelled / dh
    return eta(t_min, run, "partial-fidelity")
