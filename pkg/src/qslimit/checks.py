"""
Randomized cross-module invariant suites behind ``qslimit check``.

Each suite draws its own stream from a ``SeedSequence`` spawned off the
user seed, so adding cases to one suite never perturbs another.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import bounds, farhi_gutmann, propagation, quantum
from .fileio import encode_vector
from .sampling import random_hermitian, random_orthogonal_state, random_state

FD_STEP = 1e-5
FD_TOLERANCE = 1e-6
INEQUALITY_SLACK = 1e-10
ENVELOPE_SLACK = 1e-9
ENVELOPE_GRID = 256
HITTING_SLACK = 1e-6
FG_TOLERANCE = 1e-9
FG_TIMES = 64
SUP_SLACK = 1e-9
SUP_SAMPLES = 32


@dataclass
class SuiteResult:
    name: str
    total: int = 0
    passed: int = 0
    failure: dict[str, Any] | None = field(default=None)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def record(self, good: bool, case: Callable[[], dict[str, Any]]) -> None:
        self.total += 1
        if good:
            self.passed += 1
        elif self.failure is None:
            self.failure = case()


def _mat(m: np.ndarray) -> list[list[list[float]]]:
    return [encode_vector(row) for row in m]


def _dim(rng: np.random.Generator, lo: int = 2, hi: int = 6) -> int:
    return int(rng.integers(lo, hi + 1))


def suite_ehrenfest(rng: np.random.Generator, cases: int) -> SuiteResult:
    """Central finite difference of <R>(t) at t=0 against the commutator formula."""
    res = SuiteResult("ehrenfest")
    for _ in range(cases):
        d = _dim(rng)
        h, r, psi = random_hermitian(rng, d), random_hermitian(rng, d), random_state(rng, d)
        plus = quantum.expectation(r, propagation.evolve(h, psi, FD_STEP))
        minus = quantum.expectation(r, propagation.evolve(h, psi, -FD_STEP))
        fd = (plus - minus) / (2 * FD_STEP)
        exact = quantum.ehrenfest_rhs(r, h, psi)
        res.record(
            abs(fd - exact) <= FD_TOLERANCE,
            lambda: {"H": _mat(h.matrix), "R": _mat(r.matrix), "psi": encode_vector(psi.amplitudes),
                     "finite_difference": fd, "ehrenfest_rhs": exact},
        )
    return res


def suite_robertson(rng: np.random.Generator, cases: int) -> SuiteResult:
    res = SuiteResult("robertson")
    for _ in range(cases):
        d = _dim(rng)
        r, s, psi = random_hermitian(rng, d), random_hermitian(rng, d), random_state(rng, d)
        lhs, rhs = quantum.robertson_check(r, s, psi)
        res.record(
            lhs >= rhs - INEQUALITY_SLACK,
            lambda: {"R": _mat(r.matrix), "S": _mat(s.matrix), "psi": encode_vector(psi.amplitudes),
                     "lhs": lhs, "rhs": rhs},
        )
    return res


def suite_mt_inequality(rng: np.random.Generator, cases: int) -> SuiteResult:
    """|d<R>/dt| <= 2 dH dR / hbar."""
    res = SuiteResult("mt-inequality")
    for _ in range(cases):
        d = _dim(rng)
        h, r, psi = random_hermitian(rng, d), random_hermitian(rng, d), random_state(rng, d)
        rate = abs(quantum.ehrenfest_rhs(r, h, psi))
        cap = 2.0 * quantum.std_dev(h, psi) * quantum.std_dev(r, psi)
        res.record(
            rate <= cap + INEQUALITY_SLACK,
            lambda: {"H": _mat(h.matrix), "R": _mat(r.matrix), "psi": encode_vector(psi.amplitudes),
                     "rate": rate, "cap": cap},
        )
    return res


def suite_mt_envelope(rng: np.random.Generator, cases: int) -> SuiteResult:
    """Survival probability stays above cos^2(dH t / hbar) up to the first zero."""
    res = SuiteResult("mt-envelope")
    for _ in range(cases):
        d = _dim(rng)
        h, psi = random_hermitian(rng, d), random_state(rng, d)
        dh = quantum.std_dev(h, psi)
        window = bounds.envelope_window(dh)
        times = np.linspace(0.0, window, ENVELOPE_GRID)
        survival = propagation.TransitionAmplitude(h, psi, psi).probability(times)
        env = np.array([bounds.mt_envelope(dh, t) for t in times])
        worst = float(np.min(survival - env))
        res.record(
            worst >= -ENVELOPE_SLACK,
            lambda: {"H": _mat(h.matrix), "psi": encode_vector(psi.amplitudes), "worst_margin": worst},
        )
    return res


def suite_bhattacharyya(rng: np.random.Generator, cases: int) -> SuiteResult:
    """First hitting times never beat the speed limit.

    Survival levels are checked against ``(hbar/dH) arccos sqrt(p)``;
    target levels ``q`` against the angle still to travel,
    ``(hbar/dH) max(0, arccos|<b|a>| - arccos sqrt(q))``.
    """
    res = SuiteResult("bhattacharyya")
    for _ in range(cases):
        d = _dim(rng)
        h, psi, target = random_hermitian(rng, d), random_state(rng, d), random_state(rng, d)
        dh = quantum.std_dev(h, psi)
        t_max = propagation.default_t_max(dh)
        survival = propagation.scan_probability(h, psi, psi, t_max, 256).values
        p = float(rng.uniform(survival.min(), 1.0))
        hit = propagation.first_hitting_time(h, psi, psi, p, t_max=t_max)
        if hit.converged:
            bound = bounds.bhattacharyya_time(dh, p).t_min
            res.record(
                hit.time >= bound - HITTING_SLACK,
                lambda: {"H": _mat(h.matrix), "psi": encode_vector(psi.amplitudes), "level": p,
                         "hitting_time": hit.time, "bound": bound},
            )
        towards = propagation.scan_probability(h, psi, target, t_max, 256).values
        q = float(rng.uniform(towards.min(), towards.max()))
        hit_b = propagation.first_hitting_time(h, psi, target, q, t_max=t_max)
        if hit_b.converged:
            left = bounds.angle_between(psi, target) - math.acos(math.sqrt(q))
            bound_b = max(0.0, left) / dh
            res.record(
                hit_b.time >= bound_b - HITTING_SLACK,
                lambda: {"H": _mat(h.matrix), "psi": encode_vector(psi.amplitudes),
                         "target": encode_vector(target.amplitudes), "level": q,
                         "hitting_time": hit_b.time, "bound": bound_b},
            )
    return res


def suite_fg_closed_form(rng: np.random.Generator, cases: int) -> SuiteResult:
    """Closed-form transition probability against spectral propagation of E_a|a><a| + E_b|b><b|."""
    res = SuiteResult("fg-closed-form")
    for _ in range(cases):
        model = farhi_gutmann.fg_model(rng.uniform(0.1, 5.0), rng.uniform(0.1, 5.0), rng.uniform(0.05, 0.95))
        h = farhi_gutmann.fg_hamiltonian_projected(model)
        a, b = farhi_gutmann.fg_basis_states(model)
        times = np.linspace(0.0, 3.0 * farhi_gutmann.fg_tmin(model), FG_TIMES)
        closed = np.asarray(farhi_gutmann.fg_probability(model, times))
        brute = np.array([propagation.transition_probability(h, a, b, t) for t in times])
        worst = float(np.max(np.abs(closed - brute)))
        res.record(
            worst <= FG_TOLERANCE,
            lambda: {"e_a": model.e_a, "e_b": model.e_b, "s": model.s, "max_abs_error": worst},
        )
    return res


def suite_sup_offset(rng: np.random.Generator, cases: int) -> SuiteResult:
    """No state c orthogonal to b gives an offset bound above hbar phi / dH; c* attains it."""
    res = SuiteResult("sup-offset")
    for _ in range(cases):
        d = _dim(rng)
        a, b = random_state(rng, d), random_state(rng, d)
        dh = float(rng.uniform(0.1, 5.0))
        general = bounds.general_transition_bound(a, b, dh).t_min
        best = 0.0
        for _ in range(SUP_SAMPLES):
            c = random_orthogonal_state(rng, b)
            best = max(best, bounds.offset_bound(dh, bounds.angle_between(a, c)).t_min)
        star = maximizing_orthogonal_state(a, b)
        attained = bounds.offset_bound(dh, bounds.angle_between(a, star)).t_min
        good = best <= general + SUP_SLACK and abs(attained - general) <= SUP_SLACK
        res.record(
            good,
            lambda: {"a": encode_vector(a.amplitudes), "b": encode_vector(b.amplitudes), "delta_h": dh,
                     "general": general, "best_sampled": best, "maximizer": attained},
        )
    return res


def maximizing_orthogonal_state(a: quantum.QuantumState, b: quantum.QuantumState) -> quantum.QuantumState:
    """The state orthogonal to ``b`` with the largest overlap with ``a``.

    It is the normalized component of ``a`` orthogonal to ``b``; when ``a``
    is parallel to ``b`` every orthogonal state is equally good.
    """
    va, vb = a.amplitudes, b.amplitudes
    perp = va - vb * np.vdot(vb, va)
    n = np.linalg.norm(perp)
    if n < 1e-12:
        e = np.zeros_like(vb)
        e[int(np.argmin(np.abs(vb)))] = 1.0
        perp = e - vb * np.vdot(vb, e)
        n = np.linalg.norm(perp)
    return quantum.QuantumState(perp / n)


SUITES: tuple[Callable[[np.random.Generator, int], SuiteResult], ...] = (
    suite_ehrenfest,
    suite_robertson,
    suite_mt_inequality,
    suite_mt_envelope,
    suite_bhattacharyya,
    suite_fg_closed_form,
    suite_sup_offset,
)


def run_checks(seed: int, cases: int) -> list[SuiteResult]:
    if cases < 1:
        raise ValueError("cases must be at least 1")
    streams = np.random.SeedSequence(seed).spawn(len(SUITES))
    return [suite(np.random.Generator(np.random.PCG64(ss)), cases) for suite, ss in zip(SUITES, streams)]
