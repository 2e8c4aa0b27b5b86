from __future__ import annotations

import math

import numpy as np
import pytest

from qslimit.bounds import (
    BoundReport,
    angle_between,
    bhattacharyya_time,
    general_transition_bound,
    mt_envelope,
    offset_bound,
    offset_envelope,
    orthogonal_bound,
)
from qslimit.checks import maximizing_orthogonal_state
from qslimit.errors import DomainError, StationaryStateError
from qslimit.propagation import default_t_max, evolve, first_hitting_time, scan_probability
from qslimit.quantum import PhysicalConstants, QuantumState, std_dev
from qslimit.sampling import random_hermitian, random_orthogonal_state, random_state

from conftest import DOWN, UP, X

HALF_PI = math.pi / 2


def test_bhattacharyya_examples():
    assert bhattacharyya_time(1.0, 1.0).t_min == 0
    assert bhattacharyya_time(1.0, 0.0).t_min == pytest.approx(HALF_PI)
    assert bhattacharyya_time(1.0, 0.5).t_min == pytest.approx(math.pi / 4)
    with pytest.raises(StationaryStateError):
        bhattacharyya_time(0.0, 0.5)
    with pytest.raises(DomainError):
        bhattacharyya_time(1.0, 1.2)


def test_orthogonal_examples():
    assert orthogonal_bound(1.0).t_min == pytest.approx(HALF_PI)
    assert orthogonal_bound(HALF_PI).t_min == pytest.approx(1.0)
    assert orthogonal_bound(2.0, PhysicalConstants(3.0)).t_min == pytest.approx(3 * math.pi / 4)
    with pytest.raises(StationaryStateError):
        orthogonal_bound(-1.0)


def test_offset_examples():
    assert offset_bound(1.3, 0.0).t_min == orthogonal_bound(1.3).t_min
    assert offset_bound(1.3, HALF_PI).t_min == 0
    assert offset_bound(1.0, math.pi / 4).t_min == pytest.approx(math.pi / 4)
    with pytest.raises(DomainError):
        offset_bound(1.0, 2.0)


def test_general_examples():
    phase = np.exp(0.7j)
    assert general_transition_bound(UP, phase * UP, 1.0).t_min == 0
    assert general_transition_bound(UP, DOWN, 1.0).t_min == pytest.approx(HALF_PI)
    b = QuantumState([0.5, math.sqrt(0.75)])
    assert general_transition_bound(UP, b, 1.0).t_min == pytest.approx(math.pi / 3)


def test_consistency_chain_is_bit_identical():
    for dh in (0.1, 1.0, math.pi / 2, 7.3):
        for hbar in (1.0, 0.25, 1.054571817e-34):
            k = PhysicalConstants(hbar)
            values = {
                general_transition_bound(UP, DOWN, dh, k).t_min,
                orthogonal_bound(dh, k).t_min,
                bhattacharyya_time(dh, 0.0, k).t_min,
                offset_bound(dh, 0.0, k).t_min,
            }
            assert len(values) == 1


def test_reports_recompute_exactly(rng):
    for _ in range(20):
        dh = float(rng.uniform(0.01, 10))
        k = PhysicalConstants(float(rng.uniform(0.1, 3)))
        a, b = random_state(rng, 3), random_state(rng, 3)
        reports = [
            bhattacharyya_time(dh, float(rng.uniform()), k),
            orthogonal_bound(dh, k),
            offset_bound(dh, float(rng.uniform(0, HALF_PI)), k),
            general_transition_bound(a, b, dh, k),
        ]
        for rep in reports:
            assert isinstance(rep, BoundReport)
            assert rep.recompute() == rep.t_min
            assert str(dh) in rep.inputs_summary or repr(dh) in rep.inputs_summary


def test_angle_clamps_roundoff():
    v = np.array([0.6, 0.8j])
    assert angle_between(v, v) == 0.0


def test_mt_envelope_examples():
    assert mt_envelope(1.0, 0.0) == 1
    assert mt_envelope(2.0, math.pi / 4) == pytest.approx(0.0, abs=1e-30)
    assert mt_envelope(1.0, math.pi / 4) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        mt_envelope(1.0, 2.0)


def test_offset_envelope_examples():
    assert offset_envelope(1.7, 0.0, 0.4) == mt_envelope(1.7, 0.4)
    phi = 0.3
    assert offset_envelope(1.0, phi, 0.0) == pytest.approx(math.cos(phi) ** 2)
    assert offset_envelope(1.0, math.pi / 4, math.pi / 4) == pytest.approx(0.0, abs=1e-30)
    with pytest.raises(DomainError):
        offset_envelope(1.0, math.pi / 4, 1.0)


def test_survival_hitting_never_beats_bhattacharyya(rng):
    for _ in range(60):
        d = int(rng.integers(2, 7))
        h, psi = random_hermitian(rng, d), random_state(rng, d)
        dh = std_dev(h, psi)
        t_max = default_t_max(dh)
        values = scan_probability(h, psi, psi, t_max, 256).values
        for p in rng.uniform(values.min(), 1.0, 3):
            res = first_hitting_time(h, psi, psi, p, t_max=t_max)
            if res.converged:
                assert res.time >= bhattacharyya_time(dh, p).t_min - 1e-6


def test_full_transitions_never_beat_general_bound(rng):
    # Targets are points on the trajectory, so reaching them exactly is possible.
    checked = 0
    for _ in range(60):
        d = int(rng.integers(2, 7))
        h, a = random_hermitian(rng, d), random_state(rng, d)
        dh = std_dev(h, a)
        b = evolve(h, a, float(rng.uniform(0.1, 3.0)))
        res = first_hitting_time(h, a, b, 1.0, t_max=4.0)
        assert res.converged
        checked += 1
        assert res.time >= general_transition_bound(a, b, dh).t_min - 1e-6
    assert checked == 60


def test_sup_over_orthogonal_states(rng):
    for _ in range(50):
        d = int(rng.integers(2, 7))
        a, b = random_state(rng, d), random_state(rng, d)
        dh = float(rng.uniform(0.1, 5))
        general = general_transition_bound(a, b, dh).t_min
        for _ in range(32):
            c = random_orthogonal_state(rng, b)
            assert abs(np.vdot(b.amplitudes, c.amplitudes)) <= 1e-12
            assert offset_bound(dh, angle_between(a, c)).t_min <= general + 1e-9
        star = maximizing_orthogonal_state(a, b)
        assert offset_bound(dh, angle_between(a, star)).t_min == pytest.approx(general, abs=1e-9)


def test_sup_maximizer_when_states_coincide():
    star = maximizing_orthogonal_state(QuantumState(UP), QuantumState(UP))
    assert abs(star.amplitudes[0]) < 1e-15
    assert offset_bound(1.0, angle_between(UP, star)).t_min == general_transition_bound(UP, UP, 1.0).t_min


def test_rabi_saturates_orthogonal_bound():
    for delta in (0.5, 1.0, 3.0):
        h = delta * X
        res = first_hitting_time(h, UP, DOWN, 1.0)
        dh = std_dev(h, UP)
        assert res.time == pytest.approx(orthogonal_bound(dh).t_min, abs=1e-6)
