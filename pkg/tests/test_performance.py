from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qslimit.errors import DomainError, QSLError, StationaryStateError
from qslimit.farhi_gutmann import fg_basis_states, fg_hamiltonian, fg_model, fg_pmax, fg_tmin
from qslimit.performance import (
    ControlRun,
    eta,
    eta_bhattacharyya,
    eta_fg,
    eta_general,
    eta_orthogonal,
    grade_run,
)
from qslimit.propagation import default_t_max, evolve, first_hitting_time, scan_probability
from qslimit.quantum import QuantumState, std_dev
from qslimit.sampling import random_hermitian, random_state

from conftest import DOWN, UP, X

HALF_PI = math.pi / 2


def test_eta_examples():
    assert eta(1.0, ControlRun(2.0)).eta == 0.5
    rep = eta(1.0, ControlRun(None))
    assert rep.eta == 0 and not rep.clamped and rep.t_cqs is None
    assert eta(HALF_PI, ControlRun(HALF_PI)).eta == 1


def test_eta_clamps_and_flags():
    rep = eta(2.0, ControlRun(1.0))
    assert rep.eta == 1.0 and rep.clamped and rep.raw == 2.0
    assert not eta(1.0, ControlRun(1.0)).clamped


def test_eta_rejects_bad_inputs():
    with pytest.raises(DomainError):
        ControlRun(0.0)
    with pytest.raises(DomainError):
        ControlRun(-1.0)
    with pytest.raises(DomainError):
        eta(-1.0, ControlRun(1.0))


def test_eta_zero_only_for_nonconvergence_or_zero_bound():
    assert eta(0.0, ControlRun(3.0)).eta == 0
    assert eta(1e-3, ControlRun(3.0)).eta > 0


@given(st.floats(1e-6, 1e6), st.floats(1e-6, 1e6), st.floats(1e-6, 1e6))
def test_eta_monotone_in_t_cqs(t_min, t1, t2):
    lo, hi = sorted((t1, t2))
    if lo == hi or t_min >= hi:
        return
    assert eta(t_min, ControlRun(hi)).eta < eta(t_min, ControlRun(lo)).eta


def test_eta_bhattacharyya_examples():
    rep = eta_bhattacharyya(X, UP, UP, ControlRun(4.0))
    assert rep.t_min == 0 and rep.eta == 0
    assert eta_bhattacharyya(X, UP, DOWN, ControlRun(HALF_PI)).eta == pytest.approx(1.0)
    assert eta_bhattacharyya(X, UP, DOWN, ControlRun(math.pi)).eta == pytest.approx(0.5)
    with pytest.raises(StationaryStateError):
        eta_bhattacharyya(np.diag([1.0, 2.0]), UP, DOWN, ControlRun(1.0))
    assert eta_bhattacharyya(X, UP, DOWN, ControlRun(None)).eta == 0


def test_eta_orthogonal_examples():
    assert eta_orthogonal(1.0, ControlRun(HALF_PI)).eta == pytest.approx(1.0)
    assert eta_orthogonal(1.0, ControlRun(math.pi)).eta == pytest.approx(0.5)
    assert eta_orthogonal(1.0, ControlRun(None)).eta == 0


def test_eta_fg_examples():
    m = fg_model(1, 1, 0.5)
    assert eta_fg(m, ControlRun(fg_tmin(m))).eta == 1
    assert eta_fg(m, ControlRun(2 * math.pi)).eta == pytest.approx(0.5)
    rep = eta_fg(m, ControlRun(0.9 * fg_tmin(m)))
    assert rep.eta == 1 and rep.clamped


def test_eta_general_examples():
    dh = 1.3
    assert eta_general(UP, DOWN, dh, ControlRun(2.0)).eta == eta_orthogonal(dh, ControlRun(2.0)).eta
    b = QuantumState([0.5, math.sqrt(0.75)])
    assert eta_general(UP, b, 1.0, ControlRun(2 * math.pi / 3)).eta == pytest.approx(0.5)
    assert eta_general(UP, UP, 1.0, ControlRun(1.0)).eta == 0


def test_grade_run_exact_target_matches_bhattacharyya():
    run = ControlRun(2.0, achieved_fidelity=1.0)
    assert grade_run(X, UP, DOWN, run) == eta_bhattacharyya(X, UP, DOWN, run)
    run = ControlRun(2.0, achieved_state=QuantumState(-1j * DOWN))
    assert grade_run(X, UP, DOWN, run) == eta_bhattacharyya(X, UP, DOWN, run)


def test_grade_run_partial_fidelity():
    rep = grade_run(X, UP, DOWN, ControlRun(math.pi / 4, achieved_fidelity=0.5))
    assert rep.kind == "partial-fidelity"
    assert rep.t_min == pytest.approx(math.pi / 4) and rep.eta == pytest.approx(1.0)
    halfway = QuantumState(np.array([1, -1j]) / math.sqrt(2))
    rep = grade_run(X, UP, DOWN, ControlRun(math.pi / 4, achieved_state=halfway))
    assert rep.t_min == pytest.approx(math.pi / 4) and rep.eta == pytest.approx(1.0)


def test_grade_run_degenerate_run():
    rep = grade_run(X, UP, DOWN, ControlRun(1.0, achieved_state=QuantumState(UP)))
    assert rep.t_min == 0 and rep.eta == 0
    rep = grade_run(X, UP, DOWN, ControlRun(1.0, achieved_fidelity=0.0))
    assert rep.t_min == 0 and rep.eta == 0


def test_grade_run_needs_fidelity_data():
    with pytest.raises(QSLError):
        grade_run(X, UP, DOWN, ControlRun(1.0))


def test_rabi_saturation():
    res = first_hitting_time(X, UP, DOWN, 1.0)
    rep = eta_orthogonal(std_dev(X, UP), ControlRun(res.time))
    assert rep.eta == pytest.approx(1.0, abs=1e-6)


def test_fg_saturation(rng):
    for _ in range(20):
        m = fg_model(*rng.uniform(0.1, 5.0, 2), rng.uniform(0.05, 0.95))
        a, b = fg_basis_states(m)
        res = first_hitting_time(fg_hamiltonian(m), a, b, fg_pmax(m))
        assert eta_fg(m, ControlRun(res.time)).eta == pytest.approx(1.0, abs=1e-6)


def test_measured_runs_never_exceed_unity(rng):
    # Runs produced by real evolution: raw eta stays at most 1 before clamping.
    graded = 0
    for _ in range(60):
        d = int(rng.integers(2, 6))
        h, psi, target = random_hermitian(rng, d), random_state(rng, d), random_state(rng, d)
        dh = std_dev(h, psi)
        t_max = default_t_max(dh)
        values = scan_probability(h, psi, target, t_max, 512).values
        res = first_hitting_time(h, psi, target, float(rng.uniform(values.min(), values.max())), t_max=t_max)
        if not res.converged:
            continue
        achieved = evolve(h, psi, res.time)
        rep = grade_run(h, psi, target, ControlRun(res.time, achieved_state=achieved))
        assert rep.raw <= 1 + 1e-6
        graded += 1
    assert graded >= 50
