"""Quantum speed limits and the minimum-time performance measure for quantum control."""

from .bounds import (
    BoundReport,
    bhattacharyya_time,
    general_transition_bound,
    mt_envelope,
    offset_bound,
    offset_envelope,
    orthogonal_bound,
)
from .errors import QSLError
from .farhi_gutmann import (
    FgModel,
    fg_basis_states,
    fg_diagonalize,
    fg_hamiltonian,
    fg_model,
    fg_pmax,
    fg_probability,
    fg_tmin,
)
from .linalg import EigenDecomposition, eig_hermitian, inner_product, is_hermitian, spectral_function
from .performance import (
    ControlRun,
    EtaReport,
    eta,
    eta_bhattacharyya,
    eta_fg,
    eta_general,
    eta_orthogonal,
    grade_run,
)
from .propagation import (
    HittingResult,
    ProbabilitySeries,
    Propagator,
    evolve,
    first_hitting_time,
    propagator,
    rk4_evolve,
    scan_probability,
    transition_probability,
)
from .quantum import (
    NATURAL,
    Observable,
    PhysicalConstants,
    QuantumState,
    ehrenfest_rhs,
    expectation,
    fidelity,
    normalized,
    projector,
    robertson_check,
    std_dev,
)

__version__ = "0.1.0"
