"""
Problem and run files, and deterministic JSON/CSV emission.

Complex numbers are encoded as ``[re, im]`` pairs. Floats are written with
17 significant digits so output is byte-stable and round-trips exactly.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Any, Iterable, Sequence

import numpy as np

from .errors import QSLError
from .propagation import HITTING_GRID_POINTS
from .quantum import Observable, PhysicalConstants, QuantumState

PROBLEM_KEYS = ("hamiltonian", "initial_state", "target_state", "hbar", "t_max", "grid_points", "level")
REQUIRED_PROBLEM_KEYS = ("hamiltonian", "initial_state")
RUN_KEYS = ("label", "t_cqs", "achieved_fidelity")
CSV_HEADER = ("t", "p_target", "p_survival", "mt_envelope")


class FileFormatError(QSLError):
    pass


@dataclass(frozen=True, eq=False)
class Problem:
    hamiltonian: Observable
    initial_state: QuantumState
    target_state: QuantumState | None = None
    hbar: float = 1.0
    t_max: float | None = None
    grid_points: int = HITTING_GRID_POINTS
    level: float | None = None

    @property
    def constants(self) -> PhysicalConstants:
        return PhysicalConstants(self.hbar)


@dataclass(frozen=True)
class RunRecord:
    label: str
    t_cqs: float | None
    achieved_fidelity: float | None = None


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _real(x: Any, where: str) -> float:
    if not _is_number(x):
        raise FileFormatError(f"{where}: expected a finite number, got {x!r}")
    return float(x)


def parse_complex(pair: Any, where: str) -> complex:
    if not (isinstance(pair, list) and len(pair) == 2):
        raise FileFormatError(f"{where}: expected an [re, im] pair, got {pair!r}")
    return complex(_real(pair[0], where), _real(pair[1], where))


def parse_vector(data: Any, where: str) -> np.ndarray:
    if not (isinstance(data, list) and data):
        raise FileFormatError(f"{where}: expected a non-empty array of [re, im] pairs")
    return np.array([parse_complex(p, f"{where}[{i}]") for i, p in enumerate(data)], dtype=complex)


def parse_matrix(data: Any, where: str) -> np.ndarray:
    if not (isinstance(data, list) and data):
        raise FileFormatError(f"{where}: expected a non-empty array of rows")
    rows = [parse_vector(row, f"{where}[{i}]") for i, row in enumerate(data)]
    n = len(rows)
    if any(r.size != n for r in rows):
        raise FileFormatError(f"{where}: matrix must be square ({n} rows)")
    return np.vstack(rows)


def encode_vector(v: Iterable[complex]) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in v]


def parse_problem(doc: Any) -> Problem:
    """Validate a decoded problem document.

    Unknown keys, explicit nulls, inconsistent dimensions, non-Hermitian
    Hamiltonians and unnormalized states are all rejected.
    """
    if not isinstance(doc, dict):
        raise FileFormatError("problem file must be a JSON object")
    unknown = sorted(set(doc) - set(PROBLEM_KEYS))
    if unknown:
        raise FileFormatError(f"unknown problem key(s): {', '.join(unknown)}")
    for key in REQUIRED_PROBLEM_KEYS:
        if key not in doc:
            raise FileFormatError(f"missing required field: {key}")
    for key, value in doc.items():
        if value is None:
            raise FileFormatError(f"{key}: null is not allowed; omit optional fields instead")
    try:
        h = Observable(parse_matrix(doc["hamiltonian"], "hamiltonian"))
        psi0 = QuantumState(parse_vector(doc["initial_state"], "initial_state"), "initial")
        target = None
        if "target_state" in doc:
            target = QuantumState(parse_vector(doc["target_state"], "target_state"), "target")
    except FileFormatError:
        raise
    except QSLError as exc:
        raise FileFormatError(str(exc)) from exc
    if psi0.dim != h.dim:
        raise FileFormatError(f"initial_state has dimension {psi0.dim}, hamiltonian is {h.dim}x{h.dim}")
    if target is not None and target.dim != h.dim:
        raise FileFormatError(f"target_state has dimension {target.dim}, hamiltonian is {h.dim}x{h.dim}")
    hbar = _real(doc.get("hbar", 1.0), "hbar")
    if hbar <= 0:
        raise FileFormatError("hbar must be positive")
    t_max = None
    if "t_max" in doc:
        t_max = _real(doc["t_max"], "t_max")
        if t_max <= 0:
            raise FileFormatError("t_max must be positive")
    grid = doc.get("grid_points", HITTING_GRID_POINTS)
    if not (isinstance(grid, int) and not isinstance(grid, bool) and grid >= 2):
        raise FileFormatError(f"grid_points must be an integer >= 2, got {grid!r}")
    level = None
    if "level" in doc:
        level = _real(doc["level"], "level")
        if not 0.0 <= level <= 1.0:
            raise FileFormatError(f"level must lie in [0, 1], got {level!r}")
    return Problem(h, psi0, target, hbar, t_max, grid, level)


def _read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc})") from exc


def load_problem(path: str | Path) -> Problem:
    return parse_problem(_read_json(path))


def parse_run_record(doc: Any) -> RunRecord:
    if not isinstance(doc, dict):
        raise FileFormatError("run record must be a JSON object")
    unknown = sorted(set(doc) - set(RUN_KEYS))
    if unknown:
        raise FileFormatError(f"unknown run key(s): {', '.join(unknown)}")
    if "label" not in doc or not isinstance(doc["label"], str):
        raise FileFormatError("run record needs a text label")
    if "t_cqs" not in doc:
        raise FileFormatError("missing required field: t_cqs")
    t_cqs = doc["t_cqs"]
    if t_cqs is not None:
        t_cqs = _real(t_cqs, "t_cqs")
        if t_cqs <= 0:
            raise FileFormatError("t_cqs must be positive")
    fid = None
    if "achieved_fidelity" in doc:
        fid = _real(doc["achieved_fidelity"], "achieved_fidelity")
        if not 0.0 <= fid <= 1.0:
            raise FileFormatError("achieved_fidelity must lie in [0, 1]")
    return RunRecord(doc["label"], t_cqs, fid)


def load_runs(path: str | Path) -> list[RunRecord | FileFormatError]:
    """Parse a runs file; malformed records come back as error objects in place."""
    doc = _read_json(path)
    if not isinstance(doc, list):
        raise FileFormatError("runs file must be a JSON array")
    out: list[RunRecord | FileFormatError] = []
    for i, item in enumerate(doc):
        try:
            out.append(parse_run_record(item))
        except FileFormatError as exc:
            out.append(FileFormatError(f"record {i}: {exc}"))
    return out


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot encode non-finite number {x!r} as JSON")
    return format(x, ".17g")


def dumps(obj: Any) -> str:
    """Compact JSON with 17-significant-digit floats and insertion-ordered keys."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def write_series_csv(fh: IO[str], rows: Sequence[Sequence[float | None]]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(["" if v is None else format_float(v) for v in row])
