"""Decoherence-free-subspace encoding of one logical qubit in two physical qubits.

The logical basis is |0>_L = |10>, |1>_L = |01> (single-excitation subspace
of qubits A and B). The exchange interaction

    H2 = g |10><01| e^{i phi0} + H.c.

acts only inside the code space and takes the same two-level form as the
bare drive Hamiltonian with g = Omega/2 and phi0 = -phi, so the geometric
pulse schedules carry over unchanged. Collective dephasing enters as
-delta*Omega_m (|01><01| + |10><10|), which is proportional to the logical
identity and therefore a pure global phase on the code space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcore import gate_fidelity
from .pulses import GateSpec, PulseShape, Schedule, ShapeKind, build_schedule, target_unitary
from .noise import ErrorModel

__all__ = [
    "IDX_01",
    "IDX_10",
    "LogicalHamiltonian",
    "encode",
    "logical_basis_states",
    "logical_error_hamiltonian",
    "physical_exchange_hamiltonian",
    "propagate_logical",
    "run_logical_gate",
]

# two-qubit basis order |00>, |01>, |10>, |11>
IDX_01 = 1
IDX_10 = 2


@dataclass(frozen=True)
class LogicalHamiltonian:
    """Exchange coupling g (rad/s) at phase phi0 on the code space."""

    g: float
    phi0: float

    def logical_matrix(self) -> np.ndarray:
        """2x2 matrix g e^{i phi0} |0>_L<1| + H.c."""
        h = np.zeros((2, 2), dtype=complex)
        h[0, 1] = self.g * np.exp(1j * self.phi0)
        h[1, 0] = np.conj(h[0, 1])
        return h


def encode(state_l) -> np.ndarray:
    """Map a|0>_L + b|1>_L to a|10> + b|01> in the 4-dim physical space."""
    state_l = np.asarray(state_l, dtype=complex)
    if state_l.shape[0] != 2:
        raise ValueError("encode expects a 2-dim logical state")
    out = np.zeros(4, dtype=complex)
    out[IDX_10] = state_l[0]
    out[IDX_01] = state_l[1]
    return out


def logical_basis_states() -> tuple[np.ndarray, np.ndarray]:
    return encode(np.array([1, 0], dtype=complex)), encode(np.array([0, 1], dtype=complex))


def logical_error_hamiltonian(h_l: LogicalHamiltonian, eps: float, delta: float, omega_m: float) -> np.ndarray:
    """(1+eps) H2_L - delta*Omega_m*I on the 2-dim logical space."""
    return (1.0 + eps) * h_l.logical_matrix() - delta * omega_m * np.eye(2, dtype=complex)


def physical_exchange_hamiltonian(g: float, phi0: float, eps: float, delta: float, omega_m: float) -> np.ndarray:
    """4-dim Hamiltonian (1+eps) H2 - delta*Omega_m projected on the code space."""
    H = np.zeros((4, 4), dtype=complex)
    H[IDX_10, IDX_01] = (1.0 + eps) * g * np.exp(1j * phi0)
    H[IDX_01, IDX_10] = np.conj(H[IDX_10, IDX_01])
    H[IDX_01, IDX_01] -= delta * omega_m
    H[IDX_10, IDX_10] -= delta * omega_m
    return H


def propagate_logical(
    schedule: Schedule,
    eps: float = 0.0,
    delta: float = 0.0,
    steps_per_segment: int = 200,
) -> np.ndarray:
    """4-dim propagator of the scheduled exchange Hamiltonian under errors.

    Each segment maps (Omega(t), phi) to (g(t) = Omega(t)/2, phi0 = -phi).
    Square segments are constant and exponentiated in one step; shaped
    segments are sub-stepped with the exact per-step envelope area.
    """
    omega_m = schedule.omega_max
    U = np.eye(4, dtype=complex)
    for seg in schedule.segments:
        if seg.duration == 0.0:
            continue
        steps = 1 if seg.shape.kind is ShapeKind.SQUARE else steps_per_segment
        h = seg.duration / steps
        a_prev = 0.0
        for k in range(1, steps + 1):
            a_next = seg.shape.area_up_to(k * h, seg.duration)
            g_bar = 0.5 * (a_next - a_prev) / h
            H = physical_exchange_hamiltonian(g_bar, -seg.phase, eps, delta, omega_m)
            w, V = np.linalg.eigh(H)
            U = ((V * np.exp(-1j * w * h)) @ V.conj().T) @ U
            a_prev = a_next
    return U


def logical_unitary(U_phys: np.ndarray) -> np.ndarray:
    """Restrict a 4-dim propagator to the code space (|0>_L, |1>_L rows/cols)."""
    idx = [IDX_10, IDX_01]
    return U_phys[np.ix_(idx, idx)]


def leakage_norm(U_phys: np.ndarray) -> float:
    """Max amplitude coupling the code space to its complement."""
    inside = [IDX_10, IDX_01]
    outside = [0, 3]
    return float(
        max(
            np.max(np.abs(U_phys[np.ix_(outside, inside)])),
            np.max(np.abs(U_phys[np.ix_(inside, outside)])),
        )
    )


def run_logical_gate(
    spec: GateSpec,
    err: ErrorModel,
    shape: PulseShape | None = None,
    steps_per_segment: int = 200,
) -> float:
    """Gate fidelity of the DFS-encoded geometric gate under X/Z errors."""
    if shape is None:
        shape = PulseShape(ShapeKind.SQUARE, 1.0)
    schedule = build_schedule(spec, shape)
    U_phys = propagate_logical(schedule, err.eps, err.delta, steps_per_segment)
    U_l = logical_unitary(U_phys)
    return gate_fidelity(target_unitary(spec), U_l)
