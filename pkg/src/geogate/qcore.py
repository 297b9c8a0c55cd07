"""Dense complex linear algebra, quantum states, and fidelity metrics.

Everything downstream (pulse propagation, master-equation integration, the
transmon layer) works with small dense complex matrices, so states and
operators are plain ``numpy`` arrays of dtype complex128. This module holds
the shared constructors, validators, and the two fidelity measures used
throughout the package.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "I2",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "ket",
    "normalize",
    "density",
    "axial_states",
    "is_hermitian",
    "is_unitary",
    "check_density",
    "matmul",
    "expm_hermitian",
    "gate_fidelity",
    "state_fidelity",
    "avg_gate_fidelity_open",
    "bloch_coordinates",
]

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def ket(index: int, dim: int = 2) -> np.ndarray:
    """Computational basis state |index> of the given dimension."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def normalize(psi) -> np.ndarray:
    """Return psi / ||psi||, raising on the zero vector."""
    psi = np.asarray(psi, dtype=complex)
    n = np.linalg.norm(psi)
    if n == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi / n


def density(psi) -> np.ndarray:
    """Pure-state density matrix |psi><psi|."""
    psi = normalize(psi)
    return np.outer(psi, psi.conj())


def axial_states() -> list[np.ndarray]:
    """The six axial Bloch states |0>, |1>, |+>, |->, |+i>, |-i>."""
    s = 1 / np.sqrt(2)
    return [
        ket(0),
        ket(1),
        np.array([s, s], dtype=complex),
        np.array([s, -s], dtype=complex),
        np.array([s, 1j * s], dtype=complex),
        np.array([s, -1j * s], dtype=complex),
    ]


def is_hermitian(H, tol: float = 1e-10) -> bool:
    H = np.asarray(H)
    return bool(np.max(np.abs(H - H.conj().T)) <= tol)


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = np.asarray(U)
    d = U.shape[0]
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(d))) <= tol)


def check_density(rho, herm_tol: float = 1e-12, trace_tol: float = 1e-10, eig_tol: float = -1e-10) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, near-positive spectrum."""
    rho = np.asarray(rho, dtype=complex)
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > trace_tol:
        raise ValueError("density matrix trace differs from 1")
    if np.min(np.linalg.eigvalsh(rho)) < eig_tol:
        raise ValueError("density matrix has a significantly negative eigenvalue")
    return rho


def matmul(A, B) -> np.ndarray:
    """Matrix product with an explicit dimension check."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} @ {B.shape}")
    return A @ B


def expm_hermitian(H, t: float) -> np.ndarray:
    """Propagator exp(-i H t) for Hermitian H.

    For 2x2 inputs the exact Pauli closed form is used: with
    H = h0*I + h.sigma,

        exp(-i H t) = exp(-i h0 t) [cos(|h| t) I - i sin(|h| t) (h/|h|).sigma].

    Larger matrices go through an eigendecomposition.
    """
    H = np.asarray(H, dtype=complex)
    if not is_hermitian(H, tol=1e-10):
        raise ValueError("expm_hermitian requires a Hermitian matrix")
    d = H.shape[0]
    if d == 2:
        h0 = 0.5 * (H[0, 0] + H[1, 1]).real
        hx = H[0, 1].real
        hy = -H[0, 1].imag
        hz = 0.5 * (H[0, 0] - H[1, 1]).real
        return _u2(h0, hx, hy, hz, t)
    w, V = np.linalg.eigh(H)
    return (V * np.exp(-1j * w * t)) @ V.conj().T


def _u2(h0: float, hx: float, hy: float, hz: float, t: float) -> np.ndarray:
    """exp(-i (h0 I + h.sigma) t) via the Pauli closed form."""
    r = np.sqrt(hx * hx + hy * hy + hz * hz)
    phase = np.exp(-1j * h0 * t)
    if r * abs(t) == 0.0:
        return phase * I2.copy()
    c = np.cos(r * t)
    s = np.sin(r * t) / r
    return phase * np.array(
        [
            [c - 1j * s * hz, -1j * s * (hx - 1j * hy)],
            [-1j * s * (hx + 1j * hy), c + 1j * s * hz],
        ],
        dtype=complex,
    )


def gate_fidelity(U_ideal, U_actual, unitary_tol: float = 1e-8) -> float:
    """|Tr(U_ideal^dag U_actual)| / d, insensitive to global phases."""
    U_ideal = np.asarray(U_ideal, dtype=complex)
    U_actual = np.asarray(U_actual, dtype=complex)
    if U_ideal.shape != U_actual.shape:
        raise ValueError("gate_fidelity: dimension mismatch")
    if not (is_unitary(U_ideal, unitary_tol) and is_unitary(U_actual, unitary_tol)):
        raise ValueError("gate_fidelity requires unitary arguments")
    d = U_ideal.shape[0]
    return float(abs(np.trace(U_ideal.conj().T @ U_actual)) / d)


def state_fidelity(rho, psi) -> float:
    """<psi| rho |psi> for a density matrix and a pure target state."""
    rho = np.asarray(rho, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if rho.shape[0] != psi.shape[0]:
        raise ValueError("state_fidelity: dimension mismatch")
    val = np.vdot(psi, rho @ psi)
    return float(val.real)


def avg_gate_fidelity_open(channel_output, targets) -> float:
    """Mean state fidelity over aligned (input, output density) / target pairs.

    Used as the open-system gate fidelity: callers supply the six axial
    Bloch states pushed through the channel and their ideal images.
    """
    if len(channel_output) == 0:
        raise ValueError("avg_gate_fidelity_open: empty state list")
    if len(channel_output) != len(targets):
        raise ValueError("avg_gate_fidelity_open: misaligned lists")
    fids = [state_fidelity(rho, tgt) for (_, rho), tgt in zip(channel_output, targets)]
    return float(np.mean(fids))


def bloch_coordinates(psi) -> tuple[float, float, float]:
    """(<sx>, <sy>, <sz>) for a qubit pure state."""
    psi = np.asarray(psi, dtype=complex)
    x = np.vdot(psi, SIGMA_X @ psi).real
    y = np.vdot(psi, SIGMA_Y @ psi).real
    z = np.vdot(psi, SIGMA_Z @ psi).real
    return float(x), float(y), float(z)
