"""Parametrically coupled three-level transmons: physical-level gate simulation.

Two capacitively coupled transmons with an ac frequency modulation on one of
them give, in the interaction picture, the time-dependent coupling

    H(t) = g e^{i beta cos(w_d t + phi_d)} { |01><10| e^{i D t}
           + sqrt2 |11><20| e^{i (D+alpha_a) t}
           + sqrt2 |02><11| e^{i (D-alpha_b) t}
           + 2 |12><21| e^{i (D+alpha_a-alpha_b) t} } + H.c.

with D the bare frequency difference and beta = eps_d/w_d. Choosing an
integer resonance D = n w_d (or D - alpha_b = n w_d for the two-excitation
branch) selects one block; its effective coupling is J1(beta) g. The full
Hamiltonian is integrated without rotating-wave approximation, so the
reported fidelities include the neglected oscillating terms.

Pulse segments are realized by holding the modulation amplitude constant
(Square envelope) and jumping the drive phase phi_d = pi/2 - phi_seg at
segment boundaries; the segment duration delivers the requested pulse area
at Rabi rate 2 J1(beta) g.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from dataclasses import dataclass

import numpy as np

from .qcore import state_fidelity
from .pulses import GateSpec, Scheme, _segment_plan, target_unitary
from .noise import ErrorModel

__all__ = [
    "Subspace",
    "ResonanceError",
    "TransmonParams",
    "ParametricDrive",
    "CoupledPair",
    "interaction_hamiltonian",
    "check_resonance",
    "bessel_j",
    "effective_single_logical_coupling",
    "effective_two_excitation_coupling",
    "leakage_collapse_set",
    "run_physical_single_logical_gate",
    "run_physical_cz",
    "cz_effective_logical_unitary",
    "paper_single_qubit_pair",
    "paper_cz_pair",
]

TWO_PI = 2.0 * math.pi


class Subspace(enum.Enum):
    SINGLE_EXC = "single-excitation"      # {|01>, |10>}, condition D = n w_d
    TWO_EXC_A = "two-excitation-a"        # {|11>, |20>}, condition D + alpha_a = n w_d
    TWO_EXC_B = "two-excitation-b"        # {|02>, |11>}, condition D - alpha_b = n w_d


class ResonanceError(ValueError):
    """Raised when no integer resonance condition is met."""


@dataclass(frozen=True)
class TransmonParams:
    """Transmon frequency and anharmonicity in rad/s; three levels."""

    omega: float
    alpha: float
    levels: int = 3

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("anharmonicity must be positive")
        if self.levels != 3:
            raise ValueError("only three-level transmons are modeled")


@dataclass(frozen=True)
class ParametricDrive:
    """ac frequency modulation eps_d*sin(w_d t + phi_d) on one transmon."""

    eps_d: float
    omega_d: float
    phi_d: float = 0.0

    def __post_init__(self):
        if self.omega_d <= 0:
            raise ValueError("drive frequency must be positive")

    @property
    def beta(self) -> float:
        return self.eps_d / self.omega_d


@dataclass(frozen=True)
class CoupledPair:
    """Two parametrically coupled three-level transmons (Hilbert dim 9)."""

    qubit_a: TransmonParams
    qubit_b: TransmonParams
    g_fixed: float
    drive: ParametricDrive

    @property
    def delta(self) -> float:
        return self.qubit_a.omega - self.qubit_b.omega


def _idx(m: int, n: int) -> int:
    return 3 * m + n


def _coupling_blocks(pair: CoupledPair):
    """(matrix, frequency) pairs for the four coupling blocks of the pair."""
    d = pair.delta
    aa = pair.qubit_a.alpha
    ab = pair.qubit_b.alpha
    blocks = []
    for bra, ket_, weight, freq in [
        ((0, 1), (1, 0), 1.0, d),
        ((1, 1), (2, 0), math.sqrt(2), d + aa),
        ((0, 2), (1, 1), math.sqrt(2), d - ab),
        ((1, 2), (2, 1), 2.0, d + aa - ab),
    ]:
        M = np.zeros((9, 9), dtype=complex)
        M[_idx(*bra), _idx(*ket_)] = weight
        blocks.append((M, freq))
    return blocks


def interaction_hamiltonian(pair: CoupledPair, t: float, phi_d: float | None = None, scale: float = 1.0) -> np.ndarray:
    """Exact interaction-picture Hamiltonian at time t (no RWA), 9-dim."""
    if phi_d is None:
        phi_d = pair.drive.phi_d
    beta = pair.drive.beta
    mod = np.exp(1j * beta * math.cos(pair.drive.omega_d * t + phi_d))
    H = np.zeros((9, 9), dtype=complex)
    for M, freq in _coupling_blocks(pair):
        H += (scale * pair.g_fixed * mod * np.exp(1j * freq * t)) * M
    return H + H.conj().T


def check_resonance(pair: CoupledPair, subspace: Subspace, rel_tol: float = 1e-6, n_max: int = 5) -> int:
    """Integer n with condition_freq = n * w_d, or ResonanceError."""
    freq = {
        Subspace.SINGLE_EXC: pair.delta,
        Subspace.TWO_EXC_A: pair.delta + pair.qubit_a.alpha,
        Subspace.TWO_EXC_B: pair.delta - pair.qubit_b.alpha,
    }[subspace]
    ratio = freq / pair.drive.omega_d
    n = int(round(ratio))
    if n == 0 or abs(n) > n_max or abs(ratio - n) > rel_tol * max(1.0, abs(n)):
        raise ResonanceError(
            f"not on resonance: {subspace.value} condition frequency / drive frequency "
            f"= {ratio:.6g} is not a nonzero integer within |n| <= {n_max}"
        )
    return n


def bessel_j(n: int, x: float, terms: int = 60) -> float:
    """Bessel function of the first kind J_n(x) by its power series.

    The alternating terms grow to ~1e6 before decaying near the domain edge,
    so the partial sums are accumulated in exact rational arithmetic to keep
    the absolute error below 1e-12 everywhere on |x| <= 20. A minimum of 25
    terms is always summed.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if abs(x) > 20.0:
        raise ValueError("bessel_j series domain is |x| <= 20")
    half = Fraction(x) / 2
    term = half**n / math.factorial(n)
    total = term
    for k in range(1, max(terms, 25)):
        term *= -(half * half) / (k * (k + n))
        total += term
        if k >= 25 and abs(term) < Fraction(1, 10**18):
            break
    return float(total)


def effective_single_logical_coupling(pair: CoupledPair) -> tuple[float, float]:
    """(g_eff, phi0) of the effective exchange Hamiltonian at n1 = 1 resonance."""
    n = check_resonance(pair, Subspace.SINGLE_EXC)
    if n != 1:
        raise ResonanceError(f"single-excitation branch requires n1 = 1, got {n}")
    return bessel_j(1, pair.drive.beta) * pair.g_fixed, math.pi / 2 - pair.drive.phi_d


def effective_two_excitation_coupling(pair: CoupledPair) -> float:
    """G = sqrt2 * J1(beta) * g for the {|11>, |02>} branch at n3 = 1 resonance."""
    n = check_resonance(pair, Subspace.TWO_EXC_B)
    if n != 1:
        raise ResonanceError(f"two-excitation branch requires n3 = 1, got {n}")
    return math.sqrt(2) * bessel_j(1, pair.drive.beta) * pair.g_fixed


def leakage_collapse_set(gamma: float, n_extra_qubits: int = 0):
    """Collective decay and dephasing operators including the |2> level.

    sigma1' = sum_i |0>_i<1| + sqrt2 |1>_i<2|, sigma2' = sum_i |1>_i<1| +
    2 |2>_i<2|, summed over both transmons of the pair; optionally extended
    by identity over spectator qubits.
    """
    low1 = np.array([[0, 1, 0], [0, 0, math.sqrt(2)], [0, 0, 0]], dtype=complex)
    num = np.diag([0.0, 1.0, 2.0]).astype(complex)
    i3 = np.eye(3, dtype=complex)
    s1 = np.kron(low1, i3) + np.kron(i3, low1)
    s2 = np.kron(num, i3) + np.kron(i3, num)
    if n_extra_qubits:
        ext = np.eye(2**n_extra_qubits, dtype=complex)
        s1 = np.kron(s1, ext)
        s2 = np.kron(s2, ext)
    from .noise import CollapseSet

    return CollapseSet(operators=(s1, s2), rates=(gamma, gamma))


def _segment_times(spec: GateSpec, rabi: float):
    """(duration, phi_seg) per segment at the effective Rabi rate 2*g_eff."""
    return [(area / rabi, phase) for area, phase in _segment_plan(spec)]


def _rk4_rho(rho, h_of_t, terms, T, dt, t0, record=None, record_state=None):
    """Fixed-step RK4 on the density matrix; optionally record fidelities."""
    n = max(1, int(math.ceil(T / dt - 1e-12)))
    h = T / n

    def rhs(t, r):
        H = h_of_t(t)
        out = 1j * (r @ H - H @ r)
        for rate, op, opdop in terms:
            out += rate * (op @ r @ op.conj().T - 0.5 * (opdop @ r + r @ opdop))
        return out

    t = t0
    for k in range(n):
        k1 = rhs(t, rho)
        k2 = rhs(t + 0.5 * h, rho + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, rho + 0.5 * h * k2)
        k4 = rhs(t + h, rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        if record is not None and (k % record_state[0] == 0 or k == n - 1):
            record.append((t, float(np.vdot(record_state[1], rho @ record_state[1]).real)))
    return rho, t


def _rk4_psi(psi, h_of_t, T, dt, t0, record=None, record_state=None):
    """Fixed-step RK4 Schroedinger integration for the closed-system path."""
    n = max(1, int(math.ceil(T / dt - 1e-12)))
    h = T / n

    def rhs(t, p):
        return -1j * (h_of_t(t) @ p)

    t = t0
    for k in range(n):
        k1 = rhs(t, psi)
        k2 = rhs(t + 0.5 * h, psi + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, psi + 0.5 * h * k2)
        k4 = rhs(t + h, psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        if record is not None and (k % record_state[0] == 0 or k == n - 1):
            record.append((t, float(abs(np.vdot(record_state[1], psi)) ** 2)))
    return psi, t


# 9-dim indices of the encoded logical states |0>_L = |10>, |1>_L = |01>
_L0 = _idx(1, 0)
_L1 = _idx(0, 1)


def encode_pair_state(state_l) -> np.ndarray:
    """Logical qubit state to the 9-dim two-transmon space."""
    state_l = np.asarray(state_l, dtype=complex)
    out = np.zeros(9, dtype=complex)
    out[_L0] = state_l[0]
    out[_L1] = state_l[1]
    return out


def run_physical_single_logical_gate(
    spec: GateSpec,
    pair: CoupledPair,
    err: ErrorModel,
    psi0_logical=None,
    steps_per_period: int = 40,
    record_every: int = 8,
) -> tuple[float, list[tuple[float, float]]]:
    """Full 9-dim simulation of one DFS-encoded geometric gate.

    Integrates the exact interaction Hamiltonian under the master equation
    with leakage collapse operators; returns the final state fidelity
    against the encoded ideal image of psi0_logical plus a (t, F) series.
    Closed-system runs (gamma = 0) use state-vector integration.
    """
    g_eff, _ = effective_single_logical_coupling(pair)
    rabi = 2.0 * g_eff  # segment clock uses the nominal coupling
    if psi0_logical is None:
        psi0_logical = np.array([1.0, 0.0], dtype=complex)
    psi0 = encode_pair_state(psi0_logical)
    target_l = target_unitary(spec) @ np.asarray(psi0_logical, dtype=complex)
    psi_f = encode_pair_state(target_l)

    dt = TWO_PI / (steps_per_period * pair.drive.omega_d)
    series: list[tuple[float, float]] = []
    t = 0.0
    scale = 1.0 + err.eps

    if err.gamma == 0.0:
        psi = psi0.copy()
        for tau, phi_seg in _segment_times(spec, rabi):
            if tau == 0.0:
                continue
            phi_d = math.pi / 2 - phi_seg

            def h_of_t(tt, _p=phi_d):
                return interaction_hamiltonian(pair, tt, phi_d=_p, scale=scale)

            psi, t = _rk4_psi(psi, h_of_t, tau, dt, t, record=series, record_state=(record_every, psi_f))
        fid = float(abs(np.vdot(psi_f, psi)) ** 2)
        return fid, series

    cset = leakage_collapse_set(err.gamma)
    terms = [(r, op, op.conj().T @ op) for r, op in zip(cset.rates, cset.operators)]
    rho = np.outer(psi0, psi0.conj())
    for tau, phi_seg in _segment_times(spec, rabi):
        if tau == 0.0:
            continue
        phi_d = math.pi / 2 - phi_seg

        def h_of_t(tt, _p=phi_d):
            return interaction_hamiltonian(pair, tt, phi_d=_p, scale=scale)

        rho, t = _rk4_rho(rho, h_of_t, terms, tau, dt, t, record=series, record_state=(record_every, psi_f))
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    fid = state_fidelity(rho, psi_f)
    return fid, series


# BD-pair logical states for the CZ gate: |11>_L -> |11>_BD, |A>_L -> |02>_BD,
# and the spectator C qubit distinguishes the surviving branches.
_BD11 = _idx(1, 1)
_BD02 = _idx(0, 2)
_BD10 = _idx(1, 0)
_BD00 = _idx(0, 0)
_BD01 = _idx(0, 1)


def cz_gate_spec() -> GateSpec:
    """Corrected-scheme parameters realizing CZ: gamma = pi, theta = phi = 0."""
    return GateSpec(math.pi, 0.0, 0.0, Scheme.CORRECTED)


def cz_effective_logical_unitary() -> np.ndarray:
    """4x4 logical operator of the CZ construction in the effective model.

    In the effective two-level system {|11>_L, |A>_L} the corrected schedule
    realizes exp(i pi sz) = -1 on both levels, while the other logical
    states are untouched, so the operator is diag(1, 1, 1, <11|U|11>).
    """
    from .pulses import PulseShape, build_schedule, propagate

    spec = cz_gate_spec()
    sched = build_schedule(spec, PulseShape())
    U2 = propagate(sched, 0.0, 0.0, 1)
    out = np.eye(4, dtype=complex)
    out[3, 3] = U2[0, 0]
    return out


def run_physical_cz(
    pair_bd: CoupledPair,
    err: ErrorModel,
    steps_per_period: int = 40,
    record_every: int = 8,
) -> tuple[float, list[tuple[float, float]]]:
    """Full simulation of the DFS CZ gate on the B-D transmon pair.

    Qubits A and C are spectators; A stays in |0> and factors out, C is kept
    explicitly as an ideal qubit (dim 18 total) because the initial product
    state |1>_L (|0>_L + |1>_L)/sqrt2 entangles the C branch with the B-D
    dynamics. Decoherence acts on B and D via the leakage collapse set.
    """
    G = (1.0 + err.eps) * effective_two_excitation_coupling(pair_bd)
    rabi = 2.0 * effective_two_excitation_coupling(pair_bd)
    spec = cz_gate_spec()

    # initial state (|10>_BD |1>_C + |11>_BD |0>_C)/sqrt2; CZ flips the
    # sign of the second branch
    dim = 18
    i2 = np.eye(2, dtype=complex)

    def bd_c(bd_index: int, c_index: int) -> np.ndarray:
        v = np.zeros(dim, dtype=complex)
        v[2 * bd_index + c_index] = 1.0
        return v

    psi0 = (bd_c(_BD10, 1) + bd_c(_BD11, 0)) / math.sqrt(2)
    psi_f = (bd_c(_BD10, 1) - bd_c(_BD11, 0)) / math.sqrt(2)

    dt = TWO_PI / (steps_per_period * pair_bd.drive.omega_d)
    series: list[tuple[float, float]] = []
    t = 0.0
    scale = 1.0 + err.eps

    def h_of_t_factory(phi_d):
        def h_of_t(tt):
            return np.kron(interaction_hamiltonian(pair_bd, tt, phi_d=phi_d, scale=scale), i2)

        return h_of_t

    if err.gamma == 0.0:
        psi = psi0.copy()
        for tau, phi_seg in _segment_times(spec, rabi):
            if tau == 0.0:
                continue
            psi, t = _rk4_psi(
                psi, h_of_t_factory(math.pi / 2 - phi_seg), tau, dt, t,
                record=series, record_state=(record_every, psi_f),
            )
        return float(abs(np.vdot(psi_f, psi)) ** 2), series

    cset = leakage_collapse_set(err.gamma, n_extra_qubits=1)
    terms = [(r, op, op.conj().T @ op) for r, op in zip(cset.rates, cset.operators)]
    rho = np.outer(psi0, psi0.conj())
    for tau, phi_seg in _segment_times(spec, rabi):
        if tau == 0.0:
            continue
        rho, t = _rk4_rho(
            rho, h_of_t_factory(math.pi / 2 - phi_seg), terms, tau, dt, t,
            record=series, record_state=(record_every, psi_f),
        )
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    return state_fidelity(rho, psi_f), series


def paper_single_qubit_pair(g_fixed: float | None = None, beta: float = 1.8) -> CoupledPair:
    """Device parameters of the reference single-logical-qubit setup."""
    mhz = TWO_PI * 1e6
    omega_b = TWO_PI * 5.0e9  # reference frequency; only the difference matters
    delta = 700.0 * mhz
    omega_d = 700.0 * mhz
    g = 20.0 * mhz if g_fixed is None else g_fixed
    return CoupledPair(
        qubit_a=TransmonParams(omega=omega_b + delta, alpha=220.0 * mhz),
        qubit_b=TransmonParams(omega=omega_b, alpha=245.0 * mhz),
        g_fixed=g,
        drive=ParametricDrive(eps_d=beta * omega_d, omega_d=omega_d),
    )


def paper_cz_pair(g_fixed: float | None = None, beta: float = 2.1) -> CoupledPair:
    """Device parameters of the reference B-D pair for the CZ gate."""
    mhz = TWO_PI * 1e6
    omega_d0 = TWO_PI * 4.5e9
    delta = 945.0 * mhz
    omega_drive = 700.0 * mhz
    g = 20.0 * mhz if g_fixed is None else g_fixed
    return CoupledPair(
        qubit_a=TransmonParams(omega=omega_d0 + delta, alpha=245.0 * mhz),  # transmon B
        qubit_b=TransmonParams(omega=omega_d0, alpha=245.0 * mhz),          # transmon D
        g_fixed=g,
        drive=ParametricDrive(eps_d=beta * omega_drive, omega_d=omega_drive),
    )
