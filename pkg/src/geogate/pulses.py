"""Geometric gate pulse schedules and their propagation.

Implements the three-segment single-loop construction and the seven-segment
dynamically-corrected construction, both driving a resonant qubit with

    H(t) = (Omega(t)/2) (cos(phi) sx + sin(phi) sy),

optionally perturbed by a fractional amplitude error eps, H -> (1+eps) H,
and a detuning term -delta * Omega_m |1><1|. Segment propagators use the
exact 2x2 Pauli exponential; within a segment the drive direction is fixed,
so for delta = 0 any sub-stepping is exact by commutativity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .qcore import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, _u2, bloch_coordinates, normalize

__all__ = [
    "ShapeKind",
    "Scheme",
    "PulseShape",
    "PulseSegment",
    "GateSpec",
    "Schedule",
    "target_unitary",
    "build_schedule",
    "propagate",
    "propagate_interval",
    "infidelity_series_coefficient",
    "bloch_trajectory",
    "write_trajectory_csv",
]

TWO_PI = 2.0 * math.pi


class ShapeKind(enum.Enum):
    SQUARE = "square"
    RAISED_COSINE = "raised-cosine"


class Scheme(enum.Enum):
    SINGLE_LOOP = "single-loop"
    CORRECTED = "corrected"


@dataclass(frozen=True)
class PulseShape:
    """Pulse envelope family with peak Rabi amplitude omega_max (rad/s)."""

    kind: ShapeKind = ShapeKind.SQUARE
    omega_max: float = 1.0

    def __post_init__(self):
        if self.omega_max <= 0:
            raise ValueError("omega_max must be positive")

    def duration_for_area(self, area: float) -> float:
        """Segment duration delivering the requested pulse area."""
        if self.kind is ShapeKind.SQUARE:
            return area / self.omega_max
        # raised cosine has mean amplitude omega_max / 2
        return 2.0 * area / self.omega_max

    def envelope(self, s: float, tau: float) -> float:
        """Instantaneous Rabi amplitude at local time s in a segment of length tau."""
        if self.kind is ShapeKind.SQUARE:
            return self.omega_max
        return 0.5 * self.omega_max * (1.0 - math.cos(TWO_PI * s / tau))

    def area_up_to(self, s: float, tau: float) -> float:
        """Exact integral of the envelope over [0, s] within a segment of length tau."""
        if self.kind is ShapeKind.SQUARE:
            return self.omega_max * s
        return 0.5 * self.omega_max * (s - (tau / TWO_PI) * math.sin(TWO_PI * s / tau))


@dataclass(frozen=True)
class PulseSegment:
    area: float
    phase: float
    shape: PulseShape
    duration: float

    def __post_init__(self):
        if self.area < 0:
            raise ValueError("segment area must be nonnegative")


@dataclass(frozen=True)
class GateSpec:
    """Geometric gate parameters: U = exp(i gamma n.sigma) with
    n = (sin(theta) cos(phi), sin(theta) sin(phi), cos(theta))."""

    gamma: float
    theta: float
    phi: float
    scheme: Scheme = Scheme.CORRECTED

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi + 1e-12):
            raise ValueError("theta must lie in [0, pi]")
        # normalize phi to [0, 2pi) and gamma to (-pi, pi]
        phi = self.phi % TWO_PI
        gamma = math.remainder(self.gamma, TWO_PI)
        if gamma <= -math.pi:
            gamma += TWO_PI
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "gamma", gamma)


@dataclass(frozen=True)
class Schedule:
    segments: tuple[PulseSegment, ...]
    boundary_times: tuple[float, ...] = field(default=())
    total_duration: float = 0.0

    @property
    def omega_max(self) -> float:
        return self.segments[0].shape.omega_max


def target_unitary(spec: GateSpec) -> np.ndarray:
    """Ideal geometric gate cos(gamma) I + i sin(gamma) n.sigma."""
    n_dot_sigma = (
        math.sin(spec.theta) * math.cos(spec.phi) * SIGMA_X
        + math.sin(spec.theta) * math.sin(spec.phi) * SIGMA_Y
        + math.cos(spec.theta) * SIGMA_Z
    )
    return math.cos(spec.gamma) * I2 + 1j * math.sin(spec.gamma) * n_dot_sigma


def _segment_plan(spec: GateSpec) -> list[tuple[float, float]]:
    """(area, phase) pairs for the requested scheme."""
    g, th, ph = spec.gamma, spec.theta, spec.phi
    if spec.scheme is Scheme.SINGLE_LOOP:
        return [
            (th, ph - math.pi / 2),
            (math.pi, ph + g + math.pi / 2),
            (math.pi - th, ph - math.pi / 2),
        ]
    if th > math.pi / 2 + 1e-12:
        raise ValueError("theta out of corrected-scheme range (requires theta <= pi/2)")
    return [
        (th, ph - math.pi / 2),
        (math.pi / 2, ph + g + math.pi / 2),
        (math.pi, ph + g + math.pi),
        (math.pi / 2, ph + g + math.pi / 2),
        (math.pi / 2, ph - math.pi / 2),
        (math.pi, ph),
        (math.pi / 2 - th, ph - math.pi / 2),
    ]


def build_schedule(spec: GateSpec, shape: PulseShape) -> Schedule:
    """Pulse schedule realizing the spec under the chosen envelope shape.

    Single-loop: 3 segments with areas (theta, pi, pi - theta). Corrected:
    7 segments with areas (theta, pi/2, pi, pi/2, pi/2, pi, pi/2 - theta);
    the two inserted pi pulses carry phases phi+gamma+pi and phi, whose
    dynamical phases cancel. Zero-area segments are kept as zero-duration
    no-ops so boundary indexing is stable.
    """
    segments = []
    boundaries = []
    t = 0.0
    for area, phase in _segment_plan(spec):
        area = max(area, 0.0)  # clip -1e-17 style roundoff at theta = pi/2
        tau = shape.duration_for_area(area)
        segments.append(PulseSegment(area=area, phase=phase, shape=shape, duration=tau))
        t += tau
        boundaries.append(t)
    return Schedule(segments=tuple(segments), boundary_times=tuple(boundaries), total_duration=t)


def _substep_unitary(seg: PulseSegment, sub_area: float, h: float, eps: float, delta: float, omega_m: float) -> np.ndarray:
    """Exact exponential of the time-averaged Hamiltonian over one sub-step.

    The drive term contributes (1+eps) * sub_area/2 rotation about
    (cos phase, sin phase, 0); the detuning term -delta*omega_m |1><1|
    contributes h0 = -delta*omega_m/2 and hz = +delta*omega_m/2.
    """
    half = 0.5 * (1.0 + eps) * sub_area
    if h == 0.0:
        return I2.copy()
    hx = half / h * math.cos(seg.phase)
    hy = half / h * math.sin(seg.phase)
    hz = 0.5 * delta * omega_m
    h0 = -0.5 * delta * omega_m
    return _u2(h0, hx, hy, hz, h)


def _segment_propagator(seg: PulseSegment, s0: float, s1: float, eps: float, delta: float, steps: int) -> np.ndarray:
    """Propagator over local times [s0, s1] of one segment.

    Square segments have a constant Hamiltonian, so a single exact
    exponential suffices regardless of eps/delta. Shaped segments are
    sub-stepped with the exact per-step envelope area (Magnus-1), which is
    exact when delta = 0 by commutativity.
    """
    tau = seg.duration
    if tau == 0.0 or s1 <= s0:
        return I2.copy()
    omega_m = seg.shape.omega_max
    if seg.shape.kind is ShapeKind.SQUARE:
        sub = seg.shape.area_up_to(s1, tau) - seg.shape.area_up_to(s0, tau)
        return _substep_unitary(seg, sub, s1 - s0, eps, delta, omega_m)
    U = I2.copy()
    h = (s1 - s0) / steps
    a_prev = seg.shape.area_up_to(s0, tau)
    for k in range(1, steps + 1):
        a_next = seg.shape.area_up_to(s0 + k * h, tau)
        U = _substep_unitary(seg, a_next - a_prev, h, eps, delta, omega_m) @ U
        a_prev = a_next
    return U


def propagate(schedule: Schedule, eps: float = 0.0, delta: float = 0.0, steps_per_segment: int = 200) -> np.ndarray:
    """Time-ordered propagator of the full schedule under systematic errors."""
    if steps_per_segment < 1:
        raise ValueError("steps_per_segment must be >= 1")
    U = I2.copy()
    for seg in schedule.segments:
        U = _segment_propagator(seg, 0.0, seg.duration, eps, delta, steps_per_segment) @ U
    return U


def propagate_interval(schedule: Schedule, t0: float, t1: float, eps: float = 0.0, delta: float = 0.0, steps_per_segment: int = 200) -> np.ndarray:
    """Propagator over the absolute time window [t0, t1] of the schedule."""
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    U = I2.copy()
    seg_start = 0.0
    for seg, seg_end in zip(schedule.segments, schedule.boundary_times):
        lo = max(t0, seg_start)
        hi = min(t1, seg_end)
        if hi > lo and seg.duration > 0.0:
            frac = (hi - lo) / seg.duration
            steps = max(1, int(math.ceil(steps_per_segment * frac)))
            U = _segment_propagator(seg, lo - seg_start, hi - seg_start, eps, delta, steps) @ U
        seg_start = seg_end
    return U


def infidelity_series_coefficient(
    spec: GateSpec,
    shape: PulseShape,
    order: int,
    eps_min: float = 1e-3,
    eps_max: float = 1e-2,
    points: int = 9,
) -> tuple[float, float]:
    """Fit 1 - F(eps) ~ c * eps**order on log-log axes.

    Returns (coefficient, fitted_exponent). Raises if the fitted exponent
    deviates from the requested order by more than 0.2, which flags a wrong
    leading-order ansatz.
    """
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    if points < 8:
        raise ValueError("need at least 8 fit points")
    from .qcore import gate_fidelity

    sched = build_schedule(spec, shape)
    target = target_unitary(spec)
    eps_grid = np.geomspace(eps_min, eps_max, points)
    infid = []
    for e in eps_grid:
        F = gate_fidelity(target, propagate(sched, eps=e, delta=0.0, steps_per_segment=64))
        infid.append(max(1.0 - F, 1e-300))
    slope, intercept = np.polyfit(np.log(eps_grid), np.log(infid), 1)
    exponent = float(slope)
    if abs(exponent - order) > 0.2:
        raise ValueError(
            f"wrong leading order: fitted exponent {exponent:.3f} vs requested {order}"
        )
    coeff = float(math.exp(intercept))
    return coeff, exponent


def bloch_trajectory(
    schedule: Schedule,
    initial,
    samples: int,
    eps: float = 0.0,
    delta: float = 0.0,
    steps_per_segment: int = 200,
) -> list[tuple[float, float, float, float]]:
    """Bloch coordinates (t, x, y, z) at uniformly spaced times."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    psi = normalize(initial)
    if psi.shape[0] != 2:
        raise ValueError("bloch_trajectory requires a qubit state")
    T = schedule.total_duration
    times = np.linspace(0.0, T, samples)
    out = []
    t_prev = 0.0
    for t in times:
        if t > t_prev:
            U = propagate_interval(schedule, t_prev, t, eps, delta, steps_per_segment)
            psi = U @ psi
            t_prev = t
        x, y, z = bloch_coordinates(psi)
        out.append((float(t), x, y, z))
    return out


def write_trajectory_csv(path: str, trajectory) -> None:
    """Write a trajectory as CSV with header t,x,y,z (12 significant digits)."""
    with open(path, "w", newline="") as fh:
        fh.write("t,x,y,z\n")
        for t, x, y, z in trajectory:
            fh.write(f"{t:.12g},{x:.12g},{y:.12g},{z:.12g}\n")
