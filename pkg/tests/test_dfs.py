import math

import numpy as np
import pytest

from geogate import dfs
from geogate.noise import ErrorModel
from geogate.pulses import (
    GateSpec,
    PulseShape,
    Scheme,
    ShapeKind,
    build_schedule,
    propagate,
    target_unitary,
)
from geogate.qcore import gate_fidelity

SQUARE = PulseShape(ShapeKind.SQUARE, 1.0)


def test_encode_maps_to_single_excitation_states():
    zero_l, one_l = dfs.logical_basis_states()
    assert zero_l[dfs.IDX_10] == 1.0
    assert one_l[dfs.IDX_01] == 1.0
    with pytest.raises(ValueError):
        dfs.encode([1.0, 0.0, 0.0])


def test_logical_hamiltonian_matches_physical_restriction():
    h_l = dfs.LogicalHamiltonian(g=0.4, phi0=0.7)
    H4 = dfs.physical_exchange_hamiltonian(0.4, 0.7, eps=0.0, delta=0.0, omega_m=1.0)
    idx = [dfs.IDX_10, dfs.IDX_01]
    assert np.allclose(H4[np.ix_(idx, idx)], h_l.logical_matrix())
    # code space never couples to |00> or |11>
    assert np.max(np.abs(H4[[0, 3], :])) == 0.0


def test_collective_dephasing_is_logical_identity():
    H4 = dfs.physical_exchange_hamiltonian(0.0, 0.0, eps=0.0, delta=0.3, omega_m=1.0)
    idx = [dfs.IDX_10, dfs.IDX_01]
    block = H4[np.ix_(idx, idx)]
    assert np.allclose(block, block[0, 0] * np.eye(2))


def test_delta_immunity_is_exact():
    spec = GateSpec(math.pi / 4, 0.0, 0.0, Scheme.CORRECTED)
    base = dfs.run_logical_gate(spec, ErrorModel())
    for delta in (-0.2, -0.05, 0.1, 0.2):
        f = dfs.run_logical_gate(spec, ErrorModel(delta=delta))
        assert abs(f - base) < 1e-12


def test_logical_gate_equals_bare_gate_under_amplitude_error():
    spec = GateSpec(math.pi / 2, math.pi / 4, 0.0, Scheme.CORRECTED)
    eps = 0.1
    f_logical = dfs.run_logical_gate(spec, ErrorModel(eps=eps))
    sched = build_schedule(spec, SQUARE)
    f_bare = gate_fidelity(target_unitary(spec), propagate(sched, eps=eps))
    assert abs(f_logical - f_bare) < 1e-12


def test_no_leakage_from_code_space():
    spec = GateSpec(math.pi / 2, math.pi / 4, 0.0, Scheme.SINGLE_LOOP)
    sched = build_schedule(spec, SQUARE)
    U = dfs.propagate_logical(sched, eps=0.07, delta=0.05)
    assert dfs.leakage_norm(U) < 1e-12


def test_shaped_envelope_gives_same_ideal_gate():
    spec = GateSpec(math.pi / 8, 0.0, 0.0, Scheme.CORRECTED)
    rc = PulseShape(ShapeKind.RAISED_COSINE, 1.0)
    f = dfs.run_logical_gate(spec, ErrorModel(), shape=rc)
    assert f > 1.0 - 1e-9
