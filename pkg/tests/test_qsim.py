import copy
import math
import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbmbs.qsim import (
    BELL_OUTCOMES,
    DEFAULT_BASIS,
    PLUS_MINUS,
    T_MATRIX,
    BellOutcome,
    EncodingBasis,
    PauliOp,
    QuantumError,
    Qubit,
    StateVector,
    apply_pauli,
    apply_unitary,
    basis_probabilities,
    basis_state,
    bell_measure,
    bell_pair,
    bell_probabilities,
    computational_qubit,
    epr_pair,
    fidelity,
    measure_bell_pair,
    measure_computational,
    measure_in_basis,
    measure_qubit,
    prepare_bell,
    prepare_epr,
    prepare_message_qubit_improved,
    prepare_message_qubit_original,
    states_equal_up_to_phase,
    teleport_correction,
)

from conftest import random_state, seeds

S = 1 / math.sqrt(2)


def test_statevector_rejects_bad_input():
    with pytest.raises(QuantumError):
        StateVector([1, 0, 0])
    with pytest.raises(QuantumError):
        StateVector([1, 1])


def test_bell_vectors_match_convention():
    expected = {
        (0, 0): [S, 0, 0, S],
        (0, 1): [0, S, S, 0],
        (1, 0): [S, 0, 0, -S],
        (1, 1): [0, S, -S, 0],
    }
    for kl, vec in expected.items():
        assert np.allclose(prepare_bell(BellOutcome(*kl)).amplitudes, vec)
    assert np.allclose(prepare_epr().amplitudes, expected[(0, 0)])


def test_corrections():
    assert [teleport_correction(o) for o in BELL_OUTCOMES] == [PauliOp.I, PauliOp.X, PauliOp.Z, PauliOp.Y]


def test_t_matrix_values():
    assert np.allclose(T_MATRIX @ T_MATRIX, -np.eye(2))
    assert np.allclose(T_MATRIX @ [1, 0], [1j / math.sqrt(3), (1 + 1j) / math.sqrt(3)])
    assert np.allclose(T_MATRIX.conj().T @ T_MATRIX, np.eye(2))


def test_qubit_zero_is_most_significant():
    state = basis_state([1, 0])
    assert np.allclose(state.amplitudes, [0, 0, 1, 0])
    flipped = apply_pauli(state, 1, PauliOp.X)
    assert np.allclose(flipped.amplitudes, [0, 0, 0, 1])


def test_encoding_basis_vectors():
    v0, v1 = DEFAULT_BASIS.vectors
    b, c = math.cos(math.pi / 8), math.sin(math.pi / 8)
    assert np.allclose(v1, [b, c]) and np.allclose(v0, [c, -b])
    assert abs(np.vdot(v0, v1)) < 1e-12
    assert PLUS_MINUS.is_balanced and not DEFAULT_BASIS.is_balanced
    with pytest.raises(QuantumError):
        EncodingBasis.from_b(1.0)
    assert np.allclose(prepare_message_qubit_original(1).amplitudes, [S, S])
    assert np.allclose(prepare_message_qubit_original(0).amplitudes, [S, -S])


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_teleportation_every_branch(seed):
    rng = np.random.default_rng(seed)
    psi = random_state(rng)
    for outcome in BELL_OUTCOMES:
        got, rest = bell_measure(psi.tensor(prepare_epr()), 0, 1, force=outcome)
        rest = apply_pauli(rest, 0, teleport_correction(got))
        assert fidelity(rest, psi) >= 1 - 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(0, 2))
def test_unitaries_preserve_norm(seed, qubit):
    rng = np.random.default_rng(seed)
    psi = random_state(rng, 3)
    out = apply_unitary(psi, qubit, T_MATRIX)
    assert abs(out.norm() - 1) < 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_measurement_probabilities_sum_to_one(seed):
    rng = np.random.default_rng(seed)
    psi = random_state(rng, 3)
    assert math.isclose(sum(bell_probabilities(psi, 0, 2)), 1, abs_tol=1e-9)
    assert math.isclose(sum(basis_probabilities(psi, 1, DEFAULT_BASIS)), 1, abs_tol=1e-9)


def test_measurement_collapse_and_removal(rng):
    psi = random_state(rng, 2)
    bit, post = measure_computational(psi, 0, rng)
    assert post.num_qubits == 1
    bit2, kept = measure_in_basis(psi, 1, DEFAULT_BASIS, rng, remove=False)
    assert kept.num_qubits == 2
    again, _ = measure_in_basis(kept, 1, DEFAULT_BASIS, rng)
    assert again == bit2


def test_forcing_impossible_branch_fails():
    with pytest.raises(QuantumError):
        measure_computational(basis_state([0]), 0, force=1)
    with pytest.raises(QuantumError):
        bell_measure(prepare_epr(), 0, 1, force=BellOutcome(1, 1))


def test_bell_measure_keep_leaves_bell_state(rng):
    psi = random_state(rng, 3)
    outcome, post = bell_measure(psi, 0, 2, rng, remove=False)
    assert bell_probabilities(post, 0, 2)[2 * outcome.k + outcome.l] == pytest.approx(1)


def test_qubits_cannot_be_cloned():
    q = computational_qubit(1)
    for clone in (copy.copy, copy.deepcopy, pickle.dumps):
        with pytest.raises(TypeError):
            clone(q)


def test_handles_track_entanglement(rng):
    a, b = epr_pair()
    with pytest.raises(QuantumError):
        a.state()
    bit = measure_qubit(a, None, rng)
    assert not a.alive
    assert states_equal_up_to_phase(b.state(), basis_state([bit]))
    with pytest.raises(QuantumError):
        measure_qubit(a, None, rng)


def test_handle_teleportation(rng):
    for outcome in BELL_OUTCOMES:
        psi = random_state(rng)
        m = Qubit(psi)
        a, c = epr_pair()
        got = measure_bell_pair(m, a, rng, force=outcome)
        assert got == outcome
        c.apply_pauli(teleport_correction(got))
        assert fidelity(c.state(), psi) >= 1 - 1e-9


def test_measure_bell_pair_keep(rng):
    m, a = bell_pair(BellOutcome(1, 0))
    assert measure_bell_pair(m, a, rng, keep=True) == BellOutcome(1, 0)
    assert measure_bell_pair(m, a, rng) == BellOutcome(1, 0)


@pytest.mark.parametrize("bit", [0, 1])
def test_improved_message_reads_back(bit, rng):
    state = prepare_message_qubit_improved(bit, DEFAULT_BASIS)
    assert basis_probabilities(state, 0, DEFAULT_BASIS)[bit] == pytest.approx(1)
