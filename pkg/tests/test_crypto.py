import hashlib
import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbmbs.crypto import (
    Bits,
    KeyRing,
    basic_pad_operator,
    classical_otp,
    concat,
    decode_classical,
    derive_key,
    encode_classical,
    hash_H,
    hash_vector_key,
    improved_pad_operator,
    mean_flip_probability,
    pauli_commutation_fraction,
    qotp_basic_decrypt,
    qotp_basic_encrypt,
    qotp_improved_decrypt,
    qotp_improved_encrypt,
)
from qbmbs.qsim import T_MATRIX, PauliOp, Qubit, fidelity

from conftest import bit_lists, random_state, seeds


# -- Bits ---------------------------------------------------------------------

def test_bits_construction_and_views():
    b = Bits("0110")
    assert b == Bits([0, 1, 1, 0])
    assert str(b) == "0110" and repr(b) == "Bits('0110')"
    assert isinstance(b[1:], Bits) and b[1] == 1
    assert b + "11" == Bits("011011")
    assert Bits.from_int(5, 4) == Bits("0101") and Bits("0101").to_int() == 5
    assert Bits("101101").chunks(3) == [Bits("101"), Bits("101")]
    assert Bits("1100").hamming("1010") == 2
    assert concat([Bits("1"), Bits("00")]) == Bits("100")


@pytest.mark.parametrize("bad", ["012", [0, 2], [-1]])
def test_bits_rejects_non_bits(bad):
    with pytest.raises(ValueError):
        Bits(bad)


def test_xor_length_mismatch():
    with pytest.raises(ValueError):
        Bits("01") ^ Bits("011")
    with pytest.raises(ValueError):
        Bits.from_int(16, 4)


def test_bits_serialisation_layout():
    assert Bits("101").to_bytes() == b"\x00\x00\x00\x03\xa0"
    assert Bits().to_bytes() == b"\x00\x00\x00\x00"
    with pytest.raises(ValueError):
        Bits.from_bytes(b"\x00\x00\x00\x09\x00")


@given(bit_lists)
def test_bits_round_trip(bits):
    b = Bits(bits)
    assert Bits.from_bytes(b.to_bytes()) == b
    assert Bits(str(b)) == b


@given(bit_lists, seeds)
def test_otp_involution(bits, seed):
    key = Bits.random(len(bits), np.random.default_rng(seed))
    assert classical_otp(classical_otp(bits, key), key) == Bits(bits)


# -- hashing ------------------------------------------------------------------

def test_hash_counter_mode_oracle():
    data = Bits("1011")
    seed = data.to_bytes()
    stream = hashlib.sha256(seed + b"\x00\x00\x00\x00").digest() + hashlib.sha256(seed + b"\x00\x00\x00\x01").digest()
    expected = Bits(format(int.from_bytes(stream, "big"), "0512b")[:300])
    assert hash_H(data, 300) == expected
    # frozen value
    assert hash_H(data, 32) == Bits("00011001001100110111011100111111")


def test_derive_key_properties(rng):
    key = Bits.random(32, rng)
    n1, n2 = Bits.random(32, rng), Bits.random(32, rng)
    assert len(derive_key(key, n1)) == 32
    assert derive_key(key, n1) == hash_H(key + n1, 32)
    assert derive_key(key, n1) != derive_key(key, n2)
    assert len(derive_key(key, n1, 100)) == 100
    assert len(hash_vector_key(key, [n1] * 6)) == 6 * 32
    with pytest.raises(ValueError):
        hash_vector_key(key, [n1] * 5)


def test_keyring_shapes(rng):
    ring = KeyRing.random(rng, 3, ab=4, ac=5, bc=6, au=7, cu=8)
    assert ring.t == 3
    assert [len(k) for k in (ring.AB, ring.AC, ring.BC)] == [4, 5, 6]
    assert all(len(k) == 7 for k in ring.AU) and all(len(k) == 8 for k in ring.CU)


# -- quantum pads --------------------------------------------------------------

def test_pad_operators():
    X, Z = PauliOp.X.matrix, PauliOp.Z.matrix
    assert np.allclose(basic_pad_operator(1, 1), X @ Z)
    assert np.allclose(improved_pad_operator(1, 1, 1, 1), X @ Z @ T_MATRIX @ X @ Z)
    assert np.allclose(improved_pad_operator(0, 0, 0, 0), T_MATRIX)
    with pytest.raises(ValueError):
        basic_pad_operator(0, 0)[0, 0] = 5


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 4), st.booleans())
def test_qotp_round_trip(seed, count, improved):
    rng = np.random.default_rng(seed)
    states = [random_state(rng) for _ in range(count)]
    qubits = [Qubit(s) for s in states]
    width = 4 if improved else 2
    key = Bits.random(width * count, rng)
    enc, dec = (qotp_improved_encrypt, qotp_improved_decrypt) if improved else (qotp_basic_encrypt, qotp_basic_decrypt)
    dec(enc(qubits, key), key)
    for q, s in zip(qubits, states):
        assert fidelity(q.state(), s) >= 1 - 1e-9


def test_qotp_key_length_checked(rng):
    with pytest.raises(ValueError):
        qotp_basic_encrypt([Qubit()], Bits("1"))


@given(bit_lists)
def test_classical_encoding(bits):
    assert decode_classical(encode_classical(bits)) == Bits(bits)


def test_basic_pad_leaves_pauli_forgery_open():
    # with Pauli-only pads conjugation gives the same Pauli up to sign for every key
    for v in (PauliOp.X, PauliOp.Y, PauliOp.Z):
        assert pauli_commutation_fraction_basic(v) == 1.0


def pauli_commutation_fraction_basic(v):
    hits = 0
    for key in itertools.product((0, 1), repeat=2):
        e = basic_pad_operator(*key)
        conj = e.conj().T @ v.matrix @ e
        hits += np.allclose(conj, v.matrix) or np.allclose(conj, -v.matrix)
    return hits / 4


def test_no_key_commutes_under_improved_pad():
    for v, u in itertools.product(PauliOp, repeat=2):
        if v is PauliOp.I:
            continue
        assert pauli_commutation_fraction(v, u) == 0.0


def test_mean_flip_probability_oracle():
    # T^dag X T = -(1/3) X - (2/3) Y + (2/3) Z up to global sign; the outer
    # Pauli pads only flip signs, so the off-diagonal weight is (1/9 + 4/9)
    assert mean_flip_probability(PauliOp.X) == pytest.approx(float(Fraction(5, 9)))
    assert mean_flip_probability(PauliOp.X, improved=False) == pytest.approx(1.0)
    assert mean_flip_probability(PauliOp.Z, improved=False) == pytest.approx(0.0)
