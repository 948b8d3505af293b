"""Bitstrings, shared keys, one-time pads and the counter-mode hash."""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .qsim import T_MATRIX, PauliOp, Qubit, computational_qubit, measure_qubit


_BIT_VALUES = frozenset((0, 1))


class Bits(tuple):
    """Immutable sequence of 0/1 values.

    ``Bits("0110")`` and ``Bits([0, 1, 1, 0])`` are equivalent.  ``+``
    concatenates, ``^`` XORs equal-length strings and slicing stays a
    ``Bits``.
    """

    __slots__ = ()

    def __new__(cls, bits: Iterable[int] | str = ()):
        if isinstance(bits, str):
            if set(bits) - {"0", "1"}:
                raise ValueError(f"not a bitstring: {bits!r}")
            return tuple.__new__(cls, (1 if ch == "1" else 0 for ch in bits))
        values = tuple(map(int, bits))
        if not _BIT_VALUES.issuperset(values):
            raise ValueError(f"bit values must be 0 or 1: {values}")
        return tuple.__new__(cls, values)

    @classmethod
    def random(cls, length: int, rng) -> "Bits":
        return tuple.__new__(cls, rng.integers(0, 2, size=length).tolist())

    @classmethod
    def zeros(cls, length: int) -> "Bits":
        return tuple.__new__(cls, (0,) * length)

    @classmethod
    def from_int(cls, value: int, width: int) -> "Bits":
        if value < 0 or value >> width:
            raise ValueError(f"{value} does not fit in {width} bits")
        return cls(format(value, f"0{width}b") if width else "")

    def to_int(self) -> int:
        return int(str(self), 2) if self else 0

    def __xor__(self, other: Sequence[int]) -> "Bits":
        if not isinstance(other, Bits):
            other = Bits(other)
        if len(self) != len(other):
            raise ValueError(f"XOR of bitstrings of different lengths ({len(self)} vs {len(other)})")
        return tuple.__new__(Bits, (a ^ b for a, b in zip(self, other)))

    def __add__(self, other: Sequence[int]) -> "Bits":
        return Bits(tuple(self) + tuple(other))

    def __getitem__(self, item):
        got = tuple.__getitem__(self, item)
        return tuple.__new__(Bits, got) if isinstance(item, slice) else got

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self)

    def __repr__(self) -> str:
        return f"Bits('{self}')"

    def chunks(self, size: int) -> list["Bits"]:
        if size <= 0 or len(self) % size:
            raise ValueError(f"cannot split {len(self)} bits into chunks of {size}")
        return [self[i:i + size] for i in range(0, len(self), size)]

    def to_bytes(self) -> bytes:
        """Length-prefixed serialisation: 4-byte big-endian bit count, then
        the bits packed most-significant first."""
        packed = np.packbits(np.array(self, dtype=np.uint8)).tobytes() if self else b""
        return len(self).to_bytes(4, "big") + packed

    @classmethod
    def from_bytes(cls, data: bytes) -> "Bits":
        if len(data) < 4:
            raise ValueError("truncated bitstring header")
        length = int.from_bytes(data[:4], "big")
        body = data[4:]
        if len(body) != (length + 7) // 8:
            raise ValueError(f"expected {(length + 7) // 8} payload bytes, got {len(body)}")
        bits = np.unpackbits(np.frombuffer(body, dtype=np.uint8))[:length]
        return tuple.__new__(cls, bits.tolist())

    def hamming(self, other: Sequence[int]) -> int:
        return sum(self ^ other)


def concat(parts: Iterable[Sequence[int]]) -> Bits:
    return Bits(itertools.chain.from_iterable(parts))


@dataclass(frozen=True)
class KeyRing:
    """Every pairwise secret of one protocol world (stand-in for QKD output)."""

    AB: Bits
    AC: Bits
    BC: Bits
    AU: tuple[Bits, ...]
    CU: tuple[Bits, ...]

    @property
    def t(self) -> int:
        return len(self.AU)

    @classmethod
    def random(cls, rng, t: int, *, ab: int, ac: int, bc: int, au: int, cu: int) -> "KeyRing":
        return cls(
            AB=Bits.random(ab, rng),
            AC=Bits.random(ac, rng),
            BC=Bits.random(bc, rng),
            AU=tuple(Bits.random(au, rng) for _ in range(t)),
            CU=tuple(Bits.random(cu, rng) for _ in range(t)),
        )


# -- classical pad and hash ---------------------------------------------------

def classical_otp(msg: Sequence[int], key: Sequence[int]) -> Bits:
    return Bits(msg) ^ key


def hash_H(data: Sequence[int], out_bits: int) -> Bits:
    """SHA-256 in counter mode, truncated to ``out_bits`` bits."""
    seed = Bits(data).to_bytes()
    blocks = []
    for counter in range((out_bits + 255) // 256):
        blocks.append(hashlib.sha256(seed + counter.to_bytes(4, "big")).digest())
    bits = np.unpackbits(np.frombuffer(b"".join(blocks), dtype=np.uint8))[:out_bits]
    return tuple.__new__(Bits, bits.tolist())


def derive_key(key: Sequence[int], nonce: Sequence[int], out_bits: int | None = None) -> Bits:
    """``H(key || nonce)``; output length defaults to ``len(key)``."""
    return hash_H(Bits(key) + nonce, len(key) if out_bits is None else out_bits)


def hash_vector_key(key: Sequence[int], nonces: Sequence[Sequence[int]]) -> Bits:
    if len(nonces) != 6:
        raise ValueError(f"expected 6 nonce components, got {len(nonces)}")
    return concat(derive_key(key, r) for r in nonces)


# -- quantum one-time pads ----------------------------------------------------

_X = PauliOp.X.matrix
_Z = PauliOp.Z.matrix
_I = PauliOp.I.matrix


def _pow(m: np.ndarray, bit: int) -> np.ndarray:
    return m if bit else _I


@lru_cache(maxsize=None)
def basic_pad_operator(k1: int, k2: int) -> np.ndarray:
    """``X^k1 Z^k2`` (Z acts first)."""
    op = _pow(_X, k1) @ _pow(_Z, k2)
    op.flags.writeable = False
    return op


@lru_cache(maxsize=None)
def improved_pad_operator(k1: int, k2: int, k3: int, k4: int) -> np.ndarray:
    """``X^k4 Z^k3 T X^k2 Z^k1`` for one 4-bit key block (rightmost first)."""
    op = _pow(_X, k4) @ _pow(_Z, k3) @ T_MATRIX @ _pow(_X, k2) @ _pow(_Z, k1)
    op.flags.writeable = False
    return op


@lru_cache(maxsize=None)
def _inverse(op_key: tuple, improved: bool) -> np.ndarray:
    op = improved_pad_operator(*op_key) if improved else basic_pad_operator(*op_key)
    inv = op.conj().T.copy()
    inv.flags.writeable = False
    return inv


def _apply_pad(qubits: Sequence[Qubit], key: Sequence[int], width: int, improved: bool, inverse: bool):
    if len(key) != width * len(qubits):
        raise ValueError(f"key of {len(key)} bits does not cover {len(qubits)} qubits at {width} bits each")
    build = improved_pad_operator if improved else basic_pad_operator
    for j, q in enumerate(qubits):
        block = tuple(key[width * j:width * (j + 1)])
        q.apply(_inverse(block, improved) if inverse else build(*block))
    return qubits


def qotp_basic_encrypt(qubits: Sequence[Qubit], key: Sequence[int]) -> Sequence[Qubit]:
    """Pauli pad with two key bits per qubit, applied in place."""
    return _apply_pad(qubits, key, 2, False, False)


def qotp_basic_decrypt(qubits: Sequence[Qubit], key: Sequence[int]) -> Sequence[Qubit]:
    return _apply_pad(qubits, key, 2, False, True)


def qotp_improved_encrypt(qubits: Sequence[Qubit], key: Sequence[int]) -> Sequence[Qubit]:
    """Pauli pad with the T mixer in the middle, four key bits per qubit."""
    return _apply_pad(qubits, key, 4, True, False)


def qotp_improved_decrypt(qubits: Sequence[Qubit], key: Sequence[int]) -> Sequence[Qubit]:
    return _apply_pad(qubits, key, 4, True, True)


# -- computational encoding ---------------------------------------------------

def encode_classical(bits: Sequence[int]) -> list[Qubit]:
    return [computational_qubit(b) for b in bits]


def decode_classical(qubits: Sequence[Qubit], rng=None) -> Bits:
    return Bits(measure_qubit(q, None, rng) for q in qubits)


# -- forgery analysis over single-qubit keys ----------------------------------

def _equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    return abs(np.vdot(a, b)) >= 1 - tol


def pauli_commutation_fraction(v: PauliOp, u: PauliOp) -> float:
    """Fraction of the 16 one-qubit keys K with ``E_K^dag V E_K |m> == U |m>``
    (up to phase) for both ``|0>`` and ``|1>``."""
    hits = 0
    basis = (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex))
    for key in itertools.product((0, 1), repeat=4):
        e = improved_pad_operator(*key)
        conj = e.conj().T @ v.matrix @ e
        if all(_equal_up_to_phase(conj @ m, u.matrix @ m) for m in basis):
            hits += 1
    return hits / 16


def mean_flip_probability(v: PauliOp | np.ndarray, improved: bool = True) -> float:
    """Average over all keys of the chance that ``V`` applied to a padded
    computational qubit flips the decrypted bit."""
    mat = v.matrix if isinstance(v, PauliOp) else np.asarray(v, dtype=complex)
    width = 4 if improved else 2
    build = improved_pad_operator if improved else basic_pad_operator
    total = 0.0
    keys = list(itertools.product((0, 1), repeat=width))
    for key in keys:
        e = build(*key)
        conj = e.conj().T @ mat @ e
        for bit in (0, 1):
            total += abs(conj[1 - bit, bit]) ** 2
    return total / (2 * len(keys))
