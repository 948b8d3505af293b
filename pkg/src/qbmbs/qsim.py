"""Small statevector simulator covering what the signature protocols need.

Two layers live here:

* value functions on :class:`StateVector` (``apply_pauli``, ``bell_measure``,
  ``measure_in_basis`` ...), each returning a new state;
* :class:`Qubit` handles, which let parties hold individual qubits of a
  shared entangled system and pass them around without copying.

Qubit 0 is the most significant tensor factor, so ``|psi>_M (x) |beta00>_AC``
puts M at index 0, A at 1 and C at 2.  Measured qubits are factored out of
the register unless ``remove=False`` is requested.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

NORM_TOL = 1e-9
BASIS_TOL = 1e-12
_SQRT1_2 = 1 / math.sqrt(2)


class QuantumError(ValueError):
    """Invalid register access or impossible measurement branch."""


class StateVector:
    """Normalised amplitude vector over ``num_qubits`` qubits."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, *, check: bool = True):
        amps = np.asarray(amplitudes, dtype=complex)
        if check:
            if amps.ndim != 1 or len(amps) == 0 or len(amps) & (len(amps) - 1):
                raise QuantumError(f"amplitude count {amps.shape} is not a power of two")
            norm = float(np.vdot(amps, amps).real)
            if abs(norm - 1.0) > NORM_TOL:
                raise QuantumError(f"state is not normalised (norm^2={norm!r})")
        self.amplitudes = amps

    @property
    def num_qubits(self) -> int:
        return len(self.amplitudes).bit_length() - 1

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tensor(self, other: "StateVector") -> "StateVector":
        return StateVector(np.kron(self.amplitudes, other.amplitudes), check=False)

    def __repr__(self) -> str:
        return f"StateVector({np.round(self.amplitudes, 6).tolist()})"


class BellOutcome(NamedTuple):
    """Bell-measurement result ``beta_kl``, written as the two bits ``kl``."""

    k: int
    l: int

    @property
    def bits(self) -> tuple[int, int]:
        return (self.k, self.l)

    def __str__(self) -> str:
        return f"{self.k}{self.l}"


BELL_OUTCOMES = tuple(BellOutcome(k, l) for k in (0, 1) for l in (0, 1))

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class PauliOp(enum.Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"

    @property
    def matrix(self) -> np.ndarray:
        return _PAULI_MATRICES[self]


_PAULI_MATRICES = {PauliOp.I: _I, PauliOp.X: _X, PauliOp.Y: _Y, PauliOp.Z: _Z}

# fixed non-Clifford-ish mixer used by the improved one-time pad; T @ T == -I
T_MATRIX = (1j / math.sqrt(3)) * (_X - _Y + _Z)

# Bell vectors in the |q1 q2> basis, indexed like BELL_OUTCOMES
_BELL_VECTORS = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [1, 0, 0, -1],
        [0, 1, -1, 0],
    ],
    dtype=complex,
) * _SQRT1_2


@dataclass(frozen=True)
class EncodingBasis:
    """Real orthonormal qubit basis ``{b|0>+c|1>, c|0>-b|1>}``.

    Bit 1 is read when the qubit projects onto ``b|0>+c|1>``, bit 0 for
    ``c|0>-b|1>``.  ``b == c`` is allowed here (it is the plus/minus basis
    the original scheme measures in); protocols that need an unbalanced
    basis check :attr:`is_balanced` themselves.
    """

    b: float
    c: float

    def __post_init__(self):
        if abs(self.b * self.b + self.c * self.c - 1.0) > BASIS_TOL:
            raise QuantumError(f"b^2 + c^2 must be 1, got b={self.b!r}, c={self.c!r}")
        if self.b == 0 or self.c == 0:
            raise QuantumError("b and c must both be non-zero")

    @classmethod
    def from_b(cls, b: float) -> "EncodingBasis":
        if not 0 < b < 1:
            raise QuantumError(f"b must lie strictly between 0 and 1, got {b!r}")
        return cls(b, math.sqrt(1 - b * b))

    @property
    def is_balanced(self) -> bool:
        return abs(self.b - self.c) <= BASIS_TOL

    @property
    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        """``(v0, v1)``: the basis vectors read as bit 0 and bit 1."""
        return (
            np.array([self.c, -self.b], dtype=complex),
            np.array([self.b, self.c], dtype=complex),
        )


PLUS_MINUS = EncodingBasis(_SQRT1_2, _SQRT1_2)
DEFAULT_BASIS = EncodingBasis(math.cos(math.pi / 8), math.sin(math.pi / 8))
_COMPUTATIONAL = (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex))


# -- preparation --------------------------------------------------------------

def basis_state(bits: Sequence[int]) -> StateVector:
    amps = np.zeros(1 << len(bits), dtype=complex)
    amps[int("".join(str(b) for b in bits) or "0", 2)] = 1
    return StateVector(amps, check=False)


def prepare_epr() -> StateVector:
    return StateVector(_BELL_VECTORS[0].copy(), check=False)


def prepare_bell(outcome: BellOutcome) -> StateVector:
    return StateVector(_BELL_VECTORS[_bell_index(outcome)].copy(), check=False)


def prepare_message_qubit_original(bit: int) -> StateVector:
    _check_bit(bit)
    return StateVector(PLUS_MINUS.vectors[bit].copy(), check=False)


def prepare_message_qubit_improved(bit: int, basis: EncodingBasis) -> StateVector:
    _check_bit(bit)
    return StateVector(basis.vectors[bit].copy(), check=False)


# -- gates --------------------------------------------------------------------

def apply_unitary(state: StateVector, qubit: int, matrix: np.ndarray) -> StateVector:
    n = state.num_qubits
    _check_index(qubit, n)
    if n == 1:
        return StateVector(matrix @ state.amplitudes, check=False)
    psi = state.amplitudes.reshape(1 << qubit, 2, 1 << (n - qubit - 1))
    return StateVector(np.matmul(matrix, psi).reshape(-1), check=False)


def apply_pauli(state: StateVector, qubit: int, op: PauliOp) -> StateVector:
    if op is PauliOp.I:
        _check_index(qubit, state.num_qubits)
        return state
    return apply_unitary(state, qubit, op.matrix)


def apply_T(state: StateVector, qubit: int) -> StateVector:
    return apply_unitary(state, qubit, T_MATRIX)


def teleport_correction(outcome: BellOutcome) -> PauliOp:
    """Pauli that returns the teleported qubit to the sender's state."""
    return _CORRECTIONS[BellOutcome(*outcome)]


_CORRECTIONS = {
    BellOutcome(0, 0): PauliOp.I,
    BellOutcome(0, 1): PauliOp.X,
    BellOutcome(1, 0): PauliOp.Z,
    BellOutcome(1, 1): PauliOp.Y,
}


def states_equal_up_to_phase(a: StateVector, b: StateVector, tol: float = 1e-9) -> bool:
    if a.num_qubits != b.num_qubits:
        raise QuantumError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return abs(np.vdot(a.amplitudes, b.amplitudes)) >= 1 - tol


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.num_qubits != b.num_qubits:
        raise QuantumError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


# -- measurement --------------------------------------------------------------

def _sample(probs: Sequence[float], rng, force) -> int:
    if force is not None:
        if probs[force] <= NORM_TOL:
            raise QuantumError(f"forced branch {force} has zero probability")
        return force
    live = [i for i, p in enumerate(probs) if p > NORM_TOL]
    if len(live) == 1:
        return live[0]
    u = rng.random() * sum(probs[i] for i in live)
    acc = 0.0
    for i in live:
        acc += probs[i]
        if u < acc:
            return i
    return live[-1]


def _measure_single(state: StateVector, qubit: int, vectors, rng, force, remove):
    n = state.num_qubits
    _check_index(qubit, n)
    psi = state.amplitudes.reshape(1 << qubit, 2, 1 << (n - qubit - 1))
    branches = [v[0].conjugate() * psi[:, 0, :] + v[1].conjugate() * psi[:, 1, :] for v in vectors]
    probs = [float(np.vdot(br, br).real) for br in branches]
    bit = _sample(probs, rng, force)
    reduced = branches[bit] / math.sqrt(probs[bit])
    if remove:
        return bit, StateVector(reduced.reshape(-1), check=False)
    kept = reduced[:, None, :] * vectors[bit][None, :, None]
    return bit, StateVector(kept.reshape(-1), check=False)


def measure_in_basis(state, qubit, basis: EncodingBasis, rng=None, *, force=None, remove=True):
    """Measure ``qubit`` in ``basis``; returns ``(bit, post_state)``."""
    return _measure_single(state, qubit, basis.vectors, rng, force, remove)


def measure_computational(state, qubit, rng=None, *, force=None, remove=True):
    return _measure_single(state, qubit, _COMPUTATIONAL, rng, force, remove)


def bell_measure(state, q1, q2, rng=None, *, force=None, remove=True):
    """Project qubits ``(q1, q2)`` onto the Bell basis.

    Returns ``(BellOutcome, post_state)``.  With ``remove`` the two qubits are
    dropped and the remaining ones keep their relative order; otherwise the
    pair is left in the observed Bell state at its original positions.
    """
    n = state.num_qubits
    _check_index(q1, n)
    _check_index(q2, n)
    if q1 == q2:
        raise QuantumError("Bell measurement needs two distinct qubits")
    psi = np.moveaxis(state.amplitudes.reshape((2,) * n), (q1, q2), (0, 1)).reshape(4, -1)
    branches = _BELL_VECTORS.conj() @ psi
    probs = [float(np.vdot(br, br).real) for br in branches]
    idx = _sample(probs, rng, None if force is None else _bell_index(force))
    reduced = branches[idx] / math.sqrt(probs[idx])
    outcome = BELL_OUTCOMES[idx]
    if remove:
        return outcome, StateVector(reduced, check=False)
    full = np.outer(_BELL_VECTORS[idx], reduced).reshape((2,) * n)
    full = np.moveaxis(full, (0, 1), (q1, q2))
    return outcome, StateVector(full.reshape(-1), check=False)


def bell_probabilities(state: StateVector, q1: int, q2: int) -> list[float]:
    n = state.num_qubits
    psi = np.moveaxis(state.amplitudes.reshape((2,) * n), (q1, q2), (0, 1)).reshape(4, -1)
    branches = _BELL_VECTORS.conj() @ psi
    return [float(np.vdot(br, br).real) for br in branches]


def basis_probabilities(state: StateVector, qubit: int, basis: EncodingBasis | None = None) -> list[float]:
    vectors = _COMPUTATIONAL if basis is None else basis.vectors
    n = state.num_qubits
    psi = state.amplitudes.reshape(1 << qubit, 2, 1 << (n - qubit - 1))
    out = []
    for v in vectors:
        br = v[0].conjugate() * psi[:, 0, :] + v[1].conjugate() * psi[:, 1, :]
        out.append(float(np.vdot(br, br).real))
    return out


def _bell_index(outcome) -> int:
    k, l = outcome
    _check_bit(k)
    _check_bit(l)
    return 2 * k + l


def _check_bit(bit) -> None:
    if bit not in (0, 1):
        raise QuantumError(f"expected a bit, got {bit!r}")


def _check_index(qubit: int, n: int) -> None:
    if not 0 <= qubit < n:
        raise QuantumError(f"qubit index {qubit} out of range for {n} qubits")


# -- qubit handles --------------------------------------------------------------

class _System:
    __slots__ = ("state", "members")

    def __init__(self, state: StateVector, members: list["Qubit"]):
        self.state = state
        self.members = members


class Qubit:
    """Handle to one qubit of a (possibly entangled) system.

    Handles cannot be copied; passing one to another party is the only way
    to move quantum information.  A measured qubit is released unless the
    measurement asked to keep it, in which case it becomes a fresh
    single-qubit system in the observed eigenstate.
    """

    __slots__ = ("_sys",)

    def __init__(self, state: StateVector | Sequence[complex] | None = None):
        if state is None:
            state = basis_state([0])
        elif not isinstance(state, StateVector):
            state = StateVector(state)
        if state.num_qubits != 1:
            raise QuantumError("a Qubit is created from a single-qubit state")
        self._sys = _System(state, [self])

    def __copy__(self):
        raise TypeError("qubits cannot be cloned")

    __deepcopy__ = __copy__

    def __reduce__(self):
        raise TypeError("qubits cannot be cloned")

    @property
    def alive(self) -> bool:
        return self._sys is not None

    @property
    def index(self) -> int:
        return self._live().members.index(self)

    def _live(self) -> _System:
        if self._sys is None:
            raise QuantumError("qubit was consumed by a measurement")
        return self._sys

    def apply(self, matrix: np.ndarray) -> "Qubit":
        sys = self._live()
        if len(sys.members) == 1:
            sys.state = StateVector(matrix @ sys.state.amplitudes, check=False)
        else:
            sys.state = apply_unitary(sys.state, sys.members.index(self), matrix)
        return self

    def apply_pauli(self, op: PauliOp) -> "Qubit":
        if op is not PauliOp.I:
            self.apply(op.matrix)
        return self

    def state(self) -> StateVector:
        """State of this qubit; only defined when it is not entangled."""
        sys = self._live()
        if len(sys.members) != 1:
            raise QuantumError("qubit is part of a multi-qubit system")
        return sys.state

    def system_state(self) -> tuple[StateVector, list["Qubit"]]:
        sys = self._live()
        return sys.state, list(sys.members)


def qubit_pair(state: StateVector) -> tuple[Qubit, Qubit]:
    if state.num_qubits != 2:
        raise QuantumError("expected a two-qubit state")
    a, b = Qubit.__new__(Qubit), Qubit.__new__(Qubit)
    sys = _System(state, [a, b])
    a._sys = b._sys = sys
    return a, b


def epr_pair() -> tuple[Qubit, Qubit]:
    return qubit_pair(prepare_epr())


def bell_pair(outcome: BellOutcome) -> tuple[Qubit, Qubit]:
    return qubit_pair(prepare_bell(outcome))


def computational_qubit(bit: int) -> Qubit:
    _check_bit(bit)
    q = Qubit.__new__(Qubit)
    q._sys = _System(StateVector(_COMPUTATIONAL[bit].copy(), check=False), [q])
    return q


def _merge(a: Qubit, b: Qubit) -> _System:
    sa, sb = a._live(), b._live()
    if sa is sb:
        return sa
    sa.state = sa.state.tensor(sb.state)
    for q in sb.members:
        q._sys = sa
    sa.members.extend(sb.members)
    sb.members = []
    return sa


def _detach(q: Qubit, sys: _System, keep: bool, vector) -> None:
    sys.members.remove(q)
    if keep:
        q._sys = _System(StateVector(vector.copy(), check=False), [q])
    else:
        q._sys = None


@lru_cache(maxsize=None)
def _basis_tables(basis: EncodingBasis | None):
    vectors = _COMPUTATIONAL if basis is None else basis.vectors
    conj = tuple(tuple(complex(x).conjugate() for x in v) for v in vectors)
    return vectors, conj


def _measure_handle(q: Qubit, basis, rng, force, keep) -> int:
    sys = q._live()
    vectors, conj = _basis_tables(basis)
    if len(sys.members) == 1:
        a0, a1 = sys.state.amplitudes.tolist()
        probs = [abs(v0 * a0 + v1 * a1) ** 2 for v0, v1 in conj]
        bit = _sample(probs, rng, force)
        sys.members = []
        q._sys = _System(StateVector(vectors[bit].copy(), check=False), [q]) if keep else None
        return bit
    bit, post = _measure_single(sys.state, sys.members.index(q), vectors, rng, force, True)
    sys.state = post
    _detach(q, sys, keep, vectors[bit])
    return bit


def measure_qubit(q: Qubit, basis: EncodingBasis | None = None, rng=None, *, force=None, keep=False) -> int:
    """Measure one handle; ``basis=None`` means the computational basis."""
    return _measure_handle(q, basis, rng, force, keep)


def measure_bell_pair(q1: Qubit, q2: Qubit, rng=None, *, force=None, keep=False) -> BellOutcome:
    """Bell-measure two handles, merging their systems first if needed."""
    if q1 is q2:
        raise QuantumError("Bell measurement needs two distinct qubits")
    sys = _merge(q1, q2)
    i1, i2 = sys.members.index(q1), sys.members.index(q2)
    outcome, post = bell_measure(sys.state, i1, i2, rng, force=force, remove=True)
    sys.state = post
    sys.members = [q for q in sys.members if q is not q1 and q is not q2]
    if keep:
        pair = _System(prepare_bell(outcome), [q1, q2])
        q1._sys = q2._sys = pair
    else:
        q1._sys = q2._sys = None
    return outcome
