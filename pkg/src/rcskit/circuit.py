"""Small quantum circuits with two independent amplitude routes.

Conventions: qubit 0 is the most significant bit, so basis index
``int(bitstring, 2)`` addresses the flat statevector directly.  A gate on
``targets`` uses ``targets[0]`` as the most significant bit of its own
matrix index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError, ValidationError
from .haar import stream_rng
from .linalg import (
    UNITARY_TOLERANCE,
    UnitaryMatrix,
    matrix_from_jsonable,
    matrix_to_jsonable,
    standard_qr,
)
from .poly import GaussianRational, Poly, RationalFn, simplify

FEYNMAN_MAX_QUBITS = 12
FEYNMAN_MAX_GATES = 8


@dataclass(frozen=True)
class Gate:
    """Unitary acting on an ordered tuple of distinct qubits."""

    targets: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "targets", targets)
        if not targets:
            raise ValidationError("gate needs at least one target qubit")
        if len(set(targets)) != len(targets):
            raise ValidationError(f"duplicate gate targets {targets}")
        if any(t < 0 for t in targets):
            raise ValidationError(f"negative gate target in {targets}")
        raw = self.matrix
        if isinstance(raw, UnitaryMatrix):
            raw = raw.matrix
        matrix = np.asarray(raw, dtype=complex)
        object.__setattr__(self, "matrix", matrix)
        dim = 2 ** len(targets)
        if matrix.shape != (dim, dim):
            raise ValidationError(
                f"gate on {len(targets)} qubits needs a {dim}x{dim} matrix, "
                f"got {matrix.shape}"
            )
        defect = np.max(np.abs(matrix.conj().T @ matrix - np.eye(dim)))
        if defect > UNITARY_TOLERANCE:
            raise ValidationError(f"gate matrix is not unitary (defect {defect:.3e})")

    @property
    def arity(self) -> int:
        return len(self.targets)


@dataclass(frozen=True)
class Circuit:
    """Gates applied in list order to the all-zeros input state."""

    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_qubits < 1:
            raise ValidationError("circuit needs at least one qubit")
        for i, gate in enumerate(self.gates):
            if max(gate.targets) >= self.n_qubits:
                raise ValidationError(
                    f"gate {i} targets {gate.targets} exceed {self.n_qubits} qubits"
                )

    @property
    def n_gates(self) -> int:
        return len(self.gates)


def _check_bitstring(bitstring: str, n_qubits: int) -> tuple[int, ...]:
    if len(bitstring) != n_qubits or set(bitstring) - {"0", "1"}:
        raise ValidationError(
            f"expected a {n_qubits}-character bitstring, got {bitstring!r}"
        )
    return tuple(int(c) for c in bitstring)


def apply_gate(state: np.ndarray, n_qubits: int, gate: Gate) -> np.ndarray:
    k = gate.arity
    psi = state.reshape((2,) * n_qubits)
    psi = np.moveaxis(psi, gate.targets, range(k))
    psi = gate.matrix @ psi.reshape(2**k, -1)
    psi = np.moveaxis(psi.reshape((2,) * n_qubits), range(k), gate.targets)
    return psi.reshape(-1)


def simulate(circuit: Circuit) -> np.ndarray:
    """Full statevector after the whole circuit, starting from |0...0>."""
    state = np.zeros(2**circuit.n_qubits, dtype=complex)
    state[0] = 1.0
    for gate in circuit.gates:
        state = apply_gate(state, circuit.n_qubits, gate)
    return state


def amplitude(circuit: Circuit, bitstring: str) -> complex:
    bits = _check_bitstring(bitstring, circuit.n_qubits)
    index = int("".join(map(str, bits)), 2)
    return complex(simulate(circuit)[index])


def probability(circuit: Circuit, bitstring: str) -> float:
    return abs(amplitude(circuit, bitstring)) ** 2


def output_distribution(circuit: Circuit) -> np.ndarray:
    state = simulate(circuit)
    return np.abs(state) ** 2


def feynman_amplitude(circuit: Circuit, bitstring: str) -> complex:
    """Path-sum amplitude, branching only over each gate's target bits.

    Independent of `simulate`: no statevector is ever materialized.  The
    recursion walks gates from last to first; cost grows with
    4**n_gates, hence the hard limits.
    """
    if circuit.n_qubits > FEYNMAN_MAX_QUBITS:
        raise ResourceLimitError(
            f"path sum limited to {FEYNMAN_MAX_QUBITS} qubits, "
            f"got {circuit.n_qubits}"
        )
    if circuit.n_gates > FEYNMAN_MAX_GATES:
        raise ResourceLimitError(
            f"path sum limited to {FEYNMAN_MAX_GATES} gates, got {circuit.n_gates}"
        )
    bits = _check_bitstring(bitstring, circuit.n_qubits)

    def walk(bits: tuple[int, ...], depth: int) -> complex:
        if depth == 0:
            return 1.0 + 0.0j if not any(bits) else 0.0 + 0.0j
        gate = circuit.gates[depth - 1]
        k = gate.arity
        out_index = 0
        for t in gate.targets:
            out_index = (out_index << 1) | bits[t]
        total = 0.0 + 0.0j
        for in_index in range(2**k):
            coeff = gate.matrix[out_index, in_index]
            if coeff == 0.0:
                continue
            prev = list(bits)
            for pos, t in enumerate(gate.targets):
                prev[t] = (in_index >> (k - 1 - pos)) & 1
            total += coeff * walk(tuple(prev), depth - 1)
        return total

    return complex(walk(bits, circuit.n_gates))


# -- random circuits -----------------------------------------------------------


def brickwork_circuit(n_qubits: int, n_gates: int, seed: int) -> Circuit:
    """Nearest-neighbour random circuit; gate g draws from stream g of `seed`.

    Two-qubit Haar gates sweep the adjacent pairs cyclically; a one-qubit
    circuit degenerates to a stack of single-qubit Haar gates.
    """
    if n_qubits < 1 or n_gates < 1:
        raise ValidationError("need at least one qubit and one gate")
    gates = []
    for g in range(n_gates):
        rng = stream_rng(seed, g)
        if n_qubits == 1:
            targets: tuple[int, ...] = (0,)
        else:
            left = g % (n_qubits - 1)
            targets = (left, left + 1)
        dim = 2 ** len(targets)
        x = rng.standard_normal((2, dim, dim))
        q, _ = standard_qr(x[0] + 1j * x[1])
        gates.append(Gate(targets, q.matrix))
    return Circuit(n_qubits, tuple(gates))


# -- scrambled (theta-deformed) circuits ----------------------------------------


@dataclass(frozen=True)
class ScrambledCircuit:
    """Base circuit plus one frozen Gaussian pencil seed matrix per gate.

    Gate i at deformation theta becomes ``base_i @ Q[(1-theta) X_i + theta I]``
    with Q the positive-diagonal QR factor: Haar-random at theta=0, the base
    gate itself at theta=1.
    """

    base: Circuit
    seed: int
    pencils: tuple[np.ndarray, ...]

    @property
    def n_gates(self) -> int:
        return self.base.n_gates


def scramble(circuit: Circuit, seed: int) -> ScrambledCircuit:
    pencils = []
    for g, gate in enumerate(circuit.gates):
        rng = stream_rng(seed, g)
        dim = 2**gate.arity
        x = rng.standard_normal((2, dim, dim))
        pencils.append(x[0] + 1j * x[1])
    return ScrambledCircuit(circuit, seed, tuple(pencils))


def evaluate_scrambled(sc: ScrambledCircuit, theta: float) -> Circuit:
    theta = float(theta)
    if not 0.0 <= theta <= 1.0:
        raise ValidationError(f"theta must lie in [0, 1], got {theta}")
    if theta == 1.0:
        # the deformation is the identity here; return the base gates untouched
        return sc.base
    gates = []
    for gate, pencil in zip(sc.base.gates, sc.pencils):
        dim = pencil.shape[0]
        q, _ = standard_qr((1.0 - theta) * pencil + theta * np.eye(dim))
        gates.append(Gate(gate.targets, gate.matrix @ q.matrix))
    return Circuit(sc.base.n_qubits, tuple(gates))


def p0_theta(sc: ScrambledCircuit, theta: float) -> float:
    """All-zeros output probability of the deformed circuit (float route)."""
    bitstring = "0" * sc.base.n_qubits
    return probability(evaluate_scrambled(sc, theta), bitstring)


def p0_rational_single_gate(sc: ScrambledCircuit) -> RationalFn:
    """Exact closed form of theta -> p_0 for a one-gate scrambled circuit.

    Only the first column of the QR factor enters the all-zeros amplitude, and
    that column is the first pencil column normalized, so

        p_0(theta) = |sum_k C[0,k] m_k(theta)|^2 / sum_k |m_k(theta)|^2

    with m(theta) = (1-theta) X[:,0] + theta e_0 entrywise linear in theta.
    Both sides are degree <= 2, giving an exact (2, 2) rational function.
    Floats are lifted to rationals exactly, so no rounding enters.
    """
    if sc.n_gates != 1:
        raise ValidationError(
            f"closed form needs exactly one gate, got {sc.n_gates}"
        )
    gate = sc.base.gates[0]
    pencil = sc.pencils[0]
    dim = pencil.shape[0]
    one = GaussianRational(1)
    columns = []
    for k in range(dim):
        x = GaussianRational.from_complex(complex(pencil[k, 0]))
        target = one if k == 0 else GaussianRational(0)
        columns.append(Poly.exact([x, target - x]))
    amp = Poly.exact([0])
    for k in range(dim):
        c = GaussianRational.from_complex(complex(gate.matrix[0, k]))
        amp = amp + columns[k].scale(c)
    num = amp * amp.conjugate()
    den = Poly.exact([0])
    for col in columns:
        den = den + col * col.conjugate()
    return simplify(num, den, (2, 2))


# -- serialization ----------------------------------------------------------------


def circuit_to_jsonable(circuit: Circuit) -> dict:
    return {
        "n_qubits": circuit.n_qubits,
        "gates": [
            {"targets": list(g.targets), "matrix": matrix_to_jsonable(g.matrix)}
            for g in circuit.gates
        ],
    }


def circuit_from_jsonable(data: dict) -> Circuit:
    try:
        n_qubits = int(data["n_qubits"])
        raw_gates = data["gates"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed circuit payload: {exc}") from exc
    gates = []
    for entry in raw_gates:
        try:
            targets = tuple(int(t) for t in entry["targets"])
            matrix = matrix_from_jsonable(entry["matrix"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed gate payload: {exc}") from exc
        gates.append(Gate(targets, matrix))
    return Circuit(n_qubits, tuple(gates))
