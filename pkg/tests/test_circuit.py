"""Circuit simulation: statevector vs path sum, scrambling, closed form."""

from fractions import Fraction

import numpy as np
import pytest

from rcskit.circuit import (
    Circuit,
    Gate,
    amplitude,
    apply_gate,
    brickwork_circuit,
    circuit_from_jsonable,
    circuit_to_jsonable,
    evaluate_scrambled,
    feynman_amplitude,
    output_distribution,
    p0_rational_single_gate,
    p0_theta,
    probability,
    scramble,
    simulate,
)
from rcskit.errors import ResourceLimitError, ValidationError
from rcskit.haar import haar_unitary, make_rng

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def test_gate_validation():
    with pytest.raises(ValidationError):
        Gate((), np.eye(1))
    with pytest.raises(ValidationError):
        Gate((0, 0), np.eye(4))
    with pytest.raises(ValidationError):
        Gate((0,), np.eye(4))
    with pytest.raises(ValidationError):
        Gate((0,), np.array([[1, 1], [0, 1]], dtype=complex))


def test_circuit_validation():
    with pytest.raises(ValidationError):
        Circuit(0, ())
    with pytest.raises(ValidationError):
        Circuit(1, (Gate((1,), X),))


def test_bell_state_msb_convention():
    # H on qubit 0 then CNOT(0 -> 1): qubit 0 is the leftmost character
    circ = Circuit(2, (Gate((0,), H), Gate((0, 1), CNOT)))
    state = simulate(circ)
    assert abs(state[0b00] - 1 / np.sqrt(2)) < 1e-12
    assert abs(state[0b11] - 1 / np.sqrt(2)) < 1e-12
    assert abs(state[0b01]) < 1e-12 and abs(state[0b10]) < 1e-12
    assert abs(probability(circ, "11") - 0.5) < 1e-12


def test_x_on_each_qubit_flips_expected_bit():
    for q in range(3):
        circ = Circuit(3, (Gate((q,), X),))
        expected = "".join("1" if i == q else "0" for i in range(3))
        assert abs(amplitude(circ, expected) - 1.0) < 1e-12


def test_gate_target_order_is_significant():
    # CNOT with control listed second acts as CNOT(1 -> 0)
    circ = Circuit(2, (Gate((1,), X), Gate((1, 0), CNOT)))
    assert abs(probability(circ, "11") - 1.0) < 1e-12


def test_apply_gate_preserves_norm():
    rng = make_rng(40)
    state = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    state /= np.linalg.norm(state)
    gate = Gate((0, 2), haar_unitary(4, rng=rng))
    out = apply_gate(state, 3, gate)
    assert abs(np.linalg.norm(out) - 1.0) < 1e-12


def test_feynman_matches_statevector_on_random_circuits():
    for seed in range(10):
        circ = brickwork_circuit(3, 4, seed)
        state = simulate(circ)
        for index in range(8):
            bits = format(index, "03b")
            assert abs(feynman_amplitude(circ, bits) - state[index]) <= 1e-12


def test_output_distribution_normalized():
    circ = brickwork_circuit(4, 6, 41)
    assert abs(output_distribution(circ).sum() - 1.0) <= 1e-12


def test_feynman_resource_limits():
    circ = brickwork_circuit(2, 9, 42)
    with pytest.raises(ResourceLimitError):
        feynman_amplitude(circ, "00")
    wide = Circuit(13, (Gate((0,), X),))
    with pytest.raises(ResourceLimitError):
        feynman_amplitude(wide, "0" * 13)


def test_bitstring_validation():
    circ = brickwork_circuit(2, 1, 43)
    with pytest.raises(ValidationError):
        amplitude(circ, "0")
    with pytest.raises(ValidationError):
        amplitude(circ, "0x")


def test_brickwork_structure_and_determinism():
    circ = brickwork_circuit(4, 5, 44)
    assert [g.targets for g in circ.gates] == [(0, 1), (1, 2), (2, 3), (0, 1), (1, 2)]
    again = brickwork_circuit(4, 5, 44)
    for a, b in zip(circ.gates, again.gates):
        assert np.array_equal(a.matrix, b.matrix)
    other = brickwork_circuit(4, 5, 45)
    assert not np.allclose(circ.gates[0].matrix, other.gates[0].matrix)


def test_single_qubit_brickwork():
    circ = brickwork_circuit(1, 3, 46)
    assert all(g.targets == (0,) for g in circ.gates)
    assert abs(output_distribution(circ).sum() - 1.0) <= 1e-12


# -- scrambling ------------------------------------------------------------------


def test_scramble_endpoints():
    base = brickwork_circuit(3, 4, 47)
    sc = scramble(base, 48)
    # theta = 1 returns the base gates exactly, not approximately
    assert evaluate_scrambled(sc, 1.0) is base
    deformed = evaluate_scrambled(sc, 0.25)
    for gate in deformed.gates:
        dim = gate.matrix.shape[0]
        defect = np.max(np.abs(gate.matrix.conj().T @ gate.matrix - np.eye(dim)))
        assert defect <= 1e-10


def test_scramble_theta_zero_is_haar_like():
    # at theta = 0 the deformation is an independent Haar factor, so the
    # deformed gate should be far from the base gate
    base = brickwork_circuit(2, 1, 49)
    sc = scramble(base, 50)
    deformed = evaluate_scrambled(sc, 0.0)
    assert np.max(np.abs(deformed.gates[0].matrix - base.gates[0].matrix)) > 0.1


def test_scramble_determinism_and_theta_bounds():
    base = brickwork_circuit(2, 2, 51)
    sc1, sc2 = scramble(base, 52), scramble(base, 52)
    for a, b in zip(sc1.pencils, sc2.pencils):
        assert np.array_equal(a, b)
    with pytest.raises(ValidationError):
        evaluate_scrambled(sc1, -0.1)
    with pytest.raises(ValidationError):
        evaluate_scrambled(sc1, 1.1)


def test_p0_theta_continuity_near_base():
    base = brickwork_circuit(3, 3, 53)
    sc = scramble(base, 54)
    p_base = probability(base, "000")
    assert abs(p0_theta(sc, 1.0) - p_base) <= 1e-12
    assert abs(p0_theta(sc, 0.999) - p_base) <= 0.05


def test_single_gate_closed_form_matches_simulation():
    for seed in range(8):
        base = brickwork_circuit(2, 1, 100 + seed)
        sc = scramble(base, 200 + seed)
        f = p0_rational_single_gate(sc)
        assert f.degree_bound == (2, 2)
        for theta in (0.0, 0.125, 0.3, 0.5, 0.77, 1.0):
            exact = f(Fraction(theta))
            assert abs(exact.im) == 0
            assert abs(float(exact.re) - p0_theta(sc, theta)) <= 1e-10


def test_closed_form_rejects_multi_gate():
    sc = scramble(brickwork_circuit(2, 2, 55), 56)
    with pytest.raises(ValidationError):
        p0_rational_single_gate(sc)


def test_closed_form_value_at_one_is_base_probability():
    base = brickwork_circuit(3, 1, 57)
    sc = scramble(base, 58)
    f = p0_rational_single_gate(sc)
    assert abs(float(f(Fraction(1)).re) - probability(base, "000")) <= 1e-12


# -- serialization ------------------------------------------------------------------


def test_circuit_json_roundtrip():
    circ = brickwork_circuit(3, 4, 59)
    data = circuit_to_jsonable(circ)
    back = circuit_from_jsonable(data)
    assert back.n_qubits == circ.n_qubits
    for a, b in zip(circ.gates, back.gates):
        assert a.targets == b.targets
        assert np.max(np.abs(a.matrix - b.matrix)) == 0.0


def test_circuit_json_validation():
    with pytest.raises(ValidationError):
        circuit_from_jsonable({"gates": []})
    bad = {
        "n_qubits": 1,
        "gates": [{"targets": [0], "matrix": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}],
    }
    with pytest.raises(ValidationError):
        circuit_from_jsonable(bad)
