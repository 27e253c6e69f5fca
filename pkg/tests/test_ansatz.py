import math

import numpy as np
import pytest

from qscorecard import (
    AnsatzConfig,
    build_ansatz,
    build_encoding_layer,
    build_hardware_ansatz,
    build_simulation_ansatz,
    qnn_forward,
    qnn_forward_batch,
)

from oracles import expectation_z_oracle, run_circuit_oracle


def test_config_validation():
    AnsatzConfig(variant="hardware", num_qubits=2)
    with pytest.raises(ValueError):
        AnsatzConfig(variant="other")
    with pytest.raises(ValueError):
        AnsatzConfig(num_qubits=1)


def test_encoding_layer_structure():
    layer = build_encoding_layer(3)
    assert [g.kind for g in layer] == ["rx", "rx", "rx"]
    assert [g.qubits[0] for g in layer] == [0, 1, 2]
    assert [g.encoding_slot for g in layer] == [0, 1, 2]
    with pytest.raises(ValueError):
        build_encoding_layer(0)


def test_simulation_ansatz_counts():
    circuit = build_simulation_ansatz(AnsatzConfig(num_qubits=3))
    assert circuit.num_qubits == 3
    assert circuit.num_encoding_slots == 3
    assert circuit.num_trainable_slots == 14
    assert len(circuit.gates) == 23
    kinds = [g.kind for g in circuit.gates]
    assert kinds.count("cnot") == 6
    # closing layer rotates the readout qubit only
    assert circuit.gates[-2].kind == "rx" and circuit.gates[-2].qubits == (0,)
    assert circuit.gates[-1].kind == "ry" and circuit.gates[-1].qubits == (0,)


def test_simulation_ansatz_scales_with_qubits():
    for n in (2, 4, 5):
        circuit = build_simulation_ansatz(AnsatzConfig(num_qubits=n))
        assert circuit.num_trainable_slots == 4 * n + 2
        assert sum(g.kind == "cnot" for g in circuit.gates) == 2 * n


def test_cnot_ring_wiring():
    circuit = build_simulation_ansatz(AnsatzConfig(num_qubits=3))
    rings = [g.qubits for g in circuit.gates if g.kind == "cnot"]
    assert rings[:3] == [(0, 1), (1, 2), (2, 0)]
    assert rings[3:] == [(0, 1), (1, 2), (2, 0)]


def test_hardware_ansatz_counts():
    circuit = build_hardware_ansatz(AnsatzConfig(variant="hardware", num_qubits=3))
    assert circuit.num_trainable_slots == 6
    assert len(circuit.gates) == 15
    kinds = {g.kind for g in circuit.gates}
    assert kinds == {"rx", "ry", "cnot"}
    trainable_kinds = {g.kind for g in circuit.gates if g.trainable_slot is not None}
    assert trainable_kinds == {"ry"}


def test_builders_reject_mismatched_variant():
    with pytest.raises(ValueError):
        build_simulation_ansatz(AnsatzConfig(variant="hardware"))
    with pytest.raises(ValueError):
        build_hardware_ansatz(AnsatzConfig(variant="simulation"))


def test_build_ansatz_dispatch():
    sim = build_ansatz(AnsatzConfig())
    hw = build_ansatz(AnsatzConfig(variant="hardware"))
    assert sim.num_trainable_slots == 14
    assert hw.num_trainable_slots == 6


def test_forward_zero_inputs_give_zero_default_probability():
    for variant in ("simulation", "hardware"):
        circuit = build_ansatz(AnsatzConfig(variant=variant))
        p = qnn_forward(circuit, [0.0, 0.0, 0.0], np.zeros(circuit.num_trainable_slots))
        assert p == pytest.approx(0.0, abs=1e-12)


def test_forward_matches_dense_oracle():
    rng = np.random.default_rng(41)
    for variant in ("simulation", "hardware"):
        circuit = build_ansatz(AnsatzConfig(variant=variant))
        for _ in range(5):
            features = rng.uniform(-1, 1, size=3)
            theta = rng.uniform(-np.pi, np.pi, size=circuit.num_trainable_slots)
            state = run_circuit_oracle(circuit, math.pi * features, theta)
            want = 0.5 * (1.0 - expectation_z_oracle(state, 0))
            got = qnn_forward(circuit, features, theta)
            assert got == pytest.approx(want, abs=1e-10)


def test_forward_probability_bounds_and_determinism():
    rng = np.random.default_rng(8)
    circuit = build_ansatz(AnsatzConfig())
    features = rng.uniform(-2, 2, size=(20, 3))
    theta = rng.uniform(-np.pi, np.pi, size=14)
    probs = qnn_forward_batch(circuit, features, theta)
    assert probs.shape == (20,)
    assert np.all(probs >= 0.0) and np.all(probs <= 1.0)
    np.testing.assert_array_equal(probs, qnn_forward_batch(circuit, features, theta))


def test_forward_batch_agrees_with_scalar():
    rng = np.random.default_rng(13)
    circuit = build_ansatz(AnsatzConfig(variant="hardware"))
    features = rng.uniform(-1, 1, size=(4, 3))
    theta = rng.uniform(-np.pi, np.pi, size=6)
    batch = qnn_forward_batch(circuit, features, theta)
    for i in range(4):
        assert batch[i] == pytest.approx(qnn_forward(circuit, features[i], theta), abs=1e-14)


def test_forward_is_2pi_periodic_in_parameters():
    rng = np.random.default_rng(21)
    circuit = build_ansatz(AnsatzConfig())
    features = rng.uniform(-1, 1, size=3)
    theta = rng.uniform(-np.pi, np.pi, size=14)
    base = qnn_forward(circuit, features, theta)
    for slot in (0, 7, 13):
        shifted = theta.copy()
        shifted[slot] += 2 * math.pi
        assert qnn_forward(circuit, features, shifted) == pytest.approx(base, abs=1e-10)
        shifted[slot] += 2 * math.pi
        assert qnn_forward(circuit, features, shifted) == pytest.approx(base, abs=1e-10)


def test_angle_scale_controls_encoding():
    circuit = build_ansatz(AnsatzConfig())
    theta = np.zeros(14)
    # scale 0 makes the encoding inert regardless of features
    p0 = qnn_forward(circuit, [0.3, -0.9, 0.5], theta, angle_scale=0.0)
    assert p0 == pytest.approx(0.0, abs=1e-12)
    # feature*scale only enters as a product
    a = qnn_forward(circuit, [0.25, 0.5, -0.5], theta, angle_scale=2.0)
    b = qnn_forward(circuit, [0.5, 1.0, -1.0], theta, angle_scale=1.0)
    assert a == pytest.approx(b, abs=1e-12)


def test_forward_rejects_wrong_feature_width():
    circuit = build_ansatz(AnsatzConfig())
    with pytest.raises(ValueError):
        qnn_forward(circuit, [0.1, 0.2], np.zeros(14))
    with pytest.raises(ValueError):
        qnn_forward_batch(circuit, np.zeros((3, 4)), np.zeros(14))
