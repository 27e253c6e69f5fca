"""QNN circuit architectures and the forward pass to a default probability.

Two variants are provided. The ``simulation`` ansatz alternates three
parameterized layers (RX and RY per qubit) with two CNOT rings, with the last
parameterized layer acting on qubit 0 only, for 4n + 2 trainable angles. The
``hardware`` ansatz uses two RY layers each followed by a CNOT ring, for 2n
trainable angles. Both start with an RX encoding layer, one feature per qubit,
and both are read out by measuring qubit 0 in the Z basis:

    p(default) = (1 - <Z_0>) / 2
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qsim
from .circuits import GateOp, ParameterizedCircuit

ANSATZ_VARIANTS = ("simulation", "hardware")

READOUT_QUBIT = 0


@dataclass(frozen=True)
class AnsatzConfig:
    """Architecture choice plus the multiplier mapping features to angles."""

    variant: str = "simulation"
    num_qubits: int = 3
    angle_scale: float = math.pi

    def __post_init__(self):
        if self.variant not in ANSATZ_VARIANTS:
            raise ValueError(f"variant must be one of {ANSATZ_VARIANTS}, got {self.variant!r}")
        if self.num_qubits < 2:
            raise ValueError(f"the entangling ring needs num_qubits >= 2, got {self.num_qubits}")


def build_encoding_layer(num_qubits: int) -> list[GateOp]:
    """One RX gate per qubit, qubit j reading encoding slot j."""
    if num_qubits < 1:
        raise ValueError(f"num_qubits must be >= 1, got {num_qubits}")
    return [GateOp("rx", (q,), encoding_slot=q) for q in range(num_qubits)]


def _cnot_ring(num_qubits: int) -> list[GateOp]:
    return [GateOp("cnot", (q, (q + 1) % num_qubits)) for q in range(num_qubits)]


def build_simulation_ansatz(config: AnsatzConfig) -> ParameterizedCircuit:
    """Three RX+RY layers separated by CNOT rings; final layer on qubit 0 only."""
    if config.variant != "simulation":
        raise ValueError(f"expected variant 'simulation', got {config.variant!r}")
    n = config.num_qubits
    gates = build_encoding_layer(n)
    slot = 0
    for _ in range(2):
        for q in range(n):
            gates.append(GateOp("rx", (q,), trainable_slot=slot))
            gates.append(GateOp("ry", (q,), trainable_slot=slot + 1))
            slot += 2
        gates.extend(_cnot_ring(n))
    gates.append(GateOp("rx", (READOUT_QUBIT,), trainable_slot=slot))
    gates.append(GateOp("ry", (READOUT_QUBIT,), trainable_slot=slot + 1))
    slot += 2
    return ParameterizedCircuit(
        num_qubits=n,
        gates=tuple(gates),
        num_encoding_slots=n,
        num_trainable_slots=slot,
    )


def build_hardware_ansatz(config: AnsatzConfig) -> ParameterizedCircuit:
    """Two RY layers, each followed by a CNOT ring."""
    if config.variant != "hardware":
        raise ValueError(f"expected variant 'hardware', got {config.variant!r}")
    n = config.num_qubits
    gates = build_encoding_layer(n)
    slot = 0
    for _ in range(2):
        for q in range(n):
            gates.append(GateOp("ry", (q,), trainable_slot=slot))
            slot += 1
        gates.extend(_cnot_ring(n))
    return ParameterizedCircuit(
        num_qubits=n,
        gates=tuple(gates),
        num_encoding_slots=n,
        num_trainable_slots=slot,
    )


def build_ansatz(config: AnsatzConfig) -> ParameterizedCircuit:
    if config.variant == "simulation":
        return build_simulation_ansatz(config)
    return build_hardware_ansatz(config)


def qnn_forward_batch(
    circuit: ParameterizedCircuit,
    features,
    theta,
    angle_scale: float = math.pi,
) -> np.ndarray:
    """Default probabilities for a (batch, k) block of feature rows.

    Features are multiplied by ``angle_scale`` to become encoding angles, the
    circuit runs once per row, and qubit 0's Z expectation maps to
    ``(1 - <Z_0>) / 2``. Returns a (batch,) float array in [0, 1].
    """
    angles = angle_scale * np.atleast_2d(np.asarray(features, dtype=np.float64))
    states = qsim.run_circuit_batch(circuit, angles, np.asarray(theta, dtype=np.float64))
    z0 = qsim.expectation_z_batch(states, READOUT_QUBIT)
    return 0.5 * (1.0 - z0)


def qnn_forward(
    circuit: ParameterizedCircuit,
    features,
    theta,
    angle_scale: float = math.pi,
) -> float:
    """Default probability for one feature row."""
    features = np.asarray(features, dtype=np.float64).reshape(1, -1)
    return float(qnn_forward_batch(circuit, features, theta, angle_scale)[0])
