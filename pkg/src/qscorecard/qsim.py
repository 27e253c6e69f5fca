"""Exact dense statevector simulation of few-qubit circuits.

Conventions, used consistently everywhere in the package:

* Qubit 0 is the most significant bit of the basis index, so for two qubits
  the amplitude order is |00>, |01>, |10>, |11> and bitstring keys read
  left to right as qubit 0, qubit 1, ...
* Rotations follow U(theta) = exp(-i * theta * P / 2) for Pauli P, giving
  RY(theta)|0> = cos(theta/2)|0> + sin(theta/2)|1>.
* Every operation is a pure function: input states are never mutated and a
  fresh amplitude array is returned.

States are plain complex numpy vectors of length 2**n. The batched variants
evaluate one circuit on a whole batch of parameter rows at once; they are the
workhorses behind gradient and training code, and agree with the single-state
path because both share the same gate kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import GateOp, ParameterizedCircuit

MAX_QUBITS = 20


def _num_qubits_of(state: np.ndarray) -> int:
    size = state.shape[-1]
    n = int(size).bit_length() - 1
    if size <= 0 or 2**n != size:
        raise ValueError(f"state length {size} is not a power of two")
    return n


def init_state(num_qubits: int) -> np.ndarray:
    """All-zeros computational basis state |00...0> of ``num_qubits`` qubits."""
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValueError(f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits}")
    state = np.zeros(2**num_qubits, dtype=np.complex128)
    state[0] = 1.0
    return state


# Batched gate kernels. ``psi`` has shape (batch,) + (2,) * n, with qubit q on
# axis 1 + q. Per-row rotation angles broadcast from shape (batch,).


def _apply_rotation_batch(psi: np.ndarray, kind: str, qubit: int, angles) -> np.ndarray:
    n = psi.ndim - 1
    half = 0.5 * np.asarray(angles, dtype=np.float64)
    c, s = np.cos(half), np.sin(half)
    if c.ndim:
        shape = (psi.shape[0],) + (1,) * (n - 1)
        c, s = c.reshape(shape), s.reshape(shape)
    moved = np.moveaxis(psi, 1 + qubit, 1)
    a0, a1 = moved[:, 0], moved[:, 1]
    if kind == "rx":
        b0 = c * a0 - 1j * s * a1
        b1 = c * a1 - 1j * s * a0
    elif kind == "ry":
        b0 = c * a0 - s * a1
        b1 = s * a0 + c * a1
    elif kind == "rz":
        b0 = (c - 1j * s) * a0
        b1 = (c + 1j * s) * a1
    else:
        raise ValueError(f"unknown rotation kind {kind!r}")
    return np.moveaxis(np.stack([b0, b1], axis=1), 1, 1 + qubit)


def _apply_cnot_batch(psi: np.ndarray, control: int, target: int) -> np.ndarray:
    moved = np.moveaxis(psi, (1 + control, 1 + target), (1, 2))
    out = moved.copy()
    out[:, 1, 0] = moved[:, 1, 1]
    out[:, 1, 1] = moved[:, 1, 0]
    return np.moveaxis(out, (1, 2), (1 + control, 1 + target))


def _apply_cz_batch(psi: np.ndarray, a: int, b: int) -> np.ndarray:
    out = psi.copy()
    view = np.moveaxis(out, (1 + a, 1 + b), (1, 2))
    view[:, 1, 1] *= -1.0
    return out


def _apply_gate_batch(psi: np.ndarray, gate: GateOp, angles=None) -> np.ndarray:
    if gate.kind == "cnot":
        return _apply_cnot_batch(psi, *gate.qubits)
    if gate.kind == "cz":
        return _apply_cz_batch(psi, *gate.qubits)
    return _apply_rotation_batch(psi, gate.kind, gate.qubits[0], angles)


def apply_gate(state: np.ndarray, gate: GateOp, angle: float | None = None) -> np.ndarray:
    """Apply one gate and return the new state.

    ``angle`` must be supplied exactly when the gate is a rotation; slot
    bindings on the gate are ignored here because the angle arrives already
    resolved.
    """
    state = np.asarray(state, dtype=np.complex128)
    n = _num_qubits_of(state)
    for q in gate.qubits:
        if q >= n:
            raise IndexError(f"qubit {q} out of range for {n}-qubit state")
    if gate.is_rotation and angle is None:
        raise ValueError(f"{gate.kind} requires an angle")
    if not gate.is_rotation and angle is not None:
        raise ValueError(f"{gate.kind} carries no angle")
    psi = state.reshape((1,) + (2,) * n)
    return _apply_gate_batch(psi, gate, angle).reshape(-1)


def _resolve_batch(values, count: int, name: str) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(values, dtype=np.float64))
    if arr.shape[1] != count:
        if count == 0 and arr.size == 0:
            return arr.reshape(arr.shape[0] if arr.shape[0] else 1, 0)
        raise ValueError(
            f"{name} has {arr.shape[1]} values but the circuit declares {count} slots"
        )
    return arr


def run_circuit_batch(
    circuit: ParameterizedCircuit,
    encoding_values,
    trainable_values,
) -> np.ndarray:
    """Run one circuit over a batch of parameter rows.

    ``encoding_values`` and ``trainable_values`` are (batch, slots) arrays; a
    single row broadcasts against the other argument's batch size. Returns
    the final statevectors as a (batch, 2**n) array.
    """
    enc = _resolve_batch(encoding_values, circuit.num_encoding_slots, "encoding_values")
    tr = _resolve_batch(trainable_values, circuit.num_trainable_slots, "trainable_values")
    batch = max(enc.shape[0], tr.shape[0])
    for name, arr in (("encoding_values", enc), ("trainable_values", tr)):
        if arr.shape[0] not in (1, batch):
            raise ValueError(
                f"{name} batch size {arr.shape[0]} incompatible with {batch}"
            )
    if enc.shape[0] != batch:
        enc = np.broadcast_to(enc, (batch, enc.shape[1]))
    if tr.shape[0] != batch:
        tr = np.broadcast_to(tr, (batch, tr.shape[1]))

    n = circuit.num_qubits
    psi = np.zeros((batch,) + (2,) * n, dtype=np.complex128)
    psi[(slice(None),) + (0,) * n] = 1.0
    for gate in circuit.gates:
        if gate.is_rotation:
            if gate.fixed_angle is not None:
                angles = gate.fixed_angle
            elif gate.encoding_slot is not None:
                angles = enc[:, gate.encoding_slot]
            else:
                angles = tr[:, gate.trainable_slot]
            psi = _apply_gate_batch(psi, gate, angles)
        else:
            psi = _apply_gate_batch(psi, gate)
    return psi.reshape(batch, 2**n)


def run_circuit(
    circuit: ParameterizedCircuit,
    encoding_values=(),
    trainable_values=(),
) -> np.ndarray:
    """Run the circuit once, resolving each gate's angle source in order."""
    enc = np.asarray(encoding_values, dtype=np.float64).reshape(1, -1)
    tr = np.asarray(trainable_values, dtype=np.float64).reshape(1, -1)
    return run_circuit_batch(circuit, enc, tr)[0]


def expectation_z(state: np.ndarray, qubit: int) -> float:
    """Pauli-Z expectation on one qubit: P(bit=0) - P(bit=1)."""
    state = np.asarray(state)
    n = _num_qubits_of(state)
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} out of range for {n}-qubit state")
    probs = (state.real**2 + state.imag**2).reshape((2,) * n)
    p0 = float(np.take(probs, 0, axis=qubit).sum())
    p1 = float(np.take(probs, 1, axis=qubit).sum())
    return float(np.clip(p0 - p1, -1.0, 1.0))


def expectation_z_batch(states: np.ndarray, qubit: int) -> np.ndarray:
    """Pauli-Z expectation of one qubit for every row of a (batch, 2**n) array."""
    states = np.asarray(states)
    n = _num_qubits_of(states)
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} out of range for {n}-qubit state")
    probs = (states.real**2 + states.imag**2).reshape((-1,) + (2,) * n)
    axes = tuple(a for a in range(1, n + 1) if a != 1 + qubit)
    marginal = probs.sum(axis=axes) if axes else probs
    return np.clip(marginal[:, 0] - marginal[:, 1], -1.0, 1.0)


def sample_measurements(
    state: np.ndarray, shots: int, seed: int | None = None
) -> dict[str, int]:
    """Draw ``shots`` basis-state outcomes and return a bitstring histogram.

    Outcome probabilities follow the squared amplitude moduli; the draw is
    deterministic for a fixed seed. Only observed bitstrings appear as keys.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    state = np.asarray(state)
    n = _num_qubits_of(state)
    probs = state.real**2 + state.imag**2
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    width = f"0{n}b"
    return {format(i, width): int(c) for i, c in enumerate(counts) if c > 0}


@dataclass(frozen=True)
class ReadoutErrorModel:
    """Independent per-qubit asymmetric readout flips.

    ``fidelities[q] = (f0, f1)``: probability of reading 0 given the qubit is
    0, and of reading 1 given it is 1.
    """

    fidelities: tuple[tuple[float, float], ...]

    def __post_init__(self):
        fids = tuple((float(f0), float(f1)) for f0, f1 in self.fidelities)
        object.__setattr__(self, "fidelities", fids)
        for q, (f0, f1) in enumerate(fids):
            if not (0.0 <= f0 <= 1.0 and 0.0 <= f1 <= 1.0):
                raise ValueError(f"qubit {q} fidelities must lie in [0, 1], got {f0}, {f1}")

    @property
    def num_qubits(self) -> int:
        return len(self.fidelities)

    @classmethod
    def uniform(cls, f0: float, f1: float, num_qubits: int) -> "ReadoutErrorModel":
        return cls(tuple((f0, f1) for _ in range(num_qubits)))


def _check_model_covers(model: ReadoutErrorModel, n: int):
    if model.num_qubits < n:
        raise ValueError(
            f"readout model covers {model.num_qubits} qubits but {n} are measured"
        )


def apply_readout_error(
    measured,
    model: ReadoutErrorModel,
    seed: int | None = None,
):
    """Perturb measurement results with per-qubit readout flips.

    Accepts either an exact probability vector over all 2**n basis states
    (returns the exact post-error probabilities) or a bitstring histogram
    (returns a new histogram with each bit of each shot flipped independently,
    0->1 with probability 1-f0 and 1->0 with probability 1-f1).
    """
    if isinstance(measured, dict):
        return _readout_error_counts(measured, model, seed)
    probs = np.asarray(measured, dtype=np.float64)
    n = _num_qubits_of(probs)
    _check_model_covers(model, n)
    out = probs.reshape((2,) * n)
    for q in range(n):
        f0, f1 = model.fidelities[q]
        confusion = np.array([[f0, 1.0 - f1], [1.0 - f0, f1]])
        out = np.moveaxis(np.tensordot(confusion, out, axes=([1], [q])), 0, q)
    return out.reshape(-1)


def _readout_error_counts(
    counts: dict[str, int], model: ReadoutErrorModel, seed: int | None
) -> dict[str, int]:
    if not counts:
        return {}
    n = len(next(iter(counts)))
    _check_model_covers(model, n)
    bits = np.array([[int(ch) for ch in key] for key in counts], dtype=np.int8)
    reps = np.fromiter(counts.values(), dtype=np.int64)
    shot_bits = np.repeat(bits, reps, axis=0)
    f0 = np.array([model.fidelities[q][0] for q in range(n)])
    f1 = np.array([model.fidelities[q][1] for q in range(n)])
    flip_prob = np.where(shot_bits == 0, 1.0 - f0, 1.0 - f1)
    rng = np.random.default_rng(seed)
    flipped = shot_bits ^ (rng.random(shot_bits.shape) < flip_prob)
    outcomes, outcome_counts = np.unique(flipped, axis=0, return_counts=True)
    return {
        "".join(str(b) for b in row): int(c)
        for row, c in zip(outcomes, outcome_counts)
    }
