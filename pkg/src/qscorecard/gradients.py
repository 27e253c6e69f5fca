"""Analytic parameter-shift gradients and the bridge to a classical loss.

For circuits whose trainable gates are all Pauli rotations, the derivative of
the Z expectation with respect to each angle is exact:

    df/dtheta_i = (f(theta_i + pi/2) - f(theta_i - pi/2)) / 2

so a gradient of n parameters costs exactly 2n circuit evaluations. A central
finite-difference routine is kept alongside as an independent oracle. The
loss side assumes binary cross-entropy on clamped probabilities; ``loss_vjp``
contracts the per-sample BCE gradient with the quantum Jacobian to produce
the parameter gradient used by the optimizer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import ParameterizedCircuit
from .qsim import expectation_z_batch, run_circuit_batch
from .validation import check_binary_labels

SHIFT = np.pi / 2

PROB_CLAMP = 1e-7


@dataclass(frozen=True)
class ShiftSet:
    """A base parameter vector and its 2n single-coordinate shifts.

    Row i of ``shifted`` adds pi/2 to coordinate i; row n + i subtracts it.
    """

    base: np.ndarray
    shifted: np.ndarray


@dataclass(frozen=True)
class GradientResult:
    grad: np.ndarray
    evaluations: int


def generate_parameter_shift_values(theta) -> ShiftSet:
    """All 2n shifted copies of ``theta`` needed for one gradient."""
    base = np.asarray(theta, dtype=np.float64).reshape(-1)
    n = base.size
    if n == 0:
        raise ValueError("theta must have at least one coordinate")
    offsets = SHIFT * np.eye(n)
    shifted = np.vstack([base + offsets, base - offsets])
    return ShiftSet(base=base, shifted=shifted)


def _check_trainable_rotations(circuit: ParameterizedCircuit):
    for gate in circuit.gates:
        if gate.trainable_slot is not None and not gate.is_rotation:
            raise ValueError(
                f"parameter-shift supports Pauli rotations only, "
                f"found trainable {gate.kind}"
            )


def expectation_of(circuit: ParameterizedCircuit, features, theta) -> float:
    """Exact <Z_0> of the circuit bound to the given encoding angles and parameters."""
    features = np.asarray(features, dtype=np.float64).reshape(1, -1)
    theta = np.asarray(theta, dtype=np.float64).reshape(1, -1)
    states = run_circuit_batch(circuit, features, theta)
    return float(expectation_z_batch(states, 0)[0])


def expectation_batch(circuit: ParameterizedCircuit, features, theta_rows) -> np.ndarray:
    """<Z_0> for many parameter rows under one fixed feature row."""
    features = np.asarray(features, dtype=np.float64).reshape(1, -1)
    states = run_circuit_batch(circuit, features, theta_rows)
    return expectation_z_batch(states, 0)


def parameter_shift_gradient(
    circuit: ParameterizedCircuit, features, theta
) -> GradientResult:
    """Exact gradient of <Z_0> w.r.t. every trainable angle, 2n evaluations."""
    _check_trainable_rotations(circuit)
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    n = theta.size
    if n == 0:
        return GradientResult(grad=np.zeros(0), evaluations=0)
    shifts = generate_parameter_shift_values(theta)
    values = expectation_batch(circuit, features, shifts.shifted)
    grad = 0.5 * (values[:n] - values[n:])
    return GradientResult(grad=grad, evaluations=2 * n)


def finite_difference_gradient(
    circuit: ParameterizedCircuit, features, theta, epsilon: float = 1e-5
) -> np.ndarray:
    """Central-difference gradient of <Z_0>; the oracle the shift rule is tested against."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    n = theta.size
    if n == 0:
        return np.zeros(0)
    offsets = epsilon * np.eye(n)
    rows = np.vstack([theta + offsets, theta - offsets])
    values = expectation_batch(circuit, features, rows)
    return (values[:n] - values[n:]) / (2.0 * epsilon)


def expectation_jacobian_batch(
    circuit: ParameterizedCircuit, encoding_angles, theta
) -> np.ndarray:
    """Per-sample parameter-shift Jacobian d<Z_0>/dtheta.

    ``encoding_angles`` is (batch, k) and ``theta`` a single parameter vector;
    the result is (batch, n). All batch * 2n shifted circuits run in one
    vectorized pass, in fixed coordinate order, so results are reproducible.
    """
    _check_trainable_rotations(circuit)
    angles = np.atleast_2d(np.asarray(encoding_angles, dtype=np.float64))
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    batch, n = angles.shape[0], theta.size
    if n == 0:
        return np.zeros((batch, 0))
    shifted = generate_parameter_shift_values(theta).shifted
    enc_rows = np.repeat(angles, 2 * n, axis=0)
    theta_rows = np.tile(shifted, (batch, 1))
    states = run_circuit_batch(circuit, enc_rows, theta_rows)
    values = expectation_z_batch(states, 0).reshape(batch, 2 * n)
    return 0.5 * (values[:, :n] - values[:, n:])


def clamp_probabilities(p) -> np.ndarray:
    """Pull probabilities into [1e-7, 1 - 1e-7] so BCE and its gradient stay finite."""
    return np.clip(np.asarray(p, dtype=np.float64), PROB_CLAMP, 1.0 - PROB_CLAMP)


def bce_loss(predictions, labels) -> float:
    """Mean binary cross-entropy on clamped predictions."""
    p = clamp_probabilities(predictions).reshape(-1)
    y = check_binary_labels(labels)
    if p.shape != y.shape:
        raise ValueError(f"got {p.size} predictions for {y.size} labels")
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log1p(-p)))


def loss_vjp(predictions, labels, per_sample_theta_grads) -> np.ndarray:
    """Parameter gradient of mean BCE given the probability Jacobian.

    ``per_sample_theta_grads`` holds dp_s/dtheta row per sample (note
    dp/dtheta = -(1/2) d<Z_0>/dtheta when p = (1 - <Z_0>)/2). Returns
    (1/m) sum_s (p_s - y_s) / (p_s (1 - p_s)) * dp_s/dtheta.
    """
    p = clamp_probabilities(predictions).reshape(-1)
    y = check_binary_labels(labels)
    grads = np.asarray(per_sample_theta_grads, dtype=np.float64)
    if grads.ndim != 2 or grads.shape[0] != p.size or p.size != y.size:
        raise ValueError(
            f"shape mismatch: {p.size} predictions, {y.size} labels, "
            f"Jacobian {grads.shape}"
        )
    upstream = (p - y.astype(np.float64)) / (p * (1.0 - p))
    return upstream @ grads / p.size
