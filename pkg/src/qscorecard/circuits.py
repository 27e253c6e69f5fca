"""Gate and circuit data model shared by the simulator and ansatz builders.

A circuit is a flat, ordered list of gates. Rotation gates take their angle
from exactly one of three sources: a fixed constant, an encoding slot (bound
to scaled input features at run time), or a trainable slot (bound to model
parameters). Entangling gates carry no angle. Circuits are immutable and
serialize to plain JSON for reports and debugging.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

ROTATION_KINDS = ("rx", "ry", "rz")
ENTANGLER_KINDS = ("cnot", "cz")


@dataclass(frozen=True)
class GateOp:
    """One gate: a Pauli rotation on a single qubit or a two-qubit entangler.

    For ``cnot`` the qubit order is (control, target); ``cz`` is symmetric.
    """

    kind: str
    qubits: tuple[int, ...]
    fixed_angle: float | None = None
    encoding_slot: int | None = None
    trainable_slot: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        sources = [
            s for s in (self.fixed_angle, self.encoding_slot, self.trainable_slot)
            if s is not None
        ]
        if self.kind in ROTATION_KINDS:
            if len(self.qubits) != 1:
                raise ValueError(f"{self.kind} acts on exactly one qubit, got {self.qubits}")
            if len(sources) != 1:
                raise ValueError(
                    f"{self.kind} needs exactly one angle source "
                    "(fixed_angle, encoding_slot, or trainable_slot)"
                )
        elif self.kind in ENTANGLER_KINDS:
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError(f"{self.kind} acts on two distinct qubits, got {self.qubits}")
            if sources:
                raise ValueError(f"{self.kind} carries no angle")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits}")

    @property
    def is_rotation(self) -> bool:
        return self.kind in ROTATION_KINDS

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "qubits": list(self.qubits)}
        for key in ("fixed_angle", "encoding_slot", "trainable_slot"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GateOp":
        return cls(
            kind=data["kind"],
            qubits=tuple(data["qubits"]),
            fixed_angle=data.get("fixed_angle"),
            encoding_slot=data.get("encoding_slot"),
            trainable_slot=data.get("trainable_slot"),
        )


@dataclass(frozen=True)
class ParameterizedCircuit:
    """Ordered gate sequence with declared encoding and trainable slot counts.

    Every trainable slot must be referenced by exactly one gate, so the slot
    index doubles as the parameter index during optimization. Encoding slots
    may be shared by several gates (data re-uploading) or left unused.
    """

    num_qubits: int
    gates: tuple[GateOp, ...] = field(default_factory=tuple)
    num_encoding_slots: int = 0
    num_trainable_slots: int = 0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.num_qubits < 1:
            raise ValueError(f"num_qubits must be >= 1, got {self.num_qubits}")
        trainable_refs: dict[int, int] = {}
        for gate in self.gates:
            for q in gate.qubits:
                if q >= self.num_qubits:
                    raise IndexError(
                        f"gate {gate.kind} on qubit {q} exceeds circuit width {self.num_qubits}"
                    )
            if gate.encoding_slot is not None and not (
                0 <= gate.encoding_slot < self.num_encoding_slots
            ):
                raise ValueError(
                    f"encoding slot {gate.encoding_slot} outside "
                    f"[0, {self.num_encoding_slots})"
                )
            if gate.trainable_slot is not None:
                if not 0 <= gate.trainable_slot < self.num_trainable_slots:
                    raise ValueError(
                        f"trainable slot {gate.trainable_slot} outside "
                        f"[0, {self.num_trainable_slots})"
                    )
                trainable_refs[gate.trainable_slot] = (
                    trainable_refs.get(gate.trainable_slot, 0) + 1
                )
        for slot in range(self.num_trainable_slots):
            if trainable_refs.get(slot, 0) != 1:
                raise ValueError(
                    f"trainable slot {slot} must be referenced by exactly one gate, "
                    f"found {trainable_refs.get(slot, 0)}"
                )

    def to_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "num_encoding_slots": self.num_encoding_slots,
            "num_trainable_slots": self.num_trainable_slots,
            "gates": [g.to_dict() for g in self.gates],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ParameterizedCircuit":
        return cls(
            num_qubits=data["num_qubits"],
            gates=tuple(GateOp.from_dict(g) for g in data["gates"]),
            num_encoding_slots=data["num_encoding_slots"],
            num_trainable_slots=data["num_trainable_slots"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ParameterizedCircuit":
        return cls.from_dict(json.loads(text))
