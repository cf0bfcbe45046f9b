"""Parameterized circuits and exact derivative decompositions of their gates.

Every gate carries exactly one parameter, numbered 1..N in circuit order.
That convention is load-bearing: the error laws verified elsewhere count one
noise insertion per parameter, so fixed (unparameterized) gates are rejected.

A rotation about Pauli P uses the convention R(theta) = exp(-i theta P / 2).
A controlled rotation acts as |0><0| (x) I + |1><1| (x) R(theta).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .states import DensityOperator, NoiseChannel, PauliString

SINGLE = "single"
CONTROLLED = "controlled"

_AXES = ("X", "Y", "Z")


@dataclass(frozen=True)
class GateSpec:
    """One parameterized rotation: single-qubit or controlled."""

    kind: str
    axis: str
    target: int
    param_index: int
    control: int | None = None

    def __post_init__(self):
        if self.kind not in (SINGLE, CONTROLLED):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.axis not in _AXES:
            raise ValueError(f"rotation axis must be one of {_AXES}, got {self.axis!r}")
        if self.kind == CONTROLLED:
            if self.control is None:
                raise ValueError("controlled rotation needs a control qubit")
            if self.control == self.target:
                raise ValueError("control and target must differ")
        elif self.control is not None:
            raise ValueError("single-qubit rotation cannot carry a control")

    @property
    def mnemonic(self) -> str:
        prefix = "CR" if self.kind == CONTROLLED else "R"
        return prefix + self.axis


@dataclass(frozen=True)
class Ansatz:
    """Ordered list of parameterized gates on an n-qubit register."""

    n_qubits: int
    gates: tuple[GateSpec, ...]

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for pos, g in enumerate(self.gates, start=1):
            if g.param_index != pos:
                raise ValueError(
                    f"gate {pos} carries parameter index {g.param_index}; "
                    "every gate must own one parameter, numbered 1..N in circuit order"
                )
            for q in (g.target, g.control):
                if q is not None and not 0 <= q < self.n_qubits:
                    raise ValueError(f"gate {pos} touches qubit {q} outside the register")

    @property
    def n_parameters(self) -> int:
        return len(self.gates)

    def check_thetas(self, thetas: Sequence[float]) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=float)
        if thetas.shape != (self.n_parameters,):
            raise ValueError(
                f"expected {self.n_parameters} parameters, got shape {thetas.shape}"
            )
        return thetas


@dataclass(frozen=True)
class DerivativeDecomposition:
    """Terms (r, S, T) with sum_i r_i S rho T^dag = d(R rho R^dag)/dtheta."""

    terms: tuple[tuple[complex, np.ndarray, np.ndarray], ...]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(np.asarray(rho, dtype=complex))
        for r, s, t in self.terms:
            out += r * (s @ rho @ t.conj().T)
        return out


def _axis_matrix(gate: GateSpec, n_qubits: int) -> np.ndarray:
    return PauliString.single(gate.axis, gate.target, n_qubits).matrix()


def _control_projector(gate: GateSpec, n_qubits: int) -> np.ndarray:
    z = PauliString.single("Z", gate.control, n_qubits).matrix()
    return (np.eye(2**n_qubits) - z) / 2


def gate_unitary(gate: GateSpec, theta: float, n_qubits: int) -> np.ndarray:
    """Full-register unitary of one gate at parameter value theta."""
    dim = 2**n_qubits
    p = _axis_matrix(gate, n_qubits)
    r = np.cos(theta / 2) * np.eye(dim) - 1j * np.sin(theta / 2) * p
    if gate.kind == SINGLE:
        return r
    pi1 = _control_projector(gate, n_qubits)
    return (np.eye(dim) - pi1) + pi1 @ r


def derivative_decomposition(gate: GateSpec, theta: float, n_qubits: int) -> DerivativeDecomposition:
    """Two-term r/S/T form of the gate derivative at theta.

    Single-qubit: r = -i/2 with (S, T) = (P R, R), and +i/2 with (R, P R).
    Controlled:   r = +i/2 with (S, T) = (W, Pi1 P R), and -i/2 with
                  (Pi1 P R, W), where W is the full controlled gate and
                  Pi1 projects the control onto |1>.
    """
    p = _axis_matrix(gate, n_qubits)
    u = gate_unitary(gate, theta, n_qubits)
    if gate.kind == SINGLE:
        pr = p @ u
        return DerivativeDecomposition(((-0.5j, pr, u), (+0.5j, u, pr)))
    pi1 = _control_projector(gate, n_qubits)
    dim = 2**n_qubits
    r = np.cos(theta / 2) * np.eye(dim) - 1j * np.sin(theta / 2) * p
    ppr = pi1 @ p @ r
    return DerivativeDecomposition(((+0.5j, u, ppr), (-0.5j, ppr, u)))


def run_circuit(
    ansatz: Ansatz,
    thetas: Sequence[float],
    rho0: DensityOperator,
    noise: NoiseChannel = NoiseChannel.none(),
) -> DensityOperator:
    """Apply each gate by conjugation, then the channel, once per gate."""
    thetas = ansatz.check_thetas(thetas)
    if rho0.n_qubits != ansatz.n_qubits:
        raise ValueError("initial state dimension does not match the ansatz")
    rho = rho0.matrix
    for g, th in zip(ansatz.gates, thetas):
        u = gate_unitary(g, th, ansatz.n_qubits)
        rho = noise.apply(u @ rho @ u.conj().T)
    return DensityOperator(rho)


# --- ansatz definition files -------------------------------------------------
#
# One gate per line (grammar in docs/ansatz_format.md):
#   R<axis>  target  param_index
#   CR<axis> control target param_index
# '#' starts a comment.  The header line `qubits <n>` sets the register size.


def ansatz_to_text(ansatz: Ansatz) -> str:
    lines = [f"qubits {ansatz.n_qubits}"]
    for g in ansatz.gates:
        if g.kind == SINGLE:
            lines.append(f"{g.mnemonic} {g.target} {g.param_index}")
        else:
            lines.append(f"{g.mnemonic} {g.control} {g.target} {g.param_index}")
    return "\n".join(lines) + "\n"


def parse_ansatz(text: str) -> Ansatz:
    n_qubits = None
    gates: list[GateSpec] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0].lower() == "qubits":
            if n_qubits is not None or len(parts) != 2:
                raise ValueError(f"line {lineno}: malformed qubits header")
            n_qubits = int(parts[1])
            continue
        if n_qubits is None:
            raise ValueError("ansatz file must start with a 'qubits <n>' header")
        mnem = parts[0].upper()
        if mnem.startswith("CR") and len(mnem) == 3 and len(parts) == 4:
            gates.append(
                GateSpec(CONTROLLED, mnem[2], int(parts[2]), int(parts[3]), control=int(parts[1]))
            )
        elif mnem.startswith("R") and len(mnem) == 2 and len(parts) == 3:
            gates.append(GateSpec(SINGLE, mnem[1], int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"line {lineno}: cannot parse gate {raw!r}")
    if n_qubits is None or not gates:
        raise ValueError("ansatz file defines no gates")
    return Ansatz(n_qubits, tuple(gates))


def load_ansatz(path) -> Ansatz:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_ansatz(fh.read())


# --- built-in presets --------------------------------------------------------


def five_parameter_ansatz() -> Ansatz:
    """Two-qubit ansatz: RY layer, one entangling CRX, RY layer.

    The X-axis entangler keeps all five derivative directions independent;
    a CRY there would commute with the outer RY rotations and force M to be
    rank deficient.
    """
    gates = (
        GateSpec(SINGLE, "Y", 0, 1),
        GateSpec(SINGLE, "Y", 1, 2),
        GateSpec(CONTROLLED, "X", 1, 3, control=0),
        GateSpec(SINGLE, "Y", 0, 4),
        GateSpec(SINGLE, "Y", 1, 5),
    )
    return Ansatz(2, gates)


def nine_parameter_ansatz() -> Ansatz:
    """Two-qubit ansatz with RY/RZ layers and two opposing entanglers.

    Expressive enough to represent the ground state of the built-in
    molecular Hamiltonian.
    """
    gates = (
        GateSpec(SINGLE, "Y", 0, 1),
        GateSpec(SINGLE, "Z", 0, 2),
        GateSpec(SINGLE, "Y", 1, 3),
        GateSpec(SINGLE, "Z", 1, 4),
        GateSpec(CONTROLLED, "Y", 1, 5, control=0),
        GateSpec(CONTROLLED, "Y", 0, 6, control=1),
        GateSpec(SINGLE, "Y", 0, 7),
        GateSpec(SINGLE, "Z", 0, 8),
        GateSpec(SINGLE, "Y", 1, 9),
    )
    return Ansatz(2, gates)


PRESETS = {
    "five_param": five_parameter_ansatz,
    "nine_param": nine_parameter_ansatz,
}


def resolve_ansatz(name_or_path: str) -> Ansatz:
    """Look up a preset by name, else treat the argument as a file path."""
    if name_or_path in PRESETS:
        return PRESETS[name_or_path]()
    return load_ansatz(name_or_path)


def random_ansatz(
    n_qubits: int,
    n_parameters: int,
    rng: np.random.Generator,
    controlled_fraction: float = 0.3,
) -> Ansatz:
    """Seeded random all-parameterized ansatz (used by sweeps and tests)."""
    gates = []
    for pos in range(1, n_parameters + 1):
        axis = _AXES[rng.integers(3)]
        if n_qubits >= 2 and rng.random() < controlled_fraction:
            control, target = rng.choice(n_qubits, size=2, replace=False)
            gates.append(GateSpec(CONTROLLED, axis, int(target), pos, control=int(control)))
        else:
            gates.append(GateSpec(SINGLE, axis, int(rng.integers(n_qubits)), pos))
    return Ansatz(n_qubits, tuple(gates))
