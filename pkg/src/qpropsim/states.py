"""Density operators, Pauli strings, global noise channels, Hamiltonians.

Operators live as dense 2^n x 2^n complex arrays (n <= ~6).  Qubit 0 is the
leftmost tensor factor, so the label "ZI" means Z on qubit 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .linalg import frobenius_norm

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

STATE_ATOL = 1e-10


def kron_all(ops: Sequence[np.ndarray]) -> np.ndarray:
    out = np.asarray(ops[0])
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis with a real coefficient.

    labels[q] is the Pauli on qubit q; e.g. PauliString("ZZ", 0.5716).
    """

    labels: str
    coefficient: float = 1.0

    def __post_init__(self):
        if not self.labels or any(c not in PAULI_1Q for c in self.labels):
            raise ValueError(f"bad Pauli labels {self.labels!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def matrix(self) -> np.ndarray:
        return self.coefficient * kron_all([PAULI_1Q[c] for c in self.labels])

    @staticmethod
    def single(axis: str, qubit: int, n_qubits: int, coefficient: float = 1.0) -> "PauliString":
        labels = "".join(axis if q == qubit else "I" for q in range(n_qubits))
        return PauliString(labels, coefficient)


@dataclass(frozen=True)
class DensityOperator:
    """A quantum state: Hermitian, trace one, positive semidefinite."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        dim = m.shape[0]
        if m.ndim != 2 or m.shape != (dim, dim) or dim & (dim - 1):
            raise ValueError(f"density matrix must be square with power-of-two dim, got {m.shape}")
        if frobenius_norm(m - m.conj().T) > STATE_ATOL:
            raise ValueError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(m).real - 1.0) > STATE_ATOL:
            raise ValueError("density matrix trace differs from 1")
        if np.linalg.eigvalsh(m).min() < -STATE_ATOL:
            raise ValueError("density matrix has a negative eigenvalue")

    @property
    def n_qubits(self) -> int:
        return int(self.matrix.shape[0]).bit_length() - 1

    @staticmethod
    def computational_basis(n_qubits: int, index: int = 0) -> "DensityOperator":
        dim = 2**n_qubits
        m = np.zeros((dim, dim), dtype=complex)
        m[index, index] = 1.0
        return DensityOperator(m)

    @staticmethod
    def from_statevector(psi: np.ndarray) -> "DensityOperator":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return DensityOperator(np.outer(psi, psi.conj()))

    @staticmethod
    def maximally_mixed(n_qubits: int) -> "DensityOperator":
        dim = 2**n_qubits
        return DensityOperator(np.eye(dim, dtype=complex) / dim)

    def expectation(self, observable: np.ndarray) -> float:
        return float(np.trace(self.matrix @ observable).real)


@dataclass(frozen=True)
class OperatorState:
    """A general (possibly non-Hermitian) operator on the register.

    Carries the one-sided S rho T^dag insertions produced by derivative
    chains; no invariants beyond shape.
    """

    matrix: np.ndarray

    @property
    def n_qubits(self) -> int:
        return int(self.matrix.shape[0]).bit_length() - 1


@dataclass(frozen=True)
class NoiseChannel:
    """Global channel E(X) = p * N(X) + (1-p) * X applied after every gate.

    N is the inner channel:
      - "none":                  N = identity (p irrelevant)
      - "depolarizing":          N(X) = Tr[X] I / d
      - "dephasing":             N(X) = (X + P X P) / 2, P a global Pauli
                                 (all-Z when `pauli` is left unset)
      - "probabilistic_unitary": N(X) = sum_i w_i U_i X U_i^dag

    The action extends linearly to non-Hermitian operators and preserves
    the trace exactly.
    """

    kind: str
    p: float = 0.0
    pauli: PauliString | None = None
    unitaries: tuple[tuple[float, np.ndarray], ...] = field(default=())

    def __post_init__(self):
        if self.kind not in ("none", "depolarizing", "dephasing", "probabilistic_unitary"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"probability {self.p} outside [0, 1]")
        if self.kind == "probabilistic_unitary":
            weights = np.array([w for w, _ in self.unitaries])
            if weights.size == 0 or np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
                raise ValueError("mixture weights must be nonnegative and sum to 1")
            for _, u in self.unitaries:
                u = np.asarray(u)
                if frobenius_norm(u @ u.conj().T - np.eye(u.shape[0])) > 1e-10:
                    raise ValueError("mixture contains a non-unitary matrix")

    @staticmethod
    def none() -> "NoiseChannel":
        return NoiseChannel("none")

    @staticmethod
    def depolarizing(p: float) -> "NoiseChannel":
        return NoiseChannel("depolarizing", p)

    @staticmethod
    def dephasing(p: float, pauli: PauliString | None = None) -> "NoiseChannel":
        return NoiseChannel("dephasing", p, pauli=pauli)

    @staticmethod
    def probabilistic_unitary(
        p: float, unitaries: Sequence[tuple[float, np.ndarray]]
    ) -> "NoiseChannel":
        return NoiseChannel(
            "probabilistic_unitary",
            p,
            unitaries=tuple((float(w), np.asarray(u, dtype=complex)) for w, u in unitaries),
        )

    def inner(self, x: np.ndarray) -> np.ndarray:
        """Action of the bare channel N (before mixing with identity)."""
        x = np.asarray(x, dtype=complex)
        dim = x.shape[0]
        if self.kind == "none":
            return x.copy()
        if self.kind == "depolarizing":
            return np.trace(x) * np.eye(dim, dtype=complex) / dim
        if self.kind == "dephasing":
            pauli = self.pauli
            pm = pauli.matrix() if pauli is not None else kron_all(
                [PAULI_1Q["Z"]] * (dim.bit_length() - 1)
            )
            if pm.shape[0] != dim:
                raise ValueError("dephasing Pauli dimension mismatch")
            return (x + pm @ x @ pm) / 2
        out = np.zeros_like(x)
        for w, u in self.unitaries:
            if u.shape[0] != dim:
                raise ValueError("mixture unitary dimension mismatch")
            out += w * (u @ x @ u.conj().T)
        return out

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Full noisy map E(X) = p N(X) + (1-p) X."""
        if self.kind == "none" or self.p == 0.0:
            return np.asarray(x, dtype=complex).copy()
        return self.p * self.inner(x) + (1.0 - self.p) * np.asarray(x, dtype=complex)


def apply_channel(state: OperatorState | DensityOperator | np.ndarray,
                  channel: NoiseChannel):
    """Apply E to a state or raw operator, preserving the input's type."""
    if isinstance(state, DensityOperator):
        return DensityOperator(channel.apply(state.matrix))
    if isinstance(state, OperatorState):
        return OperatorState(channel.apply(state.matrix))
    return channel.apply(state)


class ContractivityCheck(NamedTuple):
    passed: bool
    worst_ratio: float


def check_contractivity(
    channel: NoiseChannel | Callable[[np.ndarray], np.ndarray],
    n_qubits: int,
    samples: int = 64,
    seed: int = 0,
) -> ContractivityCheck:
    """Sampled check that ||N(X)||_F <= ||X||_F on random operators.

    Draws `samples` complex-Gaussian operators and reports the worst ratio
    ||N(X)|| / ||X||.  A sampled check, not a proof.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    action = channel.inner if isinstance(channel, NoiseChannel) else channel
    dim = 2**n_qubits
    rng = np.random.default_rng(seed)
    # The identity probe goes first: it is the extremal trace-concentrating
    # direction, which random Gaussian draws almost never align with.
    probes = [np.eye(dim, dtype=complex)]
    probes += [
        rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        for _ in range(samples)
    ]
    worst = max(frobenius_norm(action(x)) / frobenius_norm(x) for x in probes)
    return ContractivityCheck(worst <= 1.0 + 1e-10, worst)


@dataclass(frozen=True)
class Hamiltonian:
    """Real-weighted sum of Pauli strings; matrix form is Hermitian."""

    terms: tuple[PauliString, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("Hamiltonian needs at least one term")
        n = self.terms[0].n_qubits
        if any(t.n_qubits != n for t in self.terms):
            raise ValueError("all terms must act on the same register")

    @property
    def n_qubits(self) -> int:
        return self.terms[0].n_qubits

    def matrix(self) -> np.ndarray:
        out = np.zeros((2**self.n_qubits,) * 2, dtype=complex)
        for t in self.terms:
            out += t.matrix()
        return out

    def to_text(self) -> str:
        return "\n".join(f"{t.coefficient:.12g} {t.labels}" for t in self.terms) + "\n"

    @staticmethod
    def from_text(text: str) -> "Hamiltonian":
        """Parse `coefficient pauli-label` lines; '#' starts a comment."""
        terms = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'coefficient label', got {raw!r}")
            terms.append(PauliString(parts[1], float(parts[0])))
        if not terms:
            raise ValueError("no Hamiltonian terms found")
        return Hamiltonian(tuple(terms))


def h2_hamiltonian() -> Hamiltonian:
    """Two-qubit hydrogen-molecule Hamiltonian (Bravyi-Kitaev form, STO-3G)."""
    return Hamiltonian(
        (
            PauliString("II", 0.2252),
            PauliString("ZI", 0.3435),
            PauliString("IZ", -0.4347),
            PauliString("ZZ", 0.5716),
            PauliString("YY", 0.0910),
            PauliString("XX", 0.0910),
        )
    )


def ground_energy(hamiltonian: Hamiltonian) -> float:
    """Smallest eigenvalue of the Hamiltonian matrix."""
    return float(np.linalg.eigvalsh(hamiltonian.matrix())[0])
