"""Shared test utilities: seeded random states, channels, and instances."""

from __future__ import annotations

import numpy as np

from qpropsim import (
    Hamiltonian,
    NoiseChannel,
    PauliString,
    compute_M,
    condition_number,
    random_ansatz,
)

PAULI_AXES = "IXYZ"


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Ginibre-random mixed state."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_operator(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_pauli_labels(rng: np.random.Generator, n_qubits: int) -> str:
    return "".join(PAULI_AXES[i] for i in rng.integers(0, 4, n_qubits))


def random_pauli_mixture(rng: np.random.Generator, n_qubits: int, p: float,
                         n_terms: int = 3) -> NoiseChannel:
    weights = rng.random(n_terms)
    weights /= weights.sum()
    mixture = [
        (w, PauliString(random_pauli_labels(rng, n_qubits)).matrix())
        for w in weights
    ]
    return NoiseChannel.probabilistic_unitary(p, mixture)


def random_hamiltonian(rng: np.random.Generator, n_qubits: int,
                       n_terms: int = 4, scale: float = 0.6) -> Hamiltonian:
    terms = tuple(
        PauliString(random_pauli_labels(rng, n_qubits), rng.uniform(-scale, scale))
        for _ in range(n_terms)
    )
    return Hamiltonian(terms)


def well_posed_instance(rng: np.random.Generator, n_qubits: int, n_params: int,
                        max_cond: float = 1e8, rho0=None):
    """Random all-parameterized ansatz whose noiseless M is nonsingular.

    From the pure ground state many random circuits carry dead directions
    (a leading RZ, repeated commuting gates), so callers wanting large N
    should pass a full-rank rho0.
    """
    for _ in range(200):
        ansatz = random_ansatz(n_qubits, n_params, rng)
        thetas = rng.uniform(0.0, 2.0 * np.pi, n_params)
        if condition_number(compute_M(ansatz, thetas, rho0=rho0), "spectral") < max_cond:
            return ansatz, thetas
    raise AssertionError(
        f"no well-posed instance found (n_qubits={n_qubits}, N={n_params})"
    )
