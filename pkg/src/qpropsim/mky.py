"""Exact evaluation of the variational linear system M theta_dot = Y (or V).

All quantities are computed by evolving explicit 2^n x 2^n operators through
noise-inserted derivative chains: gates 1..k-1 each followed by the channel,
the one-sided S rho T^dag insertion of gate k followed by the channel, then
gates k+1..N each followed by the channel.

M pairs two such chains, Y pairs a chain with {H, rho} where rho is the
noise-free circuit output, and V pairs a chain with -i[H, rho].  Pairing
against the noise-free rho is what makes the noisy M and Y collapse to exact
(1-p)^{2N} and (1-p)^N rescalings under global depolarizing noise: every
branch in which the channel fires enters both alternating-sign derivative
terms identically and cancels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Ansatz, derivative_decomposition, gate_unitary, run_circuit
from .linalg import condition_number, matrix_norm
from .states import DensityOperator, Hamiltonian, NoiseChannel, OperatorState

# Imaginary residue above this is an internal-consistency failure: the
# r-weighted chain sums must stay Hermitian under any valid channel.
IMAG_RESIDUE_ATOL = 1e-12


class InternalConsistencyError(RuntimeError):
    """A quantity that must be real came out complex beyond tolerance."""


def _default_rho0(ansatz: Ansatz) -> DensityOperator:
    return DensityOperator.computational_basis(ansatz.n_qubits)


def _prefix_states(ansatz, thetas, noise, rho0):
    """rho_tilde_j for j = 0..N-1: state after gates 1..j, channel after each."""
    states = [rho0.matrix]
    for g, th in zip(ansatz.gates[:-1], thetas[:-1]):
        u = gate_unitary(g, th, ansatz.n_qubits)
        states.append(noise.apply(u @ states[-1] @ u.conj().T))
    return states


def _push_suffix(x, ansatz, thetas, noise, start):
    """Apply gates start..N (0-based) to x, channel after each."""
    for g, th in zip(ansatz.gates[start:], thetas[start:]):
        u = gate_unitary(g, th, ansatz.n_qubits)
        x = noise.apply(u @ x @ u.conj().T)
    return x


def chain_with_insertion(
    ansatz: Ansatz,
    thetas,
    k: int,
    term: int,
    noise: NoiseChannel = NoiseChannel.none(),
    rho0: DensityOperator | None = None,
) -> OperatorState:
    """Single derivative chain for parameter k (1-based) and one S/T term.

    `term` indexes the gate's derivative decomposition (0 or 1).
    """
    thetas = ansatz.check_thetas(thetas)
    if not 1 <= k <= ansatz.n_parameters:
        raise IndexError(f"parameter index {k} outside 1..{ansatz.n_parameters}")
    rho0 = rho0 or _default_rho0(ansatz)
    prefix = _prefix_states(ansatz, thetas, noise, rho0)[k - 1]
    decomp = derivative_decomposition(ansatz.gates[k - 1], thetas[k - 1], ansatz.n_qubits)
    _, s, t = decomp.terms[term]
    x = noise.apply(s @ prefix @ t.conj().T)
    return OperatorState(_push_suffix(x, ansatz, thetas, noise, k))


def derivative_chains(
    ansatz: Ansatz,
    thetas,
    noise: NoiseChannel = NoiseChannel.none(),
    rho0: DensityOperator | None = None,
) -> list[np.ndarray]:
    """r-weighted chain sums G_k = sum_i r_i * chain(k, i), one per parameter.

    Without noise G_k is exactly d rho / d theta_k.  The per-term insertions
    are summed before the suffix is applied; the channel is linear, so this
    matches pushing each term separately.
    """
    thetas = ansatz.check_thetas(thetas)
    rho0 = rho0 or _default_rho0(ansatz)
    prefixes = _prefix_states(ansatz, thetas, noise, rho0)
    chains = []
    for pos, (g, th) in enumerate(zip(ansatz.gates, thetas)):
        decomp = derivative_decomposition(g, th, ansatz.n_qubits)
        x = noise.apply(decomp.apply(prefixes[pos]))
        chains.append(_push_suffix(x, ansatz, thetas, noise, pos + 1))
    return chains


def _assert_real(values: np.ndarray, what: str) -> np.ndarray:
    residue = np.abs(values.imag).max() if values.size else 0.0
    if residue > IMAG_RESIDUE_ATOL:
        raise InternalConsistencyError(f"{what} has imaginary residue {residue:.3e}")
    return values.real


def compute_M(
    ansatz: Ansatz,
    thetas,
    noise: NoiseChannel = NoiseChannel.none(),
    rho0: DensityOperator | None = None,
) -> np.ndarray:
    """Gram matrix M[k,q] = Re Tr[G_k^dag G_q] of the derivative chains."""
    chains = derivative_chains(ansatz, thetas, noise, rho0)
    n = len(chains)
    m = np.empty((n, n), dtype=complex)
    for a in range(n):
        for b in range(a, n):
            m[a, b] = m[b, a] = np.vdot(chains[a], chains[b])  # Tr[G_a^dag G_b]
    m = _assert_real(m, "M")
    return (m + m.T) / 2


def compute_Y(
    ansatz: Ansatz,
    thetas,
    hamiltonian: Hamiltonian,
    noise: NoiseChannel = NoiseChannel.none(),
    rho0: DensityOperator | None = None,
) -> np.ndarray:
    """Imaginary-time driving vector Y[k] = -Tr[G_k (rho H + H rho)].

    rho is the noise-free circuit output; only the chains carry the noise.
    """
    thetas = ansatz.check_thetas(thetas)
    rho0 = rho0 or _default_rho0(ansatz)
    if hamiltonian.n_qubits != ansatz.n_qubits:
        raise ValueError("Hamiltonian dimension does not match the ansatz")
    h = hamiltonian.matrix()
    rho = run_circuit(ansatz, thetas, rho0).matrix
    anti = rho @ h + h @ rho
    chains = derivative_chains(ansatz, thetas, noise, rho0)
    y = np.array([-np.trace(g @ anti) for g in chains])
    return _assert_real(y, "Y")


def compute_V(
    ansatz: Ansatz,
    thetas,
    hamiltonian: Hamiltonian,
    noise: NoiseChannel = NoiseChannel.none(),
    rho0: DensityOperator | None = None,
) -> np.ndarray:
    """Real-time driving vector V[k] = Tr[G_k (-i)[H, rho]], noise-free rho."""
    thetas = ansatz.check_thetas(thetas)
    rho0 = rho0 or _default_rho0(ansatz)
    if hamiltonian.n_qubits != ansatz.n_qubits:
        raise ValueError("Hamiltonian dimension does not match the ansatz")
    h = hamiltonian.matrix()
    rho = run_circuit(ansatz, thetas, rho0).matrix
    comm = -1j * (h @ rho - rho @ h)
    chains = derivative_chains(ansatz, thetas, noise, rho0)
    v = np.array([np.trace(g @ comm) for g in chains])
    return _assert_real(v, "V")


# --- brute-force oracles ------------------------------------------------------


def finite_difference_derivative(
    ansatz: Ansatz,
    thetas,
    k: int,
    rho0: DensityOperator | None = None,
    step: float = 1e-5,
) -> np.ndarray:
    """Central finite difference of the noiseless circuit state in theta_k."""
    thetas = ansatz.check_thetas(thetas)
    rho0 = rho0 or _default_rho0(ansatz)
    up = thetas.copy()
    dn = thetas.copy()
    up[k - 1] += step
    dn[k - 1] -= step
    plus = run_circuit(ansatz, up, rho0).matrix
    minus = run_circuit(ansatz, dn, rho0).matrix
    return (plus - minus) / (2 * step)


def gram_oracle_M(
    ansatz: Ansatz,
    thetas,
    rho0: DensityOperator | None = None,
    step: float = 1e-5,
) -> np.ndarray:
    """Brute-force noiseless M from finite-difference state derivatives."""
    derivs = [
        finite_difference_derivative(ansatz, thetas, k, rho0, step)
        for k in range(1, ansatz.n_parameters + 1)
    ]
    n = len(derivs)
    m = np.empty((n, n))
    for a in range(n):
        for b in range(a, n):
            m[a, b] = m[b, a] = np.trace(derivs[a].conj().T @ derivs[b]).real
    return m


@dataclass(frozen=True)
class MYSystem:
    """The assembled linear system plus solver-relevant diagnostics."""

    m: np.ndarray
    y: np.ndarray
    v: np.ndarray | None
    cond_m: float
    norm_m: float
    norm_y: float
    norm_kind: str


def compute_system(
    ansatz: Ansatz,
    thetas,
    hamiltonian: Hamiltonian,
    noise: NoiseChannel = NoiseChannel.none(),
    norm_kind: str = "frobenius",
    rho0: DensityOperator | None = None,
    include_v: bool = False,
) -> MYSystem:
    m = compute_M(ansatz, thetas, noise, rho0)
    y = compute_Y(ansatz, thetas, hamiltonian, noise, rho0)
    v = compute_V(ansatz, thetas, hamiltonian, noise, rho0) if include_v else None
    return MYSystem(
        m=m,
        y=y,
        v=v,
        cond_m=condition_number(m, norm_kind),
        norm_m=matrix_norm(m, norm_kind),
        norm_y=float(np.linalg.norm(y)),
        norm_kind=norm_kind,
    )
