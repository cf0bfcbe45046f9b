"""Euler stepping of the variational parameters in imaginary or real time."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import Ansatz, run_circuit
from .linalg import condition_number, hermitian_exp, matrix_norm, solve_regularized
from .mky import compute_M, compute_V, compute_Y
from .states import DensityOperator, Hamiltonian, NoiseChannel

IMAGINARY = "imaginary"
REAL = "real"


class EvolutionAborted(RuntimeError):
    """The linear system became non-finite; the run cannot continue."""


@dataclass(frozen=True)
class EvolutionConfig:
    total_time: float = 5.0
    dt: float = 0.05
    svd_cutoff: float = 1e-8
    noise: NoiseChannel = field(default_factory=NoiseChannel.none)
    mode: str = IMAGINARY
    record_fidelity: bool = True

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("time step must be positive")
        if self.total_time < self.dt:
            raise ValueError("total time must cover at least one step")
        if self.mode not in (IMAGINARY, REAL):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def n_steps(self) -> int:
        return math.ceil(self.total_time / self.dt)


@dataclass(frozen=True)
class TraceRecord:
    tau: float
    thetas: np.ndarray
    theta_dot: np.ndarray
    energy: float
    cond_m: float
    norm_m: float
    norm_rhs: float
    fidelity: float | None


@dataclass(frozen=True)
class EvolutionTrace:
    mode: str
    records: tuple[TraceRecord, ...]

    @property
    def energies(self) -> np.ndarray:
        return np.array([r.energy for r in self.records])

    @property
    def final_thetas(self) -> np.ndarray:
        return self.records[-1].thetas


def step(
    ansatz: Ansatz,
    thetas,
    hamiltonian: Hamiltonian,
    cfg: EvolutionConfig,
    rho0: DensityOperator | None = None,
):
    """One Euler update theta + dt * theta_dot; returns (theta_next, record).

    The record holds the diagnostics evaluated at the input thetas, with
    tau left at 0 (the caller owns the clock).
    """
    thetas = ansatz.check_thetas(thetas)
    rho0 = rho0 or DensityOperator.computational_basis(ansatz.n_qubits)
    m = compute_M(ansatz, thetas, cfg.noise, rho0)
    if cfg.mode == IMAGINARY:
        rhs = compute_Y(ansatz, thetas, hamiltonian, cfg.noise, rho0)
    else:
        rhs = compute_V(ansatz, thetas, hamiltonian, cfg.noise, rho0)
    if not (np.all(np.isfinite(m)) and np.all(np.isfinite(rhs))):
        raise EvolutionAborted("linear system contains non-finite entries")
    theta_dot = solve_regularized(m, rhs, cfg.svd_cutoff)
    state = run_circuit(ansatz, thetas, rho0, cfg.noise)
    record = TraceRecord(
        tau=0.0,
        thetas=thetas.copy(),
        theta_dot=theta_dot,
        energy=state.expectation(hamiltonian.matrix()),
        cond_m=condition_number(m),
        norm_m=matrix_norm(m),
        norm_rhs=float(np.linalg.norm(rhs)),
        fidelity=None,
    )
    return thetas + cfg.dt * theta_dot, record


def run(
    ansatz: Ansatz,
    theta0,
    hamiltonian: Hamiltonian,
    cfg: EvolutionConfig,
    rho0: DensityOperator | None = None,
) -> EvolutionTrace:
    """Iterate Euler steps, recording diagnostics at every grid time.

    The trace has n_steps + 1 records (tau = 0, dt, ..., n_steps*dt); each
    record's theta_dot is the rate computed at that record's thetas.  In
    imaginary mode the fidelity column compares the circuit state against
    the exactly evolved initial variational state.
    """
    thetas = ansatz.check_thetas(theta0)
    rho0 = rho0 or DensityOperator.computational_basis(ansatz.n_qubits)
    reference = run_circuit(ansatz, thetas, rho0) if (
        cfg.record_fidelity and cfg.mode == IMAGINARY
    ) else None
    records = []
    for i in range(cfg.n_steps + 1):
        tau = i * cfg.dt
        next_thetas, record = step(ansatz, thetas, hamiltonian, cfg, rho0)
        fidelity = None
        if reference is not None:
            exact = exact_imaginary_evolution(hamiltonian, reference, tau)
            fidelity = uhlmann_fidelity(run_circuit(ansatz, thetas, rho0, cfg.noise), exact)
        records.append(
            TraceRecord(
                tau=tau,
                thetas=record.thetas,
                theta_dot=record.theta_dot,
                energy=record.energy,
                cond_m=record.cond_m,
                norm_m=record.norm_m,
                norm_rhs=record.norm_rhs,
                fidelity=fidelity,
            )
        )
        if i < cfg.n_steps:
            thetas = next_thetas
    return EvolutionTrace(mode=cfg.mode, records=tuple(records))


def exact_imaginary_evolution(
    hamiltonian: Hamiltonian, rho0: DensityOperator, tau: float
) -> DensityOperator:
    """exp(-H tau) rho0 exp(-H tau), renormalized to unit trace.

    The propagator is shifted by the ground energy before exponentiation so
    large tau stays well conditioned.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    h = hamiltonian.matrix()
    shift = float(np.linalg.eigvalsh(h)[0])
    k = hermitian_exp(h - shift * np.eye(h.shape[0]), -tau)
    out = k @ rho0.matrix @ k
    norm = np.trace(out).real
    if not np.isfinite(norm) or norm < 1e-250:
        raise ValueError("normalization vanished: initial state has no support")
    return DensityOperator(out / norm)


def uhlmann_fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clipped to [0, 1]."""
    w, vecs = np.linalg.eigh(rho.matrix)
    sqrt_rho = (vecs * np.sqrt(np.clip(w, 0.0, None))) @ vecs.conj().T
    inner = sqrt_rho @ sigma.matrix @ sqrt_rho
    eigs = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return float(min(1.0, np.sum(np.sqrt(eigs)) ** 2))
