"""Experiment configuration: one JSON document, with CLI flags layered on top.

The merged document (file fields plus flag overrides) is what gets hashed
into every output's metadata line, so a record fully identifies its run.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .circuits import Ansatz, resolve_ansatz
from .linalg import NORM_KINDS
from .states import Hamiltonian, NoiseChannel, PauliString, h2_hamiltonian


class ConfigError(ValueError):
    """The configuration document or flags cannot be used."""


DEFAULT_P_VALUES = [0.0, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.15, 0.2]
DEFAULT_N_VALUES = [5, 6, 10, 12, 14]
DEFAULT_DELTA_VALUES = [0.002, 0.005, 0.01, 0.02, 0.03, 0.04, 0.06, 0.08, 0.1]


def canonical_noise(spec: dict | None) -> dict:
    """Normalized noise spec: p = 0 and 'none' collapse to the same record."""
    if not spec or spec.get("kind", "none") == "none" or float(spec.get("p", 0.0)) == 0.0:
        return {"kind": "none"}
    out = {"kind": str(spec["kind"]), "p": float(spec["p"])}
    if out["kind"] == "dephasing" and spec.get("pauli"):
        out["pauli"] = str(spec["pauli"])
    if out["kind"] == "probabilistic_unitary":
        out["paulis"] = [[str(label), float(w)] for label, w in spec.get("paulis", [])]
    return out


def resolve_hamiltonian(spec: str) -> Hamiltonian:
    """Preset name ('h2') or path to a Hamiltonian text file."""
    if spec == "h2":
        return h2_hamiltonian()
    try:
        return Hamiltonian.from_text(Path(spec).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot load Hamiltonian {spec!r}: {exc}") from exc


def build_noise(spec: dict | None) -> NoiseChannel:
    if not spec:
        return NoiseChannel.none()
    kind = spec.get("kind", "none")
    p = float(spec.get("p", 0.0))
    try:
        if kind == "none":
            return NoiseChannel.none()
        if kind == "depolarizing":
            return NoiseChannel.depolarizing(p)
        if kind == "dephasing":
            pauli = spec.get("pauli")
            return NoiseChannel.dephasing(p, PauliString(pauli) if pauli else None)
        if kind == "probabilistic_unitary":
            mixture = [
                (float(w), PauliString(label).matrix())
                for label, w in spec.get("paulis", [])
            ]
            return NoiseChannel.probabilistic_unitary(p, mixture)
    except ValueError as exc:
        raise ConfigError(f"bad noise spec: {exc}") from exc
    raise ConfigError(f"unknown noise kind {kind!r}")


@dataclass
class ExperimentConfig:
    ansatz: str = "five_param"
    n_qubits: int = 2
    thetas: list[float] | None = None
    hamiltonian: str = "h2"
    noise: dict = field(default_factory=dict)
    p: float | None = None
    n: int | None = None
    p_values: list[float] = field(default_factory=lambda: list(DEFAULT_P_VALUES))
    n_values: list[int] = field(default_factory=lambda: list(DEFAULT_N_VALUES))
    delta: float = 0.04
    delta_values: list[float] = field(default_factory=lambda: list(DEFAULT_DELTA_VALUES))
    cond_m: float | None = None
    norm_m: float | None = None
    norm_y: float | None = None
    mode: str = "imaginary"
    total_time: float = 5.0
    dt: float = 0.05
    svd_cutoff: float = 1e-8
    seed: int = 0
    norm: str = "frobenius"
    jobs: int = 1
    verify: bool = False

    def __post_init__(self):
        if self.norm not in NORM_KINDS:
            raise ConfigError(f"norm must be one of {NORM_KINDS}")
        if not self.p_values or not self.n_values or not self.delta_values:
            raise ConfigError("sweep grids must be nonempty")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")

    def document(self) -> dict:
        """Effective configuration as a plain JSON-ready dict (for hashing)."""
        return {
            "ansatz": self.ansatz,
            "n_qubits": self.n_qubits,
            "thetas": self.thetas,
            "hamiltonian": self.hamiltonian,
            "noise": canonical_noise(self.noise),
            "p": self.p,
            "n": self.n,
            "p_values": self.p_values,
            "n_values": self.n_values,
            "delta": self.delta,
            "delta_values": self.delta_values,
            "cond_m": self.cond_m,
            "norm_m": self.norm_m,
            "norm_y": self.norm_y,
            "mode": self.mode,
            "total_time": self.total_time,
            "dt": self.dt,
            "svd_cutoff": self.svd_cutoff,
            "seed": self.seed,
            "norm": self.norm,
            "verify": self.verify,
        }

    def build_ansatz(self) -> Ansatz:
        try:
            return resolve_ansatz(self.ansatz)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot resolve ansatz {self.ansatz!r}: {exc}") from exc

    def build_hamiltonian(self) -> Hamiltonian:
        return resolve_hamiltonian(self.hamiltonian)

    def build_noise(self) -> NoiseChannel:
        return build_noise(self.noise)

    def resolve_thetas(self, ansatz: Ansatz) -> np.ndarray:
        """Explicit parameter list, or a seeded uniform draw on [0, 2*pi)."""
        if self.thetas is not None:
            thetas = np.asarray(self.thetas, dtype=float)
            if thetas.shape != (ansatz.n_parameters,):
                raise ConfigError(
                    f"config lists {thetas.size} thetas but the ansatz has "
                    f"{ansatz.n_parameters} parameters"
                )
            return thetas
        rng = np.random.default_rng([self.seed, ansatz.n_parameters])
        return rng.uniform(0.0, 2.0 * np.pi, ansatz.n_parameters)


_FIELDS = set(ExperimentConfig.__dataclass_fields__)


def load_config(path: str | None, overrides: dict | None = None) -> ExperimentConfig:
    doc = {}
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")
    unknown = set(doc) - _FIELDS
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    for key, value in (overrides or {}).items():
        if value is not None:
            doc[key] = value
    try:
        return ExperimentConfig(**doc)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
