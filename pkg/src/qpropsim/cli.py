"""Command-line front end.

Subcommands: matrices | sweep-depolarizing | sweep-theorem1 | constraint |
evolve | bounds.  Exit codes: 0 success, 2 configuration problem, 3 numeric
failure.  All outputs are deterministic under a fixed seed and independent
of --jobs: sweep points are computed from per-point seeds and sorted before
serialization.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .bounds import (
    BoundValidityError,
    DeltaTooLargeError,
    build_bound_report,
    theorem1_bound,
    theorem1_pmax,
    theorem2_relative_error,
)
from .circuits import Ansatz, random_ansatz
from .config import (
    ConfigError,
    ExperimentConfig,
    canonical_noise,
    load_config,
    resolve_hamiltonian,
)
from .evolution import EvolutionAborted, EvolutionConfig, run
from .linalg import condition_number, solve_regularized
from .mky import InternalConsistencyError, compute_M, compute_Y, compute_system
from .states import NoiseChannel
from .tableio import INVALID, config_hash, render_csv, render_json

NUMERIC_ERRORS = (
    InternalConsistencyError,
    EvolutionAborted,
    BoundValidityError,
    np.linalg.LinAlgError,
    FloatingPointError,
    ValueError,
)


# --- depolarizing sweep -------------------------------------------------------


def _depolarizing_instance(n_qubits: int, n_params: int, seed: int):
    """Seeded random all-parameterized instance with a well-posed system.

    Redraws (deterministically) until M is nonsingular and theta_dot has a
    usable magnitude, so measured relative errors are well defined.
    """
    rng = np.random.default_rng([seed, n_params])
    for _ in range(64):
        ansatz = random_ansatz(n_qubits, n_params, rng)
        thetas = rng.uniform(0.0, 2.0 * np.pi, n_params)
        m = compute_M(ansatz, thetas)
        if condition_number(m, "spectral") > 1e9:
            continue
        return ansatz, thetas
    raise InternalConsistencyError(
        f"could not draw a nonsingular instance with {n_params} parameters"
    )


def _measure_depolarizing_point(args) -> tuple[int, float, float]:
    ansatz_args, thetas, p, hamiltonian_name = args
    hamiltonian = resolve_hamiltonian(hamiltonian_name)
    ansatz = Ansatz(*ansatz_args)
    ideal_m = compute_M(ansatz, thetas)
    ideal_y = compute_Y(ansatz, thetas, hamiltonian)
    noisy = NoiseChannel.depolarizing(p)
    err_m = compute_M(ansatz, thetas, noisy)
    err_y = compute_Y(ansatz, thetas, hamiltonian, noisy)
    theta_dot = solve_regularized(ideal_m, ideal_y)
    theta_dot_err = solve_regularized(err_m, err_y)
    measured = np.linalg.norm(theta_dot_err - theta_dot) / np.linalg.norm(theta_dot)
    return ansatz.n_parameters, p, float(measured)


def cmd_sweep_depolarizing(cfg: ExperimentConfig) -> str:
    n_values = sorted(set(cfg.n_values))
    p_values = sorted(set(cfg.p_values))
    header = ["N", "p", "relative_error"]
    rows = []
    if cfg.verify:
        header += ["measured", "abs_diff"]
        instances = {
            n: _depolarizing_instance(cfg.n_qubits, n, cfg.seed) for n in n_values
        }
        tasks = [
            ((instances[n][0].n_qubits, instances[n][0].gates), instances[n][1], p, cfg.hamiltonian)
            for n in n_values
            for p in p_values
        ]
        if cfg.jobs > 1:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                results = list(pool.map(_measure_depolarizing_point, tasks))
        else:
            results = [_measure_depolarizing_point(t) for t in tasks]
        for n, p, measured in sorted(results, key=lambda r: (r[0], r[1])):
            formula = theorem2_relative_error(n, p)
            rows.append([n, p, formula, measured, abs(measured - formula)])
    else:
        for n in n_values:
            for p in p_values:
                rows.append([n, p, theorem2_relative_error(n, p)])
    return render_csv(header, rows, config_hash(cfg.document()), cfg.seed)


# --- bound sweeps --------------------------------------------------------------


def _fixed_system_inputs(cfg: ExperimentConfig) -> tuple[float, float, float]:
    """cond/norm inputs for bound evaluation: from config, else from the ansatz."""
    if None not in (cfg.cond_m, cfg.norm_m, cfg.norm_y):
        return cfg.cond_m, cfg.norm_m, cfg.norm_y
    ansatz = cfg.build_ansatz()
    system = compute_system(
        ansatz,
        cfg.resolve_thetas(ansatz),
        cfg.build_hamiltonian(),
        norm_kind=cfg.norm,
    )
    return (
        cfg.cond_m if cfg.cond_m is not None else system.cond_m,
        cfg.norm_m if cfg.norm_m is not None else system.norm_m,
        cfg.norm_y if cfg.norm_y is not None else system.norm_y,
    )


def cmd_sweep_theorem1(cfg: ExperimentConfig) -> str:
    cond_m, norm_m, norm_y = _fixed_system_inputs(cfg)
    rows = []
    for n in sorted(set(cfg.n_values)):
        try:
            pmax = theorem1_pmax(norm_m, n, cfg.delta)
        except DeltaTooLargeError:
            rows.append([n, INVALID, INVALID])
            continue
        for p in sorted(set(cfg.p_values)):
            if p <= pmax:
                rows.append([n, p, theorem1_bound(cond_m, norm_m, norm_y, n, p)])
    return render_csv(["N", "p", "bound"], rows, config_hash(cfg.document()), cfg.seed)


def cmd_constraint(cfg: ExperimentConfig) -> str:
    norm_m = cfg.norm_m
    if norm_m is None:
        _, norm_m, _ = _fixed_system_inputs(cfg)
    rows = []
    for n in sorted(set(cfg.n_values)):
        for delta in sorted(set(cfg.delta_values)):
            try:
                rows.append([n, delta, theorem1_pmax(norm_m, n, delta)])
            except DeltaTooLargeError:
                rows.append([n, delta, INVALID])
    return render_csv(["N", "delta", "p_max"], rows, config_hash(cfg.document()), cfg.seed)


# --- single-shot commands -------------------------------------------------------


def cmd_matrices(cfg: ExperimentConfig) -> str:
    ansatz = cfg.build_ansatz()
    thetas = cfg.resolve_thetas(ansatz)
    system = compute_system(
        ansatz,
        thetas,
        cfg.build_hamiltonian(),
        noise=cfg.build_noise(),
        norm_kind=cfg.norm,
        include_v=True,
    )
    document = {
        "n_qubits": ansatz.n_qubits,
        "n_parameters": ansatz.n_parameters,
        "thetas": list(thetas),
        "noise": canonical_noise(cfg.noise),
        "M": [list(row) for row in system.m],
        "Y": list(system.y),
        "V": list(system.v),
        "cond_M": {
            "frobenius": condition_number(system.m, "frobenius"),
            "spectral": condition_number(system.m, "spectral"),
        },
        "norm_M": system.norm_m,
        "norm_Y": system.norm_y,
        "norm_kind": system.norm_kind,
        "seed": cfg.seed,
        "config_hash": config_hash(cfg.document()),
    }
    return render_json(document)


def cmd_bounds(cfg: ExperimentConfig) -> str:
    cond_m, norm_m, norm_y = _fixed_system_inputs(cfg)
    n = cfg.n if cfg.n is not None else cfg.build_ansatz().n_parameters
    p = cfg.p if cfg.p is not None else float(cfg.noise.get("p", 0.0))
    report = build_bound_report(p, n, cond_m, norm_m, norm_y, cfg.delta)
    document = {
        "p": report.p,
        "N": report.n,
        "cond_M": report.cond_m,
        "norm_M": report.norm_m,
        "norm_Y": report.norm_y,
        "delta": report.delta,
        "theorem1_pmax": report.theorem1_pmax,
        "theorem1_bound": report.theorem1_bound,
        "theorem2_relative_error": report.theorem2_relative_error,
        "higham_bound": report.higham_bound,
        "elementwise_cap_M": report.elementwise_cap_m,
        "elementwise_cap_Y": report.elementwise_cap_y,
        "seed": cfg.seed,
        "config_hash": config_hash(cfg.document()),
    }
    return render_json(document)


def cmd_evolve(cfg: ExperimentConfig) -> str:
    ansatz = cfg.build_ansatz()
    thetas = cfg.resolve_thetas(ansatz)
    evo = EvolutionConfig(
        total_time=cfg.total_time,
        dt=cfg.dt,
        svd_cutoff=cfg.svd_cutoff,
        noise=cfg.build_noise(),
        mode=cfg.mode,
    )
    trace = run(ansatz, thetas, cfg.build_hamiltonian(), evo)
    header = (
        ["tau"]
        + [f"theta_{k}" for k in range(1, ansatz.n_parameters + 1)]
        + ["energy", "cond_M", "norm_M", "norm_Y", "fidelity"]
    )
    rows = [
        [r.tau, *r.thetas, r.energy, r.cond_m, r.norm_m, r.norm_rhs, r.fidelity]
        for r in trace.records
    ]
    return render_csv(header, rows, config_hash(cfg.document()), cfg.seed)


COMMANDS = {
    "matrices": cmd_matrices,
    "sweep-depolarizing": cmd_sweep_depolarizing,
    "sweep-theorem1": cmd_sweep_theorem1,
    "constraint": cmd_constraint,
    "evolve": cmd_evolve,
    "bounds": cmd_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpropsim",
        description="Noisy variational time-evolution simulator and bound analyzer",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", help="JSON experiment configuration")
        cmd.add_argument("--out", help="output path (stdout when omitted)")
        cmd.add_argument("--seed", type=int, help="override the config seed")
        cmd.add_argument("--norm", choices=["frobenius", "spectral"])
        cmd.add_argument("--verify", action="store_true", default=None,
                         help="recompute sweep points by full simulation")
        cmd.add_argument("--jobs", type=int, help="parallel workers for sweeps")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(
            args.config,
            overrides={
                "seed": args.seed,
                "norm": args.norm,
                "verify": args.verify,
                "jobs": args.jobs,
            },
        )
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        output = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
