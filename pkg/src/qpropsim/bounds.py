"""Closed-form propagation-error bounds for the perturbed system M theta_dot = Y.

Conventions: N is the number of circuit parameters (= noise insertions per
register pass), p the per-gate noise probability, and cond/norms are taken in
the Frobenius norm unless stated otherwise.  Functions raise
BoundValidityError where a bound's validity constraint fails instead of
returning a misleading number; divergent-but-well-defined limits (p = 1)
come back as inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class BoundValidityError(ValueError):
    """The requested bound is outside its validity constraint."""


class DeltaTooLargeError(BoundValidityError):
    """The cross-term budget delta is too large for this N and ||M||."""


def _check_probability(p: float):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")


def theorem1_bound(cond_m: float, norm_m: float, norm_y: float, n: int, p: float) -> float:
    """Tight relative-error bound for contractive probabilistic noise.

    cond(M) * [ (1-(1-p)^{2N})(1 + N/(2||M||))
              + (1-(1-p)^N) (1 + sqrt(N)/sqrt(2||Y||)) ]

    Valid for p up to theorem1_pmax; gating is the caller's responsibility.
    """
    _check_probability(p)
    if cond_m < 1 or norm_m <= 0 or norm_y <= 0 or n < 1:
        raise ValueError("need cond_m >= 1, positive norms, and N >= 1")
    decay_m = 1.0 - (1.0 - p) ** (2 * n)
    decay_y = 1.0 - (1.0 - p) ** n
    term_m = decay_m * (1.0 + n / (2.0 * norm_m))
    term_y = decay_y * (1.0 + math.sqrt(n) / math.sqrt(2.0 * norm_y))
    return cond_m * (term_m + term_y)


def theorem1_pmax(norm_m: float, n: int, delta: float) -> float:
    """Largest admissible noise probability for the tight bound.

    p_max = 1 - (1 - 2 N^2 delta / (N + 2||M||))^{1/(2N)}; the radicand must
    stay positive, otherwise the cross term Delta-M * Delta-theta_dot can no
    longer be neglected and DeltaTooLargeError is raised.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if norm_m <= 0 or n < 1:
        raise ValueError("need positive ||M|| and N >= 1")
    radicand = 1.0 - (2.0 * n**2 * delta) / (n + 2.0 * norm_m)
    if radicand <= 0.0:
        raise DeltaTooLargeError(
            f"delta={delta} too large for N={n}, ||M||={norm_m}: radicand {radicand:.3e} <= 0"
        )
    return 1.0 - radicand ** (1.0 / (2 * n))


def theorem2_relative_error(n: int, p: float) -> float:
    """Exact relative error under global depolarizing noise.

    ||Delta theta_dot|| / ||theta_dot|| = (1-(1-p)^N) / (1-p)^N, independent
    of the Hamiltonian and circuit structure.  Diverges (inf) at p = 1.
    """
    _check_probability(p)
    if n < 1:
        raise ValueError("need N >= 1")
    if p == 1.0:
        return math.inf
    survive = (1.0 - p) ** n
    return (1.0 - survive) / survive


def higham_bound(cond_m: float, rel_dm: float, rel_dy: float) -> float:
    """Perturbed-linear-system inequality.

    cond(M) / (1 - cond(M) * relDM) * (relDM + relDY); invalid when
    cond(M) * relDM >= 1 (the perturbation may no longer be invertible).
    """
    if cond_m < 1:
        raise ValueError("condition number is at least 1")
    if rel_dm < 0 or rel_dy < 0:
        raise ValueError("relative perturbations must be nonnegative")
    denom = 1.0 - cond_m * rel_dm
    if denom <= 0.0:
        raise BoundValidityError(
            f"cond(M)*relDM = {cond_m * rel_dm:.6g} >= 1: inequality not applicable"
        )
    return cond_m / denom * (rel_dm + rel_dy)


def loose_theorem1_bound(
    cond_m: float, norm_m: float, norm_y: float, n: int, p: float
) -> float:
    """Unconstrained-noise bound: the tight bracket fed through higham_bound.

    Valid only while cond(M) <= 2||M|| / ((1-(1-p)^{2N})(N + 2||M||)); above
    that cap the denominator is nonpositive and BoundValidityError is raised.
    Always at least as large as theorem1_bound on its validity domain.
    """
    _check_probability(p)
    if cond_m < 1 or norm_m <= 0 or norm_y <= 0 or n < 1:
        raise ValueError("need cond_m >= 1, positive norms, and N >= 1")
    decay_m = 1.0 - (1.0 - p) ** (2 * n)
    decay_y = 1.0 - (1.0 - p) ** n
    rel_dm = decay_m * (1.0 + n / (2.0 * norm_m))
    rel_dy = decay_y * (1.0 + math.sqrt(n) / math.sqrt(2.0 * norm_y))
    return higham_bound(cond_m, rel_dm, rel_dy)


def elementwise_caps(n: int, p: float) -> tuple[float, float]:
    """Per-entry deviation caps from the rescaled ideal quantities.

    |M_err - (1-p)^{2N} M| <= (1-(1-p)^{2N}) / 2 entrywise, and
    |Y_err - (1-p)^N  Y|  <= (1-(1-p)^N) / sqrt(2) entrywise.
    """
    _check_probability(p)
    if n < 1:
        raise ValueError("need N >= 1")
    cap_m = 0.5 * (1.0 - (1.0 - p) ** (2 * n))
    cap_y = (1.0 - (1.0 - p) ** n) / math.sqrt(2.0)
    return cap_m, cap_y


def pascal_coefficients(n: int) -> list[int]:
    """Alternating-sign binomial tail: entry j is (-1)^j C(n+1, j+1).

    Row n+2 of Pascal's triangle with the leading 1 dropped and signs
    alternating; the entries always sum to 1.  These are the polynomial
    coefficients multiplying p in the branch-weight expansion of a circuit
    with noise after every gate.
    """
    if n < 0:
        raise ValueError("need n >= 0")
    return [(-1) ** j * math.comb(n + 1, j + 1) for j in range(n + 1)]


@dataclass(frozen=True)
class BoundReport:
    """All bound evaluations for one (p, N, cond, norms, delta) setting.

    theorem1_bound is None when p exceeds theorem1_pmax (or p_max itself is
    invalid); higham_bound here is the loose composed bound and is None when
    its condition-number cap fails.
    """

    p: float
    n: int
    cond_m: float
    norm_m: float
    norm_y: float
    delta: float
    theorem1_pmax: float | None
    theorem1_bound: float | None
    theorem2_relative_error: float
    higham_bound: float | None
    elementwise_cap_m: float
    elementwise_cap_y: float


def build_bound_report(
    p: float, n: int, cond_m: float, norm_m: float, norm_y: float, delta: float
) -> BoundReport:
    try:
        pmax = theorem1_pmax(norm_m, n, delta)
    except DeltaTooLargeError:
        pmax = None
    t1 = None
    if pmax is not None and p <= pmax:
        t1 = theorem1_bound(cond_m, norm_m, norm_y, n, p)
    try:
        loose = loose_theorem1_bound(cond_m, norm_m, norm_y, n, p)
    except BoundValidityError:
        loose = None
    cap_m, cap_y = elementwise_caps(n, p)
    return BoundReport(
        p=p,
        n=n,
        cond_m=cond_m,
        norm_m=norm_m,
        norm_y=norm_y,
        delta=delta,
        theorem1_pmax=pmax,
        theorem1_bound=t1,
        theorem2_relative_error=theorem2_relative_error(n, p),
        higham_bound=loose,
        elementwise_cap_m=cap_m,
        elementwise_cap_y=cap_y,
    )
