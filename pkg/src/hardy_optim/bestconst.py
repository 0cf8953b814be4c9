"""Feasibility of the reduced equation and the best improvement constant.

A multiplier c is feasible when y'' + y'/r + c v(r) y = 0 admits a positive
solution on (0, R).  Numerically:

  * non-critical potentials (sigma < 2): shoot the recessive solution from
    the singular endpoint; feasibility <=> no interior zero.  A zero within
    ``boundary_grace`` of R counts as the boundary case (the J0 profile
    vanishes exactly at R at the optimal constant and is still positive on
    the open interval);
  * critical / strongly singular potentials: work in the log domain.  A
    non-oscillatory Euler certificate plus a positive principal-branch sweep
    certifies feasibility; an oscillatory certificate (or an actual zero of
    the principal branch) certifies infeasibility; otherwise the answer is
    indeterminate at the horizon and said so.

Feasibility is monotone in c (Sturm), so the best constant is bisected.  On
critical potentials the bisection can run into the indeterminate band around
the threshold; the band edges are then refined separately and reported, and
``c_best`` is the largest certified-feasible multiplier.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .bessel import bessel_j0, bessel_j0_first_zero  # noqa: F401  (re-exported API)
from .config import SolverSettings
from .errors import DomainError, IndeterminateAtHorizon, NoUpperBracket
from .ode import (ShootingOutcome, Status, euler_tail_certificate, integrate,
                  integrate_principal_tail, log_problem, radius_problem)
from .potentials import RadialPotential


@dataclass(frozen=True)
class FeasibilityCheck:
    feasible: bool
    evidence: ShootingOutcome
    method: str          # "recessive-shot" | "principal-tail" | "oscillation-certificate"


@dataclass(frozen=True)
class BestConstantResult:
    c_best: float
    c_lo: float                       # certified feasible
    c_hi: float                       # certified infeasible
    iterations: int
    evidence_lo: ShootingOutcome
    evidence_hi: ShootingOutcome
    tolerance: float
    converged: bool = True
    band: Optional[tuple] = None      # indeterminate band, if bisection hit one

    @property
    def bracket(self) -> tuple:
        return (self.c_lo, self.c_hi)


def _wants_log_domain(p: RadialPotential) -> bool:
    return p.critical or p.sigma >= 2.0


def feasible(p: RadialPotential, c: float, R: float,
             settings: SolverSettings = SolverSettings()) -> FeasibilityCheck:
    """Decide feasibility of multiplier c on the ball of radius R."""
    if c < 0.0:
        raise DomainError(f"multiplier must be >= 0, got {c}")
    if not _wants_log_domain(p):
        prob = radius_problem(p, c, R)
        out = integrate(prob, settings)
        ok = out.status is not Status.ZERO_FOUND or \
            out.first_zero >= R * (1.0 - settings.boundary_grace)
        return FeasibilityCheck(ok, out, "recessive-shot")

    prob = log_problem(p, c, R, s_max=settings.s_max)
    cert = euler_tail_certificate(prob, settings)
    if cert is None:
        raise IndeterminateAtHorizon(
            f"multiplier {c}: no Euler comparison certificate by s_max = {settings.s_max}",
            multiplier=c)
    if cert.kind == "nonoscillatory":
        out = integrate_principal_tail(prob, cert, settings)
        interior_zero = out.status is Status.ZERO_FOUND and \
            out.first_zero < R * (1.0 - settings.boundary_grace)
        return FeasibilityCheck(not interior_zero, out, "principal-tail")
    # oscillatory tail: infeasible; run the outer-edge shot for trajectory evidence
    out = integrate(prob, settings)
    out = ShootingOutcome(out.trajectory, out.first_zero, out.status,
                          out.rescale_count, certificate=cert, dense=out.dense)
    return FeasibilityCheck(False, out, "oscillation-certificate")


def best_constant(p: RadialPotential, R: float, tol: float = 1e-6,
                  settings: SolverSettings = SolverSettings()) -> BestConstantResult:
    """Bisect the supremum of feasible multipliers.

    Doubles from c = 1 until infeasible (guarded by ``doubling_cap``; a
    potential that never becomes infeasible, e.g. amplitude 0, raises
    NoUpperBracket), then bisects to relative width ``tol``.  If an
    indeterminate band interrupts the bisection, the certified edges are
    refined instead, ``converged`` is False, the band is reported, and
    c_best is the largest certified-feasible multiplier.
    """
    if tol <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    iterations = 0

    check_lo = feasible(p, 0.0, R, settings)
    iterations += 1
    if not check_lo.feasible:
        raise DomainError("feasibility at c = 0 failed; potential is invalid")
    c_lo, ev_lo = 0.0, check_lo.evidence

    c_hi = 1.0
    ev_hi = None
    while True:
        check = feasible(p, c_hi, R, settings)
        iterations += 1
        if not check.feasible:
            ev_hi = check.evidence
            break
        c_lo, ev_lo = c_hi, check.evidence
        c_hi *= 2.0
        if c_hi > settings.doubling_cap:
            raise NoUpperBracket(
                f"no infeasible multiplier up to {settings.doubling_cap:g}; "
                "best constant is unbounded", last_multiplier=c_hi / 2.0)

    band = None
    while c_hi - c_lo > tol * max(1.0, 0.5 * (c_lo + c_hi)):
        mid = 0.5 * (c_lo + c_hi)
        try:
            check = feasible(p, mid, R, settings)
        except IndeterminateAtHorizon:
            lo_edge, ev_lo_new, it1 = _refine_edge(p, R, c_lo, mid, settings, want=True,
                                                   tol=tol)
            hi_edge, ev_hi_new, it2 = _refine_edge(p, R, mid, c_hi, settings, want=False,
                                                   tol=tol)
            iterations += 1 + it1 + it2
            c_lo, c_hi = lo_edge, hi_edge
            ev_lo = ev_lo_new if ev_lo_new is not None else ev_lo
            ev_hi = ev_hi_new if ev_hi_new is not None else ev_hi
            band = (c_lo, c_hi)
            break
        iterations += 1
        if check.feasible:
            c_lo, ev_lo = mid, check.evidence
        else:
            c_hi, ev_hi = mid, check.evidence

    converged = c_hi - c_lo <= tol * max(1.0, 0.5 * (c_lo + c_hi))
    c_best = 0.5 * (c_lo + c_hi) if converged else c_lo
    return BestConstantResult(c_best, c_lo, c_hi, iterations, ev_lo, ev_hi,
                              tolerance=tol, converged=converged, band=band)


def _refine_edge(p, R, lo, hi, settings, want: bool, tol: float):
    """Push the certified boundary into an indeterminate band.

    want=True moves the feasible edge up from lo; want=False moves the
    infeasible edge down from hi.  Returns (edge, evidence, iterations).
    """
    evidence = None
    iterations = 0
    while hi - lo > tol * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        iterations += 1
        try:
            check = feasible(p, mid, R, settings)
            verdict = check.feasible
        except IndeterminateAtHorizon:
            verdict = None
        if verdict is want:
            if want:
                lo, evidence = mid, check.evidence
            else:
                hi, evidence = mid, check.evidence
        else:
            if want:
                hi = mid
            else:
                lo = mid
    edge = lo if want else hi
    return edge, evidence, iterations


# ---------------------------------------------------------------------------
# Reference constants
# ---------------------------------------------------------------------------

def unit_ball_volume(n: int) -> float:
    """omega_n = pi^(n/2) / Gamma(n/2 + 1)."""
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def equal_volume_radius(volume: float, n: int) -> float:
    """Radius of the n-ball with the given volume."""
    if volume <= 0.0:
        raise DomainError(f"volume must be positive, got {volume}")
    return (volume / unit_ball_volume(n)) ** (1.0 / n)


def brezis_vazquez_lambda(n: int, volume: float) -> float:
    """The constant-potential improvement level z0^2 omega_n^(2/n) V^(-2/n)
    for a domain of the given volume in dimension n >= 3."""
    if n < 3:
        raise DomainError(f"dimension must be >= 3, got {n}")
    if volume <= 0.0:
        raise DomainError(f"volume must be positive, got {volume}")
    z0 = bessel_j0_first_zero()
    return z0 * z0 * unit_ball_volume(n) ** (2.0 / n) * volume ** (-2.0 / n)
