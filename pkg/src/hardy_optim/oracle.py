"""Independent verification path: discretized eigenvalue problems and
weighted one-dimensional inequalities.

Everything here deliberately avoids the shooting machinery: quotients are
assembled as piecewise-linear finite elements on explicit grids and solved
by shifted inverse iteration, so agreement with the ODE side is a genuine
two-sided check of the feasibility characterization.

Boundary treatment: Dirichlet at the outer radius, natural (free) at the
inner cutoff r_min.  The inner cutoff stands in for the boundedness
condition at the origin; forcing the value to zero there instead would
pollute eigenvalues logarithmically (the origin has zero capacity for these
weights, so the continuum problem does not see a Dirichlet condition at 0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy.linalg import solve_banded

from .errors import (BoundaryConditionViolated, DegenerateDenominator, DomainError,
                     IndefiniteForm, NonMonotoneSequence, SingularMass)
from .potentials import RadialPotential

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(6)


class GridMapping(Enum):
    UNIFORM = "uniform"
    LOG_SPACED = "log"


@dataclass(frozen=True)
class GridSpec:
    """Node layout for the discretized quotients."""

    N: int
    mapping: GridMapping = GridMapping.LOG_SPACED
    R: float = 1.0
    r_min: float = 1e-6

    def __post_init__(self):
        if self.N < 16:
            raise DomainError(f"need at least 16 nodes, got {self.N}")
        if not 0.0 < self.r_min < self.R:
            raise DomainError(f"need 0 < r_min < R, got ({self.r_min}, {self.R})")

    def nodes(self) -> np.ndarray:
        if self.mapping is GridMapping.UNIFORM:
            return np.linspace(self.r_min, self.R, self.N)
        return np.exp(np.linspace(math.log(self.r_min), math.log(self.R), self.N))


@dataclass(frozen=True)
class EigenResult:
    lambda1: float
    eigenvector: np.ndarray       # samples at grid nodes (0 at the R node)
    grid: GridSpec
    residual_norm: float
    iterations: int


@dataclass(frozen=True)
class LambdaLimitResult:
    limit: float
    mu_values: np.ndarray
    lambdas: np.ndarray
    extrapolants: np.ndarray


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------

def _cell_integral_power(lo: np.ndarray, hi: np.ndarray, a: float) -> np.ndarray:
    """int_lo^hi r^a dr, elementwise."""
    if abs(a + 1.0) < 1e-14:
        return np.log(hi / lo)
    return (hi ** (a + 1.0) - lo ** (a + 1.0)) / (a + 1.0)


def _stiffness(nodes: np.ndarray, a: float) -> tuple[np.ndarray, np.ndarray]:
    """P1 stiffness with weight r^a: returns (diagonal, off-diagonal)."""
    h = np.diff(nodes)
    cell = _cell_integral_power(nodes[:-1], nodes[1:], a) / h ** 2
    diag = np.zeros(nodes.size)
    diag[:-1] += cell
    diag[1:] += cell
    return diag, -cell


def _lumped(nodes: np.ndarray, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Diagonal (lumped) weights: integral of fn over each node's cell,
    composite Gauss-Legendre in t = ln r per half-cell."""
    mids = np.sqrt(nodes[:-1] * nodes[1:])          # geometric midpoints
    lo = np.concatenate([[nodes[0]], mids])
    hi = np.concatenate([mids, [nodes[-1]]])
    t_lo, t_hi = np.log(lo), np.log(hi)
    half = 0.5 * (t_hi - t_lo)
    mid = 0.5 * (t_hi + t_lo)
    total = np.zeros(nodes.size)
    for xi, wi in zip(_GL_NODES, _GL_WEIGHTS):
        t = mid + half * xi
        r = np.exp(t)
        total += wi * fn(r) * r      # dr = r dt
    return total * half


def _vectorized(p: RadialPotential) -> Callable:
    def fn(r: np.ndarray) -> np.ndarray:
        return np.array([p.value(float(ri)) for ri in r])
    return fn


def _smallest_eigenpair(k_diag, k_off, m_diag, tol: float = 1e-10,
                        max_iter: int = 80) -> tuple[float, np.ndarray, float, int]:
    """Smallest eigenpair of (tridiagonal K) u = lambda (diagonal M) u by
    inverse iteration with Rayleigh-quotient shifts after a plain warmup."""
    n = k_diag.size
    x = np.sqrt(np.maximum(m_diag, 1e-300))
    x /= math.sqrt(float(x @ (m_diag * x)))
    lam = float(x @ _tri_mul(k_diag, k_off, x))
    shift = 0.0
    iterations = 0
    for it in range(max_iter):
        iterations = it + 1
        banded = np.zeros((3, n))
        banded[0, 1:] = k_off
        banded[1] = k_diag - shift * m_diag
        banded[2, :-1] = k_off
        try:
            y = solve_banded((1, 1), banded, m_diag * x)
        except np.linalg.LinAlgError:
            shift *= 1.0 - 1e-10
            continue
        norm = math.sqrt(abs(float(y @ (m_diag * y))))
        if norm == 0.0 or not math.isfinite(norm):
            break
        x = y / norm
        lam_new = float(x @ _tri_mul(k_diag, k_off, x))
        done = abs(lam_new - lam) <= tol * max(1.0, abs(lam_new))
        lam = lam_new
        if it >= 4:
            shift = lam
        if done and it >= 6:
            break
    if float(np.sum(x)) < 0.0:
        x = -x
    residual = _tri_mul(k_diag, k_off, x) - lam * m_diag * x
    scale = np.linalg.norm(_tri_mul(k_diag, k_off, x)) + abs(lam) * np.linalg.norm(m_diag * x)
    res_norm = float(np.linalg.norm(residual) / max(scale, 1e-300))
    return lam, x, res_norm, iterations


def _tri_mul(diag, off, x):
    y = diag * x
    y[:-1] += off * x[1:]
    y[1:] += off * x[:-1]
    return y


# ---------------------------------------------------------------------------
# The quotients
# ---------------------------------------------------------------------------

def reduced_rayleigh_min(p: RadialPotential, grid: GridSpec) -> EigenResult:
    """Smallest value of int w'^2 r dr / int v w^2 r dr over w(R) = 0.

    This is the one-dimensional reduction of the Hardy gap (w absorbs the
    critical inverse-square weight), so the minimum is the discretized best
    improvement constant and must agree with the shooting bisection.
    """
    nodes = grid.nodes()
    k_diag, k_off = _stiffness(nodes, 1.0)
    vfun = _vectorized(p)
    m_diag = _lumped(nodes, lambda r: vfun(r) * r)
    # Dirichlet at R: drop the last node; r_min node stays free (natural).
    k_diag, k_off, m_diag = k_diag[:-1], k_off[:-1], m_diag[:-1]
    if np.any(m_diag <= 0.0):
        raise SingularMass("potential weight vanishes on a full cell")
    lam, x, res, iters = _smallest_eigenpair(k_diag, k_off, m_diag)
    vec = np.concatenate([x, [0.0]])
    return EigenResult(lam, vec, grid, res, iters)


def weighted_eigen(p: RadialPotential, mu: float, n: int, grid: GridSpec) -> EigenResult:
    """First eigenvalue of the radial form with inverse-square weight mu:

        min [ int u'^2 r^(n-1) - mu int u^2 r^(n-3) ] / int v u^2 r^(n-1)

    over u(R) = 0, free at the inner cutoff.  Requires mu < ((n-2)/2)^2,
    otherwise the numerator form is not coercive.
    """
    if n < 3:
        raise DomainError(f"dimension must be >= 3, got {n}")
    mu_crit = 0.25 * (n - 2) ** 2
    if not 0.0 <= mu < mu_crit:
        raise IndefiniteForm(f"mu = {mu} outside [0, mu_n = {mu_crit})")
    nodes = grid.nodes()
    k_diag, k_off = _stiffness(nodes, float(n - 1))
    hardy_diag = _lumped(nodes, lambda r: r ** (n - 3.0))
    vfun = _vectorized(p)
    m_diag = _lumped(nodes, lambda r: vfun(r) * r ** (n - 1.0))
    k_diag = k_diag - mu * hardy_diag
    k_diag, k_off, m_diag = k_diag[:-1], k_off[:-1], m_diag[:-1]
    if np.any(m_diag <= 0.0):
        raise SingularMass("potential weight vanishes on a full cell")
    lam, x, res, iters = _smallest_eigenpair(k_diag, k_off, m_diag)
    vec = np.concatenate([x, [0.0]])
    return EigenResult(lam, vec, grid, res, iters)


def lambda_limit(p: RadialPotential, n: int, R: float,
                 grid: Optional[GridSpec] = None, depth: int = 12) -> LambdaLimitResult:
    """Extrapolated limit of the first eigenvalue as mu increases to the
    critical coupling, along mu_k = (1 - 2^-k) mu_n.

    The eigenvalue approaches its limit linearly in nu = sqrt(mu_n - mu),
    so a two-point Richardson step in nu (ratio sqrt(2)) removes the leading
    term.  Deep in the sequence the inner cutoff contaminates the data
    (the plateau of the truncated interval), so the reported limit is the
    extrapolant where consecutive extrapolants agree best, the usual error
    proxy.  The raw sequence is returned for inspection; a non-monotone
    sequence aborts the extrapolation.
    """
    if grid is None:
        # The near-critical eigenfunctions drift to the origin like
        # r^(nu - (n-2)/2) with nu -> 0, so the inner cutoff must be far
        # deeper than for a fixed-mu solve or it acts as a Dirichlet wall
        # and the sequence plateaus above the true limit.
        grid = GridSpec(4000, GridMapping.LOG_SPACED, R, 1e-40 * R)
    mu_n = 0.25 * (n - 2) ** 2
    ks = np.arange(1, depth + 1)
    mus = (1.0 - 2.0 ** (-ks)) * mu_n
    lambdas = np.array([weighted_eigen(p, float(mu), n, grid).lambda1 for mu in mus])
    diffs = np.diff(lambdas)
    if np.any(diffs > 1e-12 * np.abs(lambdas[:-1])):
        raise NonMonotoneSequence(
            "eigenvalues failed to decrease along the mu sequence: "
            f"{lambdas.tolist()}")
    root2 = math.sqrt(2.0)
    extrapolants = (root2 * lambdas[1:] - lambdas[:-1]) / (root2 - 1.0)
    if extrapolants.size >= 3:
        agreement = np.abs(np.diff(extrapolants))
        best = int(np.argmin(agreement[1:])) + 1   # skip the warmup pair
        limit = float(extrapolants[best + 1])
    else:
        limit = float(extrapolants[-1])
    return LambdaLimitResult(limit, mus, lambdas, extrapolants)


# ---------------------------------------------------------------------------
# Weighted one-dimensional inequality checker
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmoothFn:
    """Function with analytic first (and optionally second) derivative."""

    value: Callable[[float], float]
    deriv: Callable[[float], float]
    deriv2: Optional[Callable[[float], float]] = None

    def __call__(self, r: float) -> float:
        return self.value(r)


@dataclass(frozen=True)
class PoincareResult:
    lhs: float
    rhs: float
    margin: float
    boundary_a: float
    boundary_b: float


def poincare_check(k: SmoothFn, phi: SmoothFn, h: SmoothFn, a: float, b: float,
                   grid: GridSpec) -> PoincareResult:
    """Evaluate both sides of the weighted quotient inequality

        int_a^b h'^2 k dr  >=  int_a^b -h^2 (k' phi' + k phi'') / phi dr

    for strictly positive phi, by composite Gauss-Legendre quadrature on the
    grid cells.  The common boundary limit of k h^2 phi'/phi at a and b is
    verified first (the inequality's integration by parts needs it).
    """
    if phi.deriv2 is None:
        raise DomainError("phi needs an analytic second derivative")
    if not a < b:
        raise DomainError(f"need a < b, got ({a}, {b})")

    def boundary(r: float) -> float:
        return k.value(r) * h.value(r) ** 2 * phi.deriv(r) / phi.value(r)

    span = b - a
    b_a = boundary(a + 1e-8 * span)
    b_a_next = boundary(a + 1e-7 * span)
    b_b = boundary(b - 1e-8 * span)
    b_b_next = boundary(b - 1e-7 * span)

    def lhs_integrand(r: np.ndarray) -> np.ndarray:
        return np.array([h.deriv(ri) ** 2 * k.value(ri) for ri in r])

    def rhs_integrand(r: np.ndarray) -> np.ndarray:
        out = np.empty(r.size)
        for i, ri in enumerate(r):
            out[i] = -h.value(ri) ** 2 * (
                k.deriv(ri) * phi.deriv(ri) + k.value(ri) * phi.deriv2(ri)) / phi.value(ri)
        return out

    cells = _quad_cells(a, b, grid)
    lhs = _composite_gl(lhs_integrand, cells)
    rhs = _composite_gl(rhs_integrand, cells)

    scale = max(1.0, abs(lhs))
    drift = max(abs(b_a - b_a_next), abs(b_b - b_b_next))
    if abs(b_a - b_b) > 1e-3 * scale + 10.0 * drift:
        raise BoundaryConditionViolated(
            f"boundary limits differ: {b_a} at a vs {b_b} at b")
    return PoincareResult(lhs, rhs, lhs - rhs, b_a, b_b)


def _quad_cells(a: float, b: float, grid: GridSpec) -> np.ndarray:
    if grid.mapping is GridMapping.LOG_SPACED:
        lo = a if a > 0.0 else min(1e-12 * (b - a), b * 1e-12)
        edges = np.exp(np.linspace(math.log(max(lo, 1e-300)), math.log(b), grid.N))
        if a < edges[0]:
            edges = np.concatenate([[a], edges])
        return edges
    return np.linspace(a, b, grid.N)


def _composite_gl(fn: Callable, edges: np.ndarray) -> float:
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    total = 0.0
    for xi, wi in zip(_GL_NODES, _GL_WEIGHTS):
        total += wi * float(np.sum(half * fn(mid + half * xi)))
    return total


# ---------------------------------------------------------------------------
# Direct quotient on sampled test functions
# ---------------------------------------------------------------------------

def hardy_quotient(r: np.ndarray, u: np.ndarray, p: RadialPotential, n: int,
                   R: float, du: Optional[np.ndarray] = None) -> float:
    """[int u'^2 r^(n-1) - mu_n int u^2 r^(n-3)] / int v u^2 r^(n-1)
    on sampled u with u(R) = 0 (angular factors cancel in the quotient).

    Every admissible test function bounds the best improvement constant
    from above, so quotient >= c(V) up to quadrature error; used as a
    property check.  Derivative samples are optional (finite differences
    otherwise).
    """
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    if r.ndim != 1 or r.shape != u.shape or r.size < 8:
        raise DomainError("need matching 1-d sample arrays, length >= 8")
    if np.any(np.diff(r) <= 0.0):
        raise DomainError("radii must be strictly increasing")
    if n < 3:
        raise DomainError(f"dimension must be >= 3, got {n}")
    scale = float(np.max(np.abs(u)))
    if abs(u[-1]) > 1e-6 * max(scale, 1e-300) or abs(r[-1] - R) > 1e-9 * R:
        raise DomainError("samples must end at r = R with u(R) = 0")
    if du is None:
        du = np.gradient(u, r)
    else:
        du = np.asarray(du, dtype=float)
    mu_n = 0.25 * (n - 2) ** 2
    v = np.array([p.value(float(ri)) for ri in r])
    numerator = np.trapezoid(du ** 2 * r ** (n - 1), r) - mu_n * np.trapezoid(u ** 2 * r ** (n - 3.0), r)
    denominator = np.trapezoid(v * u ** 2 * r ** (n - 1), r)
    if denominator <= 1e-300:
        raise DegenerateDenominator(f"potential-weighted mass is {denominator}")
    return float(numerator / denominator)
