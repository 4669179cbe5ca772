"""Admissible exponent algebra and Poincare-Sobolev constant estimates.

The algebra side is exact arithmetic on the exponent relations that govern
gradient composition bounds: the conjugation q(p, s) = ps/(p + s - 2) and the
(q, r) ranges determined by an integrability floor alpha0 of the inverse-map
derivative.  The analytic side estimates the disc constant K of the
inequality ||f||_{L_r} <= K ||grad f||_{L_2}: exactly (via the first
Laplacian eigenvalue) for r = 2, and as a certified lower bound from a bump
family otherwise.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ExponentOutOfRange, IterationDivergence
from .fields import DiscField, PolarGrid, TestBump, lp_norm, make_bump_family
from .maps import ConformalMap, Direction
from .poisson import solve_disc_values
from .quadrature import DiscGridSpec, disc_nodes
from .util import pairwise_sum
from .weights import WeightField

# integrability floor used by default: |psi'|^alpha is known integrable on
# the disc down to alpha0 = 2 - 3.752 for every simply connected domain
DEFAULT_ALPHA0 = -1.752

_CHECK_SPEC = DiscGridSpec(n_r=512, n_theta=512)


def q_from_ps(p: float, s: float) -> float:
    """Conjugated exponent q(p, s) = ps/(p + s - 2), for p > 2, 4/3 < s <= 4.

    s = 2 returns q = 2 for every p (the conformal case); the upper endpoint
    s = 4 is admitted so the extremal pair (4, 4) -> 8/3 is expressible.
    """
    if not (math.isfinite(p) and p > 2.0):
        raise ExponentOutOfRange(f"p must exceed 2, got {p}")
    if not (math.isfinite(s) and 4.0 / 3.0 < s <= 4.0):
        raise ExponentOutOfRange(f"s must lie in (4/3, 4], got {s}")
    # (p - 2) + s keeps the denominator exactly p when s = 2, so q == 2.0
    return p * s / ((p - 2.0) + s)


@dataclass(frozen=True)
class ExponentBounds:
    """Admissible ranges below a given p: q in [1, q_max], r in [1, r_max)."""

    p_min: float
    q_max: float
    r_max: float
    conjectural: bool  # True when computed at the unproven floor alpha0 = -2


def exponent_bounds(p: float, alpha0: float) -> ExponentBounds:
    """Bounds q_max = p|a0|/(2+|a0|-p) and r_max = (2p/(2-p))(|a0|/(2+|a0|)).

    Requires -2 <= alpha0 < 0 and p_min(alpha0) < p < 2 where
    p_min = (|a0|+2)/(|a0|+1).  The endpoint alpha0 = -2 is admitted but
    flagged conjectural; there q_max degenerates to exactly 2p/(4-p).
    """
    if not (math.isfinite(alpha0) and -2.0 <= alpha0 < 0.0):
        raise ExponentOutOfRange(f"alpha0 must lie in [-2, 0), got {alpha0}")
    a = abs(alpha0)
    p_min = (a + 2.0) / (a + 1.0)
    if not (math.isfinite(p) and p_min < p < 2.0):
        raise ExponentOutOfRange(f"p must lie in ({p_min!r}, 2) for alpha0={alpha0}, got {p}")
    q_max = p * a / (2.0 + a - p)
    r_max = (2.0 * p / (2.0 - p)) * (a / (2.0 + a))
    # arithmetic consequences of the admissible range (equalities only at a=2)
    assert q_max <= 2.0 * p / (4.0 - p) and r_max <= p / (2.0 - p)
    return ExponentBounds(p_min=p_min, q_max=q_max, r_max=r_max,
                          conjectural=(alpha0 == -2.0))


@dataclass(frozen=True)
class ExponentBudget:
    """A working set of exponents tied to one integrability floor alpha0.

    Whenever both s and alpha are present they must satisfy alpha = 2 - s;
    q and r are optional companions checked against bounds() by callers.
    """

    p: float
    q: float | None = None
    r: float | None = None
    s: float | None = None
    alpha: float | None = None
    alpha0: float = DEFAULT_ALPHA0

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p >= 1.0):
            raise ExponentOutOfRange(f"p must be at least 1, got {self.p}")
        if not (-2.0 < self.alpha0 < 0.0):
            raise ExponentOutOfRange(f"alpha0 must lie in (-2, 0), got {self.alpha0}")
        if self.s is not None and self.alpha is not None:
            if abs(self.alpha - (2.0 - self.s)) > 1e-12:
                raise ValueError(f"alpha={self.alpha} and s={self.s} violate alpha = 2 - s")

    @property
    def p_min(self) -> float:
        a = abs(self.alpha0)
        return (a + 2.0) / (a + 1.0)

    def bounds(self) -> ExponentBounds:
        return exponent_bounds(self.p, self.alpha0)


class EstimateMethod(str, enum.Enum):
    EIGEN_RAYLEIGH = "EigenRayleigh"
    BUMP_FAMILY_MAX = "BumpFamilyMax"


@dataclass(frozen=True)
class ConstantEstimate:
    value: float
    method: EstimateMethod
    tolerance: float
    iterations: int


def disc_eigenvalue(grid: PolarGrid, tol: float = 1e-10,
                    max_iterations: int = 10_000) -> tuple[float, int]:
    """Smallest Dirichlet eigenvalue of -Laplacian on the disc, discretized.

    Inverse power iteration: each step solves lap y = -x with the transfer
    solver and renormalizes.  The Rayleigh quotient of the inverse operator,
    mu = <y, x>/<x, x> (area weighted), converges to 1/lambda_1; iteration
    stops when successive quotients agree to ``tol`` relative.
    """
    areas = grid.cell_areas
    x = np.ones((grid.n_r, grid.n_theta))
    mu_prev = math.inf
    for it in range(1, max_iterations + 1):
        y = solve_disc_values(-x, grid)
        mu = pairwise_sum(y * x * areas) / pairwise_sum(x * x * areas)
        if abs(mu - mu_prev) <= tol * abs(mu):
            return 1.0 / mu, it
        mu_prev = mu
        x = y / math.sqrt(pairwise_sum(y * y * areas))
    raise IterationDivergence(f"Rayleigh quotient did not settle to {tol} "
                              f"in {max_iterations} iterations")


def poincare_constant_disc(r: float, grid: PolarGrid,
                           bumps: list[TestBump] | None = None,
                           tol: float = 1e-10,
                           max_iterations: int = 10_000) -> ConstantEstimate:
    """Disc constant of ||f||_{L_r} <= K ||grad f||_{L_2} for zero-trace f.

    r = 2 is solved exactly (to discretization) as K = 1/sqrt(lambda_1) by
    inverse power iteration on the discrete Dirichlet Laplacian.  Other r
    have no elementary sharp constant; the estimate is then the maximum of
    ||b||_r / ||grad b||_2 over a seeded bump family, a certified lower
    bound that never claims sharpness.
    """
    if not (math.isfinite(r) and r >= 1.0):
        raise ExponentOutOfRange(f"r must be at least 1, got {r}")
    if r == 2.0:
        lam, its = disc_eigenvalue(grid, tol, max_iterations)
        return ConstantEstimate(value=1.0 / math.sqrt(lam),
                                method=EstimateMethod.EIGEN_RAYLEIGH,
                                tolerance=tol, iterations=its)
    if bumps is None:
        bumps = make_bump_family(64)
    best = 0.0
    for b in bumps:
        grad = DiscField.from_function(grid, lambda w: np.abs(b.gradient(w)))
        denom = lp_norm(grad, 2.0)
        if denom == 0.0:
            continue
        num = lp_norm(DiscField.from_function(grid, b.value), r)
        best = max(best, num / denom)
    return ConstantEstimate(value=best, method=EstimateMethod.BUMP_FAMILY_MAX,
                            tolerance=0.0, iterations=len(bumps))


def weighted_constant_check(mapping: ConformalMap, r: float,
                            bumps: list[TestBump],
                            spec: DiscGridSpec | None = None) -> float:
    """Max relative defect of the two transfer identities, over the bumps.

    For g on the disc and f = g o phi on the domain, both
    ||f||_{L_r(Omega, h)} = ||g||_{L_r(D)} and
    ||grad f||_{L_2(Omega)} = ||grad g||_{L_2(D)}
    hold exactly in exact arithmetic; each side is quadratured independently
    on a shared node set and compared.
    """
    if not (math.isfinite(r) and r >= 1.0):
        raise ExponentOutOfRange(f"r must be at least 1, got {r}")
    if mapping.direction is not Direction.TO_DISC:
        raise ValueError("mapping must send its domain to the disc")
    if not bumps:
        raise ValueError("need at least one bump")
    w, areas = disc_nodes(_CHECK_SPEC if spec is None else spec)
    inv = mapping.invert()
    density = WeightField(mapping).disc_density(w)
    factor2 = (np.abs(mapping.derivative(inv.eval(w))) * np.abs(inv.derivative(w))) ** 2
    worst = 0.0
    for b in bumps:
        val_r = np.abs(b.value(w)) ** r
        lhs_norm = float(pairwise_sum(val_r * density * areas)) ** (1.0 / r)
        rhs_norm = float(pairwise_sum(val_r * areas)) ** (1.0 / r)
        g2 = np.abs(b.gradient(w)) ** 2
        lhs_energy = math.sqrt(pairwise_sum(g2 * factor2 * areas))
        rhs_energy = math.sqrt(pairwise_sum(g2 * areas))
        for lhs, rhs in ((lhs_norm, rhs_norm), (lhs_energy, rhs_energy)):
            if rhs == 0.0:
                dev = 0.0 if lhs == 0.0 else math.inf
            else:
                dev = abs(lhs - rhs) / rhs
            worst = max(worst, dev)
    return worst
