"""Scalar fields on the unit disc: sampled grids, smooth test bumps, norms.

Test functions are closed-form bumps evaluated analytically (value and
gradient), so composing them with a conformal map costs no interpolation
error; the pullback checks below then run at pure quadrature accuracy.
Sampled fields (DiscField) on a uniform polar grid only appear where a PDE
solution or CSV export needs one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import GridTooCoarse, InvalidExponents, KpqDivergent
from .maps import ConformalMap, Direction
from .quadrature import DiscGridSpec, Verdict, disc_nodes, integrate_disc, kpq_norm
from .util import default_seed, fmt17, pairwise_sum
from .weights import WeightField

# fixed grid for the matched-node identity checks: level 6 of the default
# refinement ladder (16x16 doubled five times)
_CHECK_SPEC = DiscGridSpec(n_r=512, n_theta=512)


@dataclass(frozen=True)
class PolarGrid:
    """Uniform polar grid, nodes r_i = (i+1/2)/n_r, theta_j = 2*pi*j/n_theta.

    Nodes sit at radial cell midpoints, so neither r=0 nor r=1 is sampled;
    theta wraps periodically.
    """

    n_r: int
    n_theta: int

    def __post_init__(self):
        if self.n_r < 2 or self.n_theta < 2:
            raise ValueError("grid needs at least 2 nodes in each direction")

    @cached_property
    def r(self) -> np.ndarray:
        return (np.arange(self.n_r) + 0.5) / self.n_r

    @cached_property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta

    @cached_property
    def nodes(self) -> np.ndarray:
        """Complex node positions, shape (n_r, n_theta)."""
        return self.r[:, None] * np.exp(1j * self.theta)[None, :]

    @cached_property
    def cell_areas(self) -> np.ndarray:
        dr = 1.0 / self.n_r
        dtheta = 2.0 * np.pi / self.n_theta
        return np.broadcast_to((self.r * dr * dtheta)[:, None],
                               (self.n_r, self.n_theta))


@dataclass(frozen=True)
class DiscField:
    """Real scalar samples on a PolarGrid; values must be finite."""

    grid: PolarGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=float)
        if vals.shape != (self.grid.n_r, self.grid.n_theta):
            raise ValueError(f"values shape {vals.shape} does not match grid "
                             f"{(self.grid.n_r, self.grid.n_theta)}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must all be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: PolarGrid, fn) -> "DiscField":
        vals = np.asarray(fn(grid.nodes), dtype=float)
        return cls(grid, np.broadcast_to(vals, grid.nodes.shape))

    def to_csv(self, target) -> None:
        """Write `x,y,value` rows, one per node, 17 significant digits."""
        if isinstance(target, (str, Path)):
            with open(target, "w") as fp:
                self.to_csv(fp)
            return
        target.write("x,y,value\n")
        nodes = self.grid.nodes
        for i in range(self.grid.n_r):
            for j in range(self.grid.n_theta):
                z = nodes[i, j]
                target.write(f"{fmt17(z.real)},{fmt17(z.imag)},"
                             f"{fmt17(self.values[i, j])}\n")


@dataclass(frozen=True)
class TestBump:
    """Smooth bump b(w) = amplitude * exp(1 - 1/(1 - t^2)), t = |w - center|/radius.

    Vanishes with all derivatives at t = 1; the closed support disc must lie
    inside the unit disc.  b(center) = amplitude.
    """

    center: complex
    radius: float
    amplitude: float = 1.0

    def __post_init__(self):
        c = complex(self.center)
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError("radius must be positive and finite")
        if abs(c) + self.radius >= 1.0:
            raise ValueError("closed support disc must lie inside the unit disc")
        if not math.isfinite(self.amplitude):
            raise ValueError("amplitude must be finite")
        object.__setattr__(self, "center", c)

    def _t2(self, w: np.ndarray) -> np.ndarray:
        d = w - self.center
        return (d.real**2 + d.imag**2) / self.radius**2

    def value(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        t2 = self._t2(w)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            body = np.exp(1.0 - 1.0 / (1.0 - t2))
        return np.where(t2 < 1.0, self.amplitude * body, 0.0)

    def gradient(self, w) -> np.ndarray:
        """Cartesian gradient packed as d/dx + i*d/dy."""
        w = np.asarray(w, dtype=complex)
        d = w - self.center
        t2 = self._t2(w)
        # with s = t^2: db/ds = -b/(1-s)^2 and grad s = 2*d/radius^2
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            b = self.amplitude * np.exp(1.0 - 1.0 / (1.0 - t2))
            slope = np.where(t2 < 1.0, -2.0 * b / (1.0 - t2) ** 2, 0.0)
        return slope * d / self.radius**2

    def grad_magnitude(self, w) -> np.ndarray:
        return np.abs(self.gradient(w))


def make_bump_family(count: int, rng: np.random.Generator | None = None) -> list[TestBump]:
    """Reproducible random bumps, closed supports inside |w| <= 0.9."""
    if count < 1:
        raise ValueError("count must be positive")
    if rng is None:
        rng = np.random.default_rng(default_seed())
    bumps = []
    for _ in range(count):
        radius = rng.uniform(0.1, 0.3)
        rho = rng.uniform(0.0, 0.9 - radius)
        ang = rng.uniform(0.0, 2.0 * np.pi)
        amp = rng.uniform(0.5, 2.0)
        bumps.append(TestBump(center=rho * np.exp(1j * ang), radius=radius,
                              amplitude=amp))
    return bumps


def gradient(field: DiscField) -> tuple[np.ndarray, np.ndarray]:
    """Cartesian gradient arrays (gx, gy) by second-order polar differences.

    Central differences in r and theta; the innermost ring differences
    across the origin using the node at theta + pi, the outermost ring uses
    a one-sided three-point stencil.
    """
    g = field.grid
    if g.n_r < 16 or g.n_theta < 16:
        raise GridTooCoarse(f"gradient needs at least 16 nodes per direction, "
                            f"got {g.n_r}x{g.n_theta}")
    if g.n_theta % 2:
        raise ValueError("n_theta must be even for the across-origin stencil")
    v = field.values
    h = 1.0 / g.n_r
    dtheta = 2.0 * np.pi / g.n_theta

    fr = np.empty_like(v)
    fr[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    # v(-r_0, theta) == v(r_0, theta + pi), spacing still 2h
    fr[0] = (v[1] - np.roll(v[0], -(g.n_theta // 2))) / (2.0 * h)
    fr[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)

    ft = (np.roll(v, -1, axis=1) - np.roll(v, 1, axis=1)) / (2.0 * dtheta)

    cos = np.cos(g.theta)[None, :]
    sin = np.sin(g.theta)[None, :]
    inv_r = (1.0 / g.r)[:, None]
    gx = fr * cos - ft * sin * inv_r
    gy = fr * sin + ft * cos * inv_r
    return gx, gy


def lp_norm(field: DiscField, p: float, weight: WeightField | None = None) -> float:
    """(integral of |f|^p dnu)^(1/p) by the grid midpoint rule.

    Without a weight, dnu is plane Lebesgue measure; with one, dnu carries
    the weight's disc density h(psi(w))*|psi'(w)|^2 (identically one in
    exact arithmetic, computed honestly here).
    """
    if not (math.isfinite(p) and p >= 1.0):
        raise InvalidExponents(f"p must satisfy p >= 1, got {p}")
    cells = np.abs(field.values) ** p * field.grid.cell_areas
    if weight is not None:
        cells = cells * weight.disc_density(field.grid.nodes)
    return float(pairwise_sum(cells)) ** (1.0 / p)


def pullback_energy(mapping: ConformalMap, bump, p: float = 2.0,
                    spec: DiscGridSpec | None = None, tol: float = 1e-9,
                    max_levels: int = 8) -> float:
    """Integral of |grad(b o phi)|^p over the map's domain, via the disc.

    Chain rule plus change of variables z = psi(w) give the disc integrand
    |grad b|(w)^p * |phi'(psi(w))|^p * |psi'(w)|^2; for p = 2 the map factor
    is identically one, but it is evaluated, not simplified away.
    """
    if mapping.direction is not Direction.TO_DISC:
        raise ValueError("mapping must send its domain to the disc")
    if not (math.isfinite(p) and p >= 1.0):
        raise InvalidExponents(f"p must satisfy p >= 1, got {p}")
    inv = mapping.invert()

    def integrand(w):
        z = inv.eval(w)
        g = np.abs(bump.gradient(w))
        return g**p * np.abs(mapping.derivative(z)) ** p * np.abs(inv.derivative(w)) ** 2

    return integrate_disc(integrand, spec, tol, max_levels).value


def isometry_check(mapping: ConformalMap, bumps: list[TestBump],
                   spec: DiscGridSpec | None = None) -> float:
    """Max relative gap between the domain-side and disc Dirichlet energies.

    Both energies are evaluated on the same fixed node set, so the reported
    gap isolates the conformal factor |phi'(psi(w))*psi'(w)|^2 from shared
    quadrature error.
    """
    if not bumps:
        raise ValueError("need at least one bump")
    if mapping.direction is not Direction.TO_DISC:
        raise ValueError("mapping must send its domain to the disc")
    w, areas = disc_nodes(_CHECK_SPEC if spec is None else spec)
    inv = mapping.invert()
    factor = (np.abs(mapping.derivative(inv.eval(w))) * np.abs(inv.derivative(w))) ** 2
    worst = 0.0
    for b in bumps:
        g2 = np.abs(b.gradient(w)) ** 2
        e_disc = pairwise_sum(g2 * areas)
        e_omega = pairwise_sum(g2 * factor * areas)
        if e_disc == 0.0:
            dev = 0.0 if e_omega == 0.0 else math.inf
        else:
            dev = abs(e_omega - e_disc) / e_disc
        worst = max(worst, dev)
    return worst


@dataclass(frozen=True)
class CompositionRecord:
    """One bump's showing in the composition inequality."""

    lhs: float       # ||grad(f o phi)|| in L_q on the domain
    rhs: float       # ||grad f|| in L_p on the disc
    constant: float  # K_{p,q}
    passed: bool


def composition_inequality_check(mapping: ConformalMap, p: float, q: float,
                                 bumps: list[TestBump],
                                 spec: DiscGridSpec | None = None,
                                 slack: float = 1e-6) -> list[CompositionRecord]:
    """Verify ||grad(f o phi)||_q <= K_{p,q} * ||grad f||_p per bump.

    The constant comes from kpq_norm; a non-converged constant integral
    raises KpqDivergent since the bound is then vacuous.  Equality cases
    (p = q = 2) belong to isometry_check instead.
    """
    if not bumps:
        raise ValueError("need at least one bump")
    if mapping.direction is not Direction.TO_DISC:
        raise ValueError("mapping must send its domain to the disc")
    kres = kpq_norm(mapping, p, q)
    if kres.verdict is not Verdict.CONVERGED:
        raise KpqDivergent(f"K_({p},{q}) integral verdict {kres.verdict.value} "
                           f"on {mapping.family.value}")
    big_k = kres.value
    w, areas = disc_nodes(_CHECK_SPEC if spec is None else spec)
    inv = mapping.invert()
    phi_prime = np.abs(mapping.derivative(inv.eval(w)))
    jac2 = np.abs(inv.derivative(w)) ** 2
    out = []
    for b in bumps:
        g = np.abs(b.gradient(w))
        rhs = float(pairwise_sum(g**p * areas)) ** (1.0 / p)
        lhs = float(pairwise_sum((g * phi_prime) ** q * jac2 * areas)) ** (1.0 / q)
        out.append(CompositionRecord(lhs=lhs, rhs=rhs, constant=big_k,
                                     passed=lhs <= big_k * rhs * (1.0 + slack)))
    return out
