"""Cross-module invariant suite with a deterministic, serializable report.

run_verify() exercises the documented invariants of every module: map round
trips, analytic-versus-numeric derivatives, the conformal Jacobian identity,
boundary images, automorphism bounds, weight positivity and the mass
identity, refinement classification of the slit-plane integrals, energy
isometry, composition inequalities, exponent arithmetic, the transfer
identities, the eigenvalue route to the disc constant, and the Dirichlet
solver's exact solutions, linearity and weight-free assembly.

The report is a plain dict of JSON-ready values.  All randomness flows from
one seeded generator consumed in a fixed order, and every reduction is
deterministic, so identical environments produce identical reports byte for
byte.  The report also records two quoted closed forms (strip weight,
cardioid map/weight pair) that circulate for these domains but fail
independent verification; reproducing that mismatch is part of the suite.
"""
from __future__ import annotations

import math

import numpy as np

from . import weights as weights_module
from .exponents import (disc_eigenvalue, exponent_bounds, poincare_constant_disc,
                        q_from_ps, weighted_constant_check)
from .fields import (DiscField, PolarGrid, TestBump,
                     composition_inequality_check, isometry_check, lp_norm,
                     make_bump_family)
from .maps import (ConformalMap, DomainFamily, MoebiusAutomorphism,
                   boundary_image_check, boundary_samples,
                   compose_with_automorphism, round_trip_check, sample_interior)
from .poisson import (DirichletProblem, constant_rhs, convergence_study,
                      quartic_rhs, solve_dirichlet, weak_residual)
from .quadrature import (DiscGridSpec, Verdict, brennan_direct, disc_nodes,
                         integrate_disc)
from .util import default_seed, pairwise_sum
from .weights import WeightField, moebius_ratio_bounds, weight_equivalence_check

# first positive zero of the Bessel function J0; lambda_1(disc) = j01^2
J0_FIRST_ZERO = 2.404825557695773

_FAMILIES = tuple(DomainFamily)
_LEVEL6 = DiscGridSpec(n_r=512, n_theta=512)


def _annulus(rng: np.random.Generator, n: int, rmin: float, rmax: float) -> np.ndarray:
    r = np.sqrt(rng.uniform(rmin**2, rmax**2, size=n))
    return r * np.exp(2j * np.pi * rng.uniform(size=n))


def _check_maps(add, rng):
    fd_step = 3e-6
    for fam in _FAMILIES:
        to_disc = ConformalMap.to_disc(fam)
        rt = round_trip_check(to_disc, n=400, rng=rng, rmin=0.1, rmax=0.9)
        add(f"maps.round_trip.{fam.value}", rt <= 1e-12, max_error=float(rt))

        w = _annulus(rng, 200, 0.1, 0.8)
        z = to_disc.invert().eval(w)
        for mapping, pts, label in ((to_disc, z, "to_disc"),
                                    (to_disc.invert(), w, "from_disc")):
            num = (mapping.eval(pts + fd_step) - mapping.eval(pts - fd_step)) / (2.0 * fd_step)
            exact = mapping.derivative(pts)
            rel = float(np.max(np.abs(num - exact) / np.abs(exact)))
            add(f"maps.derivative_fd.{fam.value}.{label}", rel <= 1e-7, max_rel=rel)

        # |phi'|^2 must equal the determinant of the real 2x2 Jacobian
        ex = to_disc.eval(z + fd_step) - to_disc.eval(z - fd_step)
        ey = to_disc.eval(z + 1j * fd_step) - to_disc.eval(z - 1j * fd_step)
        det = (ex.real * ey.imag - ey.real * ex.imag) / (2.0 * fd_step) ** 2
        hval = np.abs(to_disc.derivative(z)) ** 2
        rel = float(np.max(np.abs(det - hval) / hval))
        add(f"maps.conformal_identity.{fam.value}", rel <= 1e-6, max_rel=rel)

        dev = float(boundary_image_check(to_disc, n=64))
        add(f"maps.boundary_image.{fam.value}", dev < 1e-2, deviation=dev)


def _check_automorphisms(add, rng):
    eta = MoebiusAutomorphism(a=0.4 + 0.2j, rotation=1.1)
    w = _annulus(rng, 1000, 0.0, 0.999)
    img = eta(w)
    add("maps.automorphism.preserves_disc", bool(np.all(np.abs(img) < 1.0)),
        max_image_modulus=float(np.max(np.abs(img))))
    lo, hi = eta.derivative_magnitude_bounds()
    mag = np.abs(eta.derivative(w))
    add("maps.automorphism.derivative_bounds",
        bool(np.all((mag >= lo - 1e-12) & (mag <= hi + 1e-12))),
        observed_min=float(mag.min()), observed_max=float(mag.max()),
        bound_min=float(lo), bound_max=float(hi))
    back_err = float(np.max(np.abs(eta.inverse()(img) - w)))
    add("maps.automorphism.inverse_round_trip", back_err <= 1e-12, max_error=back_err)
    inner = MoebiusAutomorphism(a=-0.3j, rotation=-0.7)
    comp_err = float(np.max(np.abs(eta.compose(inner)(w) - eta(inner(w)))))
    add("maps.automorphism.composition", comp_err <= 1e-12, max_error=comp_err)


def _check_weights(add, rng):
    w6, areas6 = disc_nodes(_LEVEL6)
    for fam in _FAMILIES:
        field = WeightField(ConformalMap.to_disc(fam))
        pts = sample_interior(field.map, 10_000, rng=rng)
        vals = field.evaluate(pts)
        add(f"weights.positivity.{fam.value}", bool(np.all(vals > 0.0)),
            min_value=float(np.min(vals)))

        probe = sample_interior(field.map, 200, rng=rng, rmax=0.9)
        step = 1e-8 * (1.0 + np.abs(probe))
        base = field.evaluate(probe)
        rel_step = float(np.max(np.abs(field.evaluate(probe + step) - base) / base))
        add(f"weights.continuity.{fam.value}", rel_step <= 1e-3, max_rel_step=rel_step)

        total = float(pairwise_sum(field.disc_density(w6) * areas6))
        rel_mass = abs(total - math.pi) / math.pi
        add(f"weights.mass_identity.{fam.value}", rel_mass <= 1e-4,
            integral=total, rel_error=float(rel_mass))

    base_map = ConformalMap.to_disc(DomainFamily.HALFPLANE)
    for a in (0.0, 0.5, 0.9):
        eta = MoebiusAutomorphism(a=a, rotation=0.3)
        tilted = WeightField(compose_with_automorphism(base_map, eta))
        lo, hi = moebius_ratio_bounds(a)
        rmin, rmax = weight_equivalence_check(WeightField(base_map), tilted,
                                              samples=500, rng=rng)
        ok = (lo - 1e-12 <= rmin) and (rmax <= hi + 1e-12)
        add(f"weights.equivalence.a={a:g}", ok, ratio_min=float(rmin),
            ratio_max=float(rmax), bound_low=float(lo), bound_high=float(hi))


def _check_quadrature(add):
    for fam in _FAMILIES:
        res = brennan_direct(ConformalMap.to_disc(fam), 2.0)
        rel = abs(res.value - math.pi) / math.pi
        add(f"quadrature.brennan_s2.{fam.value}",
            res.verdict is Verdict.CONVERGED and rel <= 1e-4,
            value=float(res.value), rel_error=float(rel), verdict=res.verdict.value)

    slit = ConformalMap.to_disc(DomainFamily.SLITPLANE)
    ladder = {}
    for s in (1.5, 2.0, 2.5, 3.0, 3.5, 3.9):
        ladder[f"{s:g}"] = brennan_direct(slit, s, tol=0.1).verdict.value
    add("quadrature.koebe_interior_converges",
        all(v == Verdict.CONVERGED.value for v in ladder.values()), verdicts=ladder)
    outside = {}
    for s in (1.3, 4.1):
        outside[f"{s:g}"] = brennan_direct(slit, s, tol=0.1).verdict.value
    add("quadrature.koebe_outside_diverges",
        all(v == Verdict.DIVERGENT.value for v in outside.values()), verdicts=outside)

    first = brennan_direct(slit, 3.0, tol=0.1)
    second = brennan_direct(slit, 3.0, tol=0.1)
    add("quadrature.deterministic_reduction",
        first.level_values == second.level_values, levels=first.levels_used)

    log_case = integrate_disc(lambda w: 1.0 / (1.0 - np.abs(w)))
    add("quadrature.log_divergence", log_case.verdict is Verdict.DIVERGENT,
        verdict=log_case.verdict.value)


def _check_fields(add, rng):
    bumps = make_bump_family(3, rng=rng)
    for fam in _FAMILIES:
        dev = isometry_check(ConformalMap.to_disc(fam), bumps)
        tol = 1e-12 if fam is DomainFamily.DISC else 1e-6
        add(f"fields.isometry.{fam.value}", dev <= tol, deviation=float(dev))

    probes = bumps + [TestBump(0.1 + 0.1j, 0.2, 0.0)]
    recs = composition_inequality_check(ConformalMap.to_disc(DomainFamily.CARDIOID),
                                        2.0, 1.5, probes)
    tightest = max((r.lhs / (r.constant * r.rhs) if r.rhs else 0.0) for r in recs)
    add("fields.composition_inequality.cardioid", all(r.passed for r in recs),
        constant=float(recs[0].constant), tightest_ratio=float(tightest))

    grid = PolarGrid(64, 64)
    f = DiscField.from_function(grid, bumps[0].value)
    g = DiscField(grid, -2.7 * f.values)
    rel = 0.0
    for p in (1.0, 2.0, 3.5):
        want = 2.7 * lp_norm(f, p)
        rel = max(rel, abs(lp_norm(g, p) - want) / want)
    add("fields.norm_homogeneity", rel <= 1e-13, max_rel=float(rel))


def _check_exponents(add):
    chain_ok = True
    for a0 in np.linspace(-1.95, -0.05, 20):
        a0 = float(a0)
        p_min = (abs(a0) + 2.0) / (abs(a0) + 1.0)
        for p in np.linspace(p_min + 1e-3, 2.0 - 1e-3, 20):
            p = float(p)
            b = exponent_bounds(p, a0)
            mid = 2.0 * p / (4.0 - p)
            chain_ok = chain_ok and (1.0 <= b.q_max < mid < p < 2.0)
            chain_ok = chain_ok and (b.r_max < p / (2.0 - p))
    add("exponents.admissible_chain", chain_ok, grid="20x20")

    eq = exponent_bounds(1.5, -2.0)
    add("exponents.endpoint_equality",
        eq.q_max == 2.0 * 1.5 / (4.0 - 1.5) and eq.conjectural,
        q_max=float(eq.q_max))

    conformal_line = all(q_from_ps(float(p), 2.0) == 2.0
                         for p in np.linspace(2.1, 8.0, 20))
    samples_ok = (q_from_ps(3.0, 3.0) == 2.25
                  and abs(q_from_ps(4.0, 4.0) - 8.0 / 3.0) < 1e-15)
    add("exponents.conjugation_formula", conformal_line and samples_ok,
        q_33=float(q_from_ps(3.0, 3.0)), q_44=float(q_from_ps(4.0, 4.0)))


def _check_transfer(add, rng):
    bumps = make_bump_family(3, rng=rng)
    for fam in _FAMILIES:
        dev = weighted_constant_check(ConformalMap.to_disc(fam), 3.0, bumps)
        tol = 1e-12 if fam is DomainFamily.DISC else 1e-6
        add(f"transfer.norm_identities.{fam.value}", dev <= tol, deviation=float(dev))

    lam64, _ = disc_eigenvalue(PolarGrid(64, 64))
    lam128, its = disc_eigenvalue(PolarGrid(128, 128))
    target = J0_FIRST_ZERO**2
    add("transfer.eigen_refinement", abs(target - lam128) < abs(target - lam64),
        lambda_64=float(lam64), lambda_128=float(lam128), target=float(target))

    est = poincare_constant_disc(2.0, PolarGrid(128, 128))
    rel = abs(est.value - 1.0 / J0_FIRST_ZERO) * J0_FIRST_ZERO
    add("transfer.disc_constant", rel <= 0.01, value=float(est.value),
        rel_error=float(rel), iterations=est.iterations)

    base = poincare_constant_disc(1.0, PolarGrid(64, 64), bumps=bumps)
    extended = poincare_constant_disc(1.0, PolarGrid(64, 64),
                                      bumps=bumps + make_bump_family(2, rng=rng))
    add("transfer.bump_bound_monotone", 0.0 < base.value <= extended.value,
        base=float(base.value), extended=float(extended.value))


def _check_poisson(add, rng):
    bumps = make_bump_family(3, rng=rng)
    for fam in _FAMILIES:
        mapping = ConformalMap.to_disc(fam)
        problem = DirichletProblem(mapping, constant_rhs(-4.0))
        inv = mapping.invert()
        errors, err_orders, res_orders = [], [], []
        prev_err = prev_res = None
        for n in (64, 128, 256):
            grid = PolarGrid(n, n)
            sol = solve_dirichlet(problem, grid)
            back = mapping.eval(inv.eval(grid.nodes))
            exact = 1.0 - np.abs(back) ** 2
            err = float(np.max(np.abs(sol.field.values - exact)))
            errors.append(err)
            if prev_err is not None:
                err_orders.append(math.log2(prev_err / err))
            prev_err = err
            res = weak_residual(sol, problem, bumps).max_residual
            if prev_res is not None:
                res_orders.append(math.log2(prev_res / res))
            prev_res = res
        add(f"poisson.exact_const.{fam.value}",
            min(err_orders) >= 1.9 and errors[-1] <= 1e-3,
            errors=errors, orders=[float(o) for o in err_orders])
        add(f"poisson.weak_residual.{fam.value}", min(res_orders) >= 1.9,
            orders=[float(o) for o in res_orders])

    rows = convergence_study(DirichletProblem(ConformalMap.to_disc(DomainFamily.STRIP),
                                              quartic_rhs()), levels=4)
    orders = [float(r.order) for r in rows if r.order is not None]
    add("poisson.manufactured_orders.strip", bool(orders) and min(orders) >= 1.9,
        orders=orders)

    grid = PolarGrid(64, 64)
    problem = DirichletProblem(ConformalMap.to_disc(DomainFamily.HALFPLANE),
                               constant_rhs(-4.0))
    s1 = solve_dirichlet(problem, grid)
    s2 = solve_dirichlet(problem, grid)
    add("poisson.deterministic_resolve",
        bool(np.array_equal(s1.field.values, s2.field.values)))
    neg = solve_dirichlet(DirichletProblem(problem.mapping, constant_rhs(4.0)), grid)
    add("poisson.linearity_negation",
        bool(np.array_equal(neg.field.values, -s1.field.values)))

    # assembly must pull back f only; the weight is never consulted
    calls = {"count": 0}
    orig_method = weights_module.WeightField.evaluate
    orig_fn = weights_module.weight_eval

    def spy_method(self, z):
        calls["count"] += 1
        return orig_method(self, z)

    def spy_fn(field, z):
        calls["count"] += 1
        return orig_fn(field, z)

    weights_module.WeightField.evaluate = spy_method
    weights_module.weight_eval = spy_fn
    try:
        solve_dirichlet(DirichletProblem(ConformalMap.to_disc(DomainFamily.CARDIOID),
                                         quartic_rhs()), PolarGrid(64, 64))
    finally:
        weights_module.WeightField.evaluate = orig_method
        weights_module.weight_eval = orig_fn
    add("poisson.weight_free_assembly", calls["count"] == 0,
        weight_queries=calls["count"])


def quoted_formula_report() -> list[dict]:
    """Mismatch records for two quoted closed forms that fail verification.

    Strip: the quoted weight 1/((x^2+y^2)^2 + x^2 - y^2 + 1) disagrees with
    the analytic Jacobian |1 + tan^2 z|^2 of the shipped map.  Cardioid: the
    quoted map sqrt(z) - 1 is inconsistent with its own quoted weight
    1/(2 sqrt|z|) (its true Jacobian is 1/(4|z|)), and its boundary image is
    not the unit circle; the shipped map is the corrected 2 sqrt(z) - 1.
    """
    strip_field = WeightField(ConformalMap.to_disc(DomainFamily.STRIP))
    z = 0.5 + 0.0j
    computed = float(strip_field.evaluate(z))
    quoted = 1.0 / ((z.real**2 + z.imag**2) ** 2 + z.real**2 - z.imag**2 + 1.0)
    strip_entry = {
        "family": "strip",
        "at": [z.real, z.imag],
        "computed": computed,
        "quoted": float(quoted),
        "mismatch": bool(abs(computed - quoted) > 1e-6),
        "note": "quoted closed form disagrees with |d/dz tan z|^2 "
                "(they coincide only at z = 0)",
    }

    zc = 0.0625 + 0.0j
    quoted_map_jacobian = float(np.abs(0.5 / np.sqrt(zc)) ** 2)
    quoted_weight = 1.0 / (2.0 * math.sqrt(abs(zc)))
    shipped = float(WeightField(ConformalMap.to_disc(DomainFamily.CARDIOID)).evaluate(zc))
    cardioid_entry = {
        "family": "cardioid",
        "at": [zc.real, zc.imag],
        "computed": quoted_map_jacobian,
        "quoted": float(quoted_weight),
        "shipped": shipped,
        "mismatch": bool(abs(quoted_map_jacobian - quoted_weight) > 1e-6),
        "note": "quoted map sqrt(z)-1 has Jacobian 1/(4|z|), not the quoted "
                "1/(2 sqrt|z|); shipped corrected map 2*sqrt(z)-1 has weight 1/|z|",
    }
    return [strip_entry, cardioid_entry]


def _check_quoted_cardioid(add):
    pts, nrm = boundary_samples(DomainFamily.CARDIOID, 64)
    z = pts + 1e-3 * nrm
    image = np.sqrt(z) - 1.0
    dev = np.abs(np.abs(image) - 1.0)
    shipped_dev = float(boundary_image_check(ConformalMap.to_disc(DomainFamily.CARDIOID), n=64))
    add("maps.quoted_cardioid_map_fails_boundary_oracle",
        float(np.max(dev)) > 0.1 and shipped_dev < 1e-2,
        quoted_max_deviation=float(np.max(dev)),
        quoted_mean_deviation=float(np.mean(dev)),
        shipped_deviation=shipped_dev)


def run_verify() -> dict:
    """Run every module invariant; return a JSON-ready deterministic report."""
    seed = default_seed()
    rng = np.random.default_rng(seed)
    checks: list[dict] = []

    def add(name: str, passed, **detail):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    _check_maps(add, rng)
    _check_automorphisms(add, rng)
    _check_weights(add, rng)
    _check_quadrature(add)
    _check_fields(add, rng)
    _check_exponents(add)
    _check_transfer(add, rng)
    _check_poisson(add, rng)
    _check_quoted_cardioid(add)

    mismatches = quoted_formula_report()
    failed = [c["name"] for c in checks if not c["passed"]]
    return {
        "seed": int(seed),
        "checks": checks,
        "mismatch_reports": mismatches,
        "failed": failed,
        "passed": not failed and all(m["mismatch"] for m in mismatches),
    }
