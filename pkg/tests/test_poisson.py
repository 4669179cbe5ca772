import io
import math

import numpy as np
import pytest

from confweight import (ConformalMap, DirichletProblem, DomainFamily,
                        PointOutsideDomain, PolarGrid, RhsNotFinite, RhsSpec,
                        constant_rhs, convergence_study, quartic_rhs,
                        solve_dirichlet, solve_disc_values, weak_residual)


def halfplane_problem(c=-4.0):
    return DirichletProblem(ConformalMap.to_disc(DomainFamily.HALFPLANE),
                            constant_rhs(c))


def test_rhs_spec_parse_and_label():
    spec = RhsSpec.parse("const:-4")
    assert spec.kind == "const" and spec.value == -4.0
    assert spec.label == "const:-4"
    assert RhsSpec.parse("quartic").label == "quartic"
    with pytest.raises(ValueError):
        RhsSpec.parse("cubic")
    with pytest.raises(ValueError):
        RhsSpec("const", math.inf)


def test_rhs_evaluate():
    m = ConformalMap.to_disc(DomainFamily.DISC)
    z = np.array([0.0j, 0.5 + 0.0j])
    assert np.array_equal(constant_rhs(3.0).evaluate(z, m), [3.0, 3.0])
    quart = quartic_rhs().evaluate(z, m)
    assert quart == pytest.approx([-8.0, 16.0 * 0.25 - 8.0])


def test_problem_requires_to_disc():
    with pytest.raises(ValueError):
        DirichletProblem(ConformalMap.from_disc(DomainFamily.HALFPLANE),
                         constant_rhs(1.0))


def test_rhs_on_disc_is_weightless_pullback():
    prob = DirichletProblem(ConformalMap.to_disc(DomainFamily.HALFPLANE),
                            constant_rhs(-4.0))
    w = np.array([0.0j, 0.3 + 0.2j])
    # a constant f transfers to the same constant: no weight factor appears
    assert np.array_equal(prob.rhs_on_disc(w), [-4.0, -4.0])


def test_solve_requires_power_of_two_angles():
    with pytest.raises(ValueError):
        solve_dirichlet(halfplane_problem(), PolarGrid(64, 48))


def test_exact_constant_solution_converges():
    prob = halfplane_problem()
    errs = []
    for n in (64, 128):
        grid = PolarGrid(n, n)
        sol = solve_dirichlet(prob, grid)
        exact = 1.0 - grid.r[:, None] ** 2
        errs.append(float(np.max(np.abs(sol.field.values - exact))))
    assert errs[0] < 1e-4 and errs[1] < 2.5e-5
    assert math.log2(errs[0] / errs[1]) >= 1.9


def test_quartic_manufactured_solution():
    prob = DirichletProblem(ConformalMap.to_disc(DomainFamily.STRIP), quartic_rhs())
    grid = PolarGrid(128, 128)
    sol = solve_dirichlet(prob, grid)
    exact = (1.0 - grid.r[:, None] ** 2) ** 2
    assert float(np.max(np.abs(sol.field.values - exact))) < 1e-4


def test_solve_disc_values_direct():
    grid = PolarGrid(128, 128)
    f = np.full((128, 128), -4.0)
    v = solve_disc_values(f, grid)
    exact = 1.0 - grid.r[:, None] ** 2
    assert float(np.max(np.abs(v - exact))) < 2.5e-5


def test_solution_evaluation():
    sol = solve_dirichlet(halfplane_problem(), PolarGrid(64, 64))
    node = sol.grid.nodes[10, 3]
    assert sol.eval_disc(node) == sol.field.values[10, 3]
    assert isinstance(sol.eval_disc(node), float)
    # center value through the diameter rule
    assert sol.eval_disc(0.0j) == pytest.approx(1.0, abs=1e-3)
    # near-boundary wedge decays linearly to the exact zero trace
    assert sol.eval_disc(0.999 + 0.0j) == pytest.approx(1.0 - 0.999**2, rel=2e-2)
    with pytest.raises(PointOutsideDomain):
        sol.eval_disc(1.0 + 0.0j)


def test_eval_domain_matches_disc():
    sol = solve_dirichlet(halfplane_problem(), PolarGrid(64, 64))
    w = 0.4 + 0.1j
    z = sol.mapping.invert().eval(w)
    assert sol.eval_domain(z) == pytest.approx(sol.eval_disc(w), abs=1e-12)


def test_to_csv_pushforward():
    sol = solve_dirichlet(halfplane_problem(), PolarGrid(16, 16))
    buf = io.StringIO()
    sol.to_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "x,y,u"
    assert len(lines) == 1 + 16 * 16
    x, y, u = (float(s) for s in lines[1].split(","))
    assert y > 0.0  # pushforward lands in the upper half-plane


def test_to_csv_lattice_respects_membership():
    sol = solve_dirichlet(halfplane_problem(), PolarGrid(32, 32))
    xs = np.linspace(-1.0, 1.0, 5)
    ys = np.linspace(-1.0, 1.0, 5)   # half of these are below the boundary
    lattice = (xs[None, :] + 1j * ys[:, None]).ravel()
    buf = io.StringIO()
    sol.to_csv(buf, lattice=lattice)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "x,y,u"
    assert len(lines) == 1 + 10  # only the strictly-upper rows survive
    for line in lines[1:]:
        assert float(line.split(",")[1]) > 0.0


def test_weak_residual_refinement(bumps):
    prob = halfplane_problem()
    r64 = weak_residual(solve_dirichlet(prob, PolarGrid(64, 64)), prob, bumps)
    r128 = weak_residual(solve_dirichlet(prob, PolarGrid(128, 128)), prob, bumps)
    assert len(r64.residuals) == len(bumps)
    assert r64.max_residual == max(r64.residuals)
    assert math.log2(r64.max_residual / r128.max_residual) >= 1.9


def test_weak_residual_needs_bumps():
    sol = solve_dirichlet(halfplane_problem(), PolarGrid(64, 64))
    with pytest.raises(ValueError):
        weak_residual(sol, halfplane_problem(), [])


def test_convergence_study_const():
    rows = convergence_study(halfplane_problem(), levels=3)
    assert [(r.n_r, r.n_theta) for r in rows] == [(32, 32), (64, 64), (128, 128)]
    assert rows[0].order is None
    for row in rows[1:]:
        assert row.order is not None and row.order >= 1.9


def test_convergence_study_quartic():
    prob = DirichletProblem(ConformalMap.to_disc(DomainFamily.STRIP), quartic_rhs())
    rows = convergence_study(prob, levels=4)
    assert len(rows) == 3  # scored against the finest level
    orders = [r.order for r in rows if r.order is not None]
    assert orders and min(orders) >= 1.9


def test_convergence_study_needs_three_levels():
    with pytest.raises(ValueError):
        convergence_study(halfplane_problem(), levels=2)


def test_solver_determinism_and_linearity():
    grid = PolarGrid(64, 64)
    s1 = solve_dirichlet(halfplane_problem(-4.0), grid)
    s2 = solve_dirichlet(halfplane_problem(-4.0), grid)
    assert np.array_equal(s1.field.values, s2.field.values)
    neg = solve_dirichlet(halfplane_problem(4.0), grid)
    assert np.array_equal(neg.field.values, -s1.field.values)


class _PoisonedRhs:
    label = "poisoned"
    kind = "custom"

    def evaluate(self, z, mapping):
        return np.full(np.asarray(z).shape, np.nan)


def test_rhs_must_be_finite():
    prob = DirichletProblem.__new__(DirichletProblem)
    object.__setattr__(prob, "mapping", ConformalMap.to_disc(DomainFamily.DISC))
    object.__setattr__(prob, "rhs", _PoisonedRhs())
    with pytest.raises(RhsNotFinite):
        solve_dirichlet(prob, PolarGrid(16, 16))
