"""Conformal weight toolkit.

Evaluates the universal conformal weight h = |phi'|^2 for six planar
domains, integrates weight powers with refinement-based convergence
verdicts, transfers Sobolev norms and Dirichlet problems between a domain
and the unit disc, and estimates the associated embedding constants.
"""
from .errors import (BranchCutViolation, ConfweightError, DomainMismatch,
                     ExponentOutOfRange, GridTooCoarse, IntegrandNotFinite,
                     InvalidExponents, IterationDivergence, KpqDivergent,
                     PointOutsideDomain, RectangleNotInterior, RhsNotFinite,
                     SingularTridiagonal)
from .exponents import (DEFAULT_ALPHA0, ConstantEstimate, EstimateMethod,
                        ExponentBounds, ExponentBudget, disc_eigenvalue,
                        exponent_bounds, poincare_constant_disc, q_from_ps,
                        weighted_constant_check)
from .fields import (CompositionRecord, DiscField, PolarGrid, TestBump,
                     composition_inequality_check, gradient, isometry_check,
                     lp_norm, make_bump_family, pullback_energy)
from .maps import (ConformalMap, Direction, DomainFamily, MoebiusAutomorphism,
                   boundary_image_check, boundary_samples,
                   compose_with_automorphism, round_trip_check, sample_interior)
from .poisson import (ConvergenceRow, DirichletProblem, DiscSolution,
                      ResidualReport, RhsSpec, constant_rhs, convergence_study,
                      quartic_rhs, solve_dirichlet, solve_disc_values,
                      weak_residual)
from .quadrature import (DiscGridSpec, QuadResult, Verdict, brennan_direct,
                         classify, disc_nodes, integrate_disc, inverse_brennan,
                         kpq_norm)
from .util import DEFAULT_SEED, default_seed, fmt17, pairwise_sum
from .verify import J0_FIRST_ZERO, quoted_formula_report, run_verify
from .weights import (WeightClassReport, WeightField, moebius_ratio_bounds,
                      weight_class_check, weight_equivalence_check, weight_eval)

__version__ = "1.0.0"

__all__ = [
    "BranchCutViolation", "CompositionRecord", "ConformalMap",
    "ConfweightError", "ConstantEstimate", "ConvergenceRow", "DEFAULT_ALPHA0",
    "DEFAULT_SEED", "DirichletProblem", "Direction", "DiscField",
    "DiscGridSpec", "DiscSolution", "DomainFamily", "DomainMismatch",
    "EstimateMethod", "ExponentBounds", "ExponentBudget", "ExponentOutOfRange",
    "GridTooCoarse", "IntegrandNotFinite", "InvalidExponents",
    "IterationDivergence", "J0_FIRST_ZERO", "KpqDivergent",
    "MoebiusAutomorphism", "PointOutsideDomain", "PolarGrid", "QuadResult",
    "RectangleNotInterior", "ResidualReport", "RhsNotFinite", "RhsSpec",
    "SingularTridiagonal", "TestBump", "Verdict", "WeightClassReport",
    "WeightField", "boundary_image_check", "boundary_samples",
    "brennan_direct", "classify", "compose_with_automorphism",
    "composition_inequality_check", "constant_rhs", "convergence_study",
    "default_seed", "disc_eigenvalue", "disc_nodes", "exponent_bounds",
    "fmt17", "gradient", "integrate_disc", "inverse_brennan",
    "isometry_check", "kpq_norm", "lp_norm", "make_bump_family",
    "moebius_ratio_bounds", "pairwise_sum", "poincare_constant_disc",
    "pullback_energy", "q_from_ps", "quartic_rhs", "quoted_formula_report",
    "round_trip_check", "run_verify", "sample_interior", "solve_dirichlet",
    "solve_disc_values", "weak_residual", "weight_class_check",
    "weight_equivalence_check", "weight_eval", "weighted_constant_check",
]
