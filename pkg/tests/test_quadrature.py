import math

import numpy as np
import pytest

from confweight import (ConformalMap, DiscGridSpec, DomainFamily,
                        IntegrandNotFinite, InvalidExponents, Verdict,
                        brennan_direct, classify, disc_nodes, integrate_disc,
                        inverse_brennan, kpq_norm, pairwise_sum)


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        DiscGridSpec(n_r=12, n_theta=16)  # not a power of two
    with pytest.raises(ValueError):
        DiscGridSpec(n_r=4, n_theta=16)   # too small
    with pytest.raises(ValueError):
        DiscGridSpec(n_r=16, n_theta=16, radial_grading=0.5)


def test_grid_spec_levels():
    spec = DiscGridSpec(n_r=16, n_theta=16)
    lvl3 = spec.level(2)
    assert (lvl3.n_r, lvl3.n_theta) == (64, 64)
    assert lvl3.radial_grading == spec.radial_grading


def test_disc_nodes_partition_unity():
    w, areas = disc_nodes(DiscGridSpec(n_r=32, n_theta=64))
    assert w.shape == areas.shape == (32, 64)
    assert np.all(np.abs(w) < 1.0)
    assert pairwise_sum(areas) == pytest.approx(math.pi, rel=1e-14)


def test_integrate_constant_exact():
    res = integrate_disc(lambda w: 1.0)
    assert res.verdict is Verdict.CONVERGED
    assert res.value == pytest.approx(math.pi, rel=1e-14)


def test_integrate_radial_square():
    res = integrate_disc(lambda w: np.abs(w) ** 2, tol=1e-5)
    assert res.verdict is Verdict.CONVERGED
    assert res.value == pytest.approx(math.pi / 2.0, rel=1e-5)


def test_integrate_log_singularity_diverges():
    res = integrate_disc(lambda w: 1.0 / (1.0 - np.abs(w)))
    assert res.verdict is Verdict.DIVERGENT
    assert res.levels_used == 8


def test_integrand_not_finite():
    def bad(w):
        out = np.ones(w.shape)
        out[w.real > 0.5] = np.nan
        return out
    with pytest.raises(IntegrandNotFinite):
        integrate_disc(bad)


def test_classify_converged_checked_first():
    # a sequence can satisfy both patterns; Converged wins
    assert classify([1.0, 1.0], tol=1e-6) is Verdict.CONVERGED
    assert classify([1.0, 2.0, 3.0, 4.0, 5.0, 5.0], tol=1e-6) is Verdict.CONVERGED


def test_classify_divergent_needs_sustained_growth():
    vals = [1.0, 2.0, 4.0, 8.0, 16.0]
    assert classify(vals, tol=1e-9) is Verdict.DIVERGENT
    assert classify(vals[:4], tol=1e-9) is Verdict.INCONCLUSIVE  # only 3 increments
    shrinking = [1.0, 2.0, 2.5, 2.6, 2.61]
    assert classify(shrinking, tol=1e-9) is Verdict.INCONCLUSIVE


def test_classify_single_level_inconclusive():
    assert classify([3.0], tol=1e-6) is Verdict.INCONCLUSIVE


def test_quad_result_records_levels():
    res = integrate_disc(lambda w: np.abs(w), tol=1e-12, max_levels=4)
    assert res.levels_used == len(res.level_values) == 4
    assert res.error_estimate == abs(res.level_values[-1] - res.level_values[-2])


def test_brennan_s2_is_disc_area(to_disc):
    res = brennan_direct(to_disc, 2.0)
    assert res.verdict is Verdict.CONVERGED
    assert res.value == pytest.approx(math.pi, rel=1e-4)


def test_brennan_interior_exponent_converges():
    slit = ConformalMap.to_disc(DomainFamily.SLITPLANE)
    res = brennan_direct(slit, 3.0, tol=0.1)
    assert res.verdict is Verdict.CONVERGED


def test_brennan_endpoint_diverges():
    slit = ConformalMap.to_disc(DomainFamily.SLITPLANE)
    res = brennan_direct(slit, 4.1, tol=0.1)
    assert res.verdict is Verdict.DIVERGENT
    increments = np.diff(res.level_values)
    assert np.all(increments > 0)


def test_inverse_brennan_matches_direct():
    slit = ConformalMap.to_disc(DomainFamily.SLITPLANE)
    direct = brennan_direct(slit, 3.0, tol=0.1)
    inverse = inverse_brennan(slit, -1.0, tol=0.1)  # alpha = 2 - s
    assert direct.level_values == inverse.level_values


def test_deterministic_reduction():
    slit = ConformalMap.to_disc(DomainFamily.SLITPLANE)
    a = brennan_direct(slit, 3.5, tol=0.1)
    b = brennan_direct(slit, 3.5, tol=0.1)
    assert a.level_values == b.level_values


def test_kpq_validates_exponents():
    card = ConformalMap.to_disc(DomainFamily.CARDIOID)
    with pytest.raises(InvalidExponents):
        kpq_norm(card, 2.0, 2.0)
    with pytest.raises(InvalidExponents):
        kpq_norm(card, 2.0, 0.5)


def test_kpq_cardioid_area_route():
    card = ConformalMap.to_disc(DomainFamily.CARDIOID)
    res = kpq_norm(card, 2.0, 1.0)
    assert res.verdict is Verdict.CONVERGED
    assert res.value == pytest.approx(math.sqrt(3.0 * math.pi / 8.0), rel=1e-4)


def test_kpq_exterior_diverges():
    ext = ConformalMap.to_disc(DomainFamily.EXTERIOR)
    res = kpq_norm(ext, 2.0, 1.0)
    assert res.verdict is Verdict.DIVERGENT


def test_direction_agnostic():
    # the integrals only need psi, so both map directions are accepted
    to_disc = ConformalMap.to_disc(DomainFamily.STRIP)
    a = brennan_direct(to_disc, 3.0, tol=0.1)
    b = brennan_direct(to_disc.invert(), 3.0, tol=0.1)
    assert a.level_values == b.level_values
